// Copyright 2026 vidlang authors
// Objective implementations.
//
// Licensed under the Apache License, Version 2.0

#include "vidlang/objectives.hpp"

#include <cmath>

#include "vidlang/errors.hpp"

namespace vidlang {

std::pair<TokenSequence, MaskingPlan> mask_tokens(const TokenSequence& seq,
                                                  const Vocabulary& vocab, double rate,
                                                  Rng& rng) {
  if (!(rate > 0.0 && rate <= 1.0)) {
    throw Error(ErrorCode::BadConfig, "mask rate must be in (0, 1]");
  }
  std::vector<int64_t> maskable;
  for (size_t i = 0; i < seq.ids.size(); ++i) {
    if (seq.attention_mask[i] == 1 && seq.special[i] == 0) {
      maskable.push_back(static_cast<int64_t>(i));
    }
  }
  if (maskable.empty()) {
    throw Error(ErrorCode::NothingToMask, "sequence has no maskable positions");
  }

  MaskingPlan plan;
  for (int64_t pos : maskable) {
    if (rng.next_double() < rate) plan.positions.push_back(pos);
  }
  if (plan.positions.empty()) {
    plan.positions.push_back(maskable[rng.next_below(static_cast<int64_t>(maskable.size()))]);
  }

  TokenSequence masked = seq;
  for (int64_t pos : plan.positions) {
    const int64_t original = seq.ids[pos];
    plan.original_ids.push_back(original);
    const double u = rng.next_double();
    int64_t replacement;
    if (u < 0.8) {
      replacement = Vocabulary::kMask;
    } else if (u < 0.9) {
      // Random *word* id: specials are excluded from the replacement pool.
      replacement = Vocabulary::kNumSpecial + rng.next_below(vocab.num_words());
    } else {
      replacement = original;
    }
    plan.replaced_ids.push_back(replacement);
    masked.ids[pos] = replacement;
  }
  return {std::move(masked), std::move(plan)};
}

ag::Var vtc_loss(const ag::Var& sims, double temperature) {
  const Tensor& s = sims->value;
  if (s.ndim() != 2 || s.rows() != s.cols() || s.rows() < 1) {
    throw Error(ErrorCode::InvalidSimilarity, "similarity matrix must be square");
  }
  if (!s.all_finite()) {
    throw Error(ErrorCode::InvalidSimilarity, "similarity matrix has non-finite entries");
  }
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw Error(ErrorCode::BadTemperature, "temperature must be positive and finite");
  }
  // L = 1/2 (L_v2t + L_t2v); each direction is the mean over the batch of
  // logsumexp(row / tau) - diag / tau, i.e. InfoNCE with the matched pair on
  // the diagonal. The text-to-video direction is the same loss on S^T.
  ag::Var scaled = ag::scale(sims, 1.0 / temperature);
  ag::Var v2t = ag::mean_all(ag::sub(ag::logsumexp_rows(scaled), ag::diag_part(scaled)));
  ag::Var scaled_t = ag::transpose(scaled);
  ag::Var t2v = ag::mean_all(ag::sub(ag::logsumexp_rows(scaled_t), ag::diag_part(scaled_t)));
  return ag::scale(ag::add(v2t, t2v), 0.5);
}

double vtc_loss(const Tensor& sims, double temperature) {
  return vtc_loss(ag::constant(sims), temperature)->value(0, 0);
}

std::vector<int64_t> sample_vtm_negatives(int64_t n, Rng& rng) {
  if (n < 2) {
    throw Error(ErrorCode::NoNegativeAvailable,
                "need at least 2 items for in-batch negatives");
  }
  std::vector<int64_t> out(static_cast<size_t>(n));
  for (int64_t i = 0; i < n; ++i) {
    // Uniform over the n-1 other indices.
    int64_t j = rng.next_below(n - 1);
    out[static_cast<size_t>(i)] = j >= i ? j + 1 : j;
  }
  return out;
}

namespace {
void check_scores(const Tensor& t, const char* which) {
  if (t.ndim() != 2 || t.cols() != 1 || t.rows() < 1) {
    throw Error(ErrorCode::InvalidLogit, std::string(which) + " scores must be [N, 1]");
  }
  if (!t.all_finite()) {
    throw Error(ErrorCode::InvalidLogit, std::string(which) + " scores must be finite");
  }
}
}  // namespace

ag::Var vtm_loss(const ag::Var& pos_scores, const ag::Var& neg_scores) {
  check_scores(pos_scores->value, "positive");
  check_scores(neg_scores->value, "negative");
  if (pos_scores->value.rows() != neg_scores->value.rows()) {
    throw Error(ErrorCode::InvalidLogit, "positive/negative score counts differ");
  }
  // -log sigmoid(s) == softplus(-s) and -log(1 - sigmoid(s)) == softplus(s);
  // both stay finite for any score.
  ag::Var pos_term = ag::mean_all(ag::softplus(ag::scale(pos_scores, -1.0)));
  ag::Var neg_term = ag::mean_all(ag::softplus(neg_scores));
  return ag::add(pos_term, neg_term);
}

double vtm_loss(const Tensor& pos_scores, const Tensor& neg_scores) {
  return vtm_loss(ag::constant(pos_scores), ag::constant(neg_scores))->value(0, 0);
}

ag::Var mlm_loss(const ag::Var& logits, const MaskingPlan& plan) {
  if (plan.count() == 0) {
    throw Error(ErrorCode::EmptyMaskSet, "masking plan is empty");
  }
  const Tensor& l = logits->value;
  if (l.rows() != plan.count()) {
    throw Error(ErrorCode::InvalidLogit, "logit rows must match masked positions");
  }
  if (!l.all_finite()) {
    throw Error(ErrorCode::InvalidLogit, "logits must be finite");
  }
  for (int64_t id : plan.original_ids) {
    if (id < 0 || id >= l.cols()) {
      throw Error(ErrorCode::BadToken, "target id outside logit range");
    }
  }
  // mean over masked positions of logsumexp(row) - logit[target].
  return ag::mean_all(
      ag::sub(ag::logsumexp_rows(logits), ag::pick_per_row(logits, plan.original_ids)));
}

double mlm_loss(const Tensor& logits, const MaskingPlan& plan) {
  return mlm_loss(ag::constant(logits), plan)->value(0, 0);
}

LossBundle total_loss(double vtc, double vtm, double mlm,
                      const std::array<double, 3>& weights) {
  for (double v : {vtc, vtm, mlm}) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::InvalidLoss, "loss component is non-finite");
    }
  }
  LossBundle b;
  b.vtc = vtc;
  b.vtm = vtm;
  b.mlm = mlm;
  b.total = weights[0] * vtc + weights[1] * vtm + weights[2] * mlm;
  return b;
}

}  // namespace vidlang
