// Copyright 2026 vidlang authors
// Pre-training objectives: video-text contrastive (VTC), video-text matching
// (VTM) and masked language modeling (MLM).
//
// Each loss has a graph-mode builder used by the trainer and a plain-tensor
// wrapper with the same arithmetic for direct evaluation in tests and tools.
//
// Licensed under the Apache License, Version 2.0

#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "vidlang/autograd.hpp"
#include "vidlang/model.hpp"
#include "vidlang/rng.hpp"
#include "vidlang/tokenizer.hpp"

namespace vidlang {

// Record of one masking pass over a token sequence; enough to reproduce the
// MLM targets and to audit the 80/10/10 replacement policy.
struct MaskingPlan {
  std::vector<int64_t> positions;     // masked positions, ascending
  std::vector<int64_t> original_ids;  // ids before replacement, same order
  std::vector<int64_t> replaced_ids;  // ids written into the sequence
  uint64_t seed = 0;

  int64_t count() const { return static_cast<int64_t>(positions.size()); }
};

// Masks maskable positions (real, non-special tokens) independently at
// `rate`; if none get selected, one is forced uniformly so every sequence
// contributes to MLM. Replacements follow the 80/10/10 policy: [MASK],
// random word id, or kept unchanged. Throws Error(NothingToMask) when the
// sequence has no maskable positions.
std::pair<TokenSequence, MaskingPlan> mask_tokens(const TokenSequence& seq,
                                                  const Vocabulary& vocab, double rate,
                                                  Rng& rng);

// Symmetric InfoNCE over a [N, N] cosine-similarity matrix whose diagonal
// holds the matched pairs: mean of the video-to-text and text-to-video
// cross-entropies, each computed from similarities scaled by 1/temperature.
// Throws InvalidSimilarity for non-finite or non-square input, BadTemperature
// for temperature <= 0.
ag::Var vtc_loss(const ag::Var& sims, double temperature);
double vtc_loss(const Tensor& sims, double temperature);

// Uniform in-batch negative captions: out[i] != i. Requires n >= 2
// (otherwise NoNegativeAvailable).
std::vector<int64_t> sample_vtm_negatives(int64_t n, Rng& rng);

// Binary matching loss over matched/mismatched pair scores ([N, 1] each):
// mean over pairs of -log sigmoid(s_pos) - log(1 - sigmoid(s_neg)), computed
// in softplus form so large scores cannot overflow. Throws InvalidLogit for
// non-finite scores.
ag::Var vtm_loss(const ag::Var& pos_scores, const ag::Var& neg_scores);
double vtm_loss(const Tensor& pos_scores, const Tensor& neg_scores);

// Masked-token cross-entropy: mean over the plan's positions of
// -log softmax(logits)[original id]. `logits` is [|M|, vocab], row i
// corresponding to plan position i. Throws EmptyMaskSet for an empty plan.
ag::Var mlm_loss(const ag::Var& logits, const MaskingPlan& plan);
double mlm_loss(const Tensor& logits, const MaskingPlan& plan);

// Weighted total of the three losses. Weights are (vtc, vtm, mlm).
struct LossBundle {
  double vtc = 0.0;
  double vtm = 0.0;
  double mlm = 0.0;
  double total = 0.0;
};

LossBundle total_loss(double vtc, double vtm, double mlm,
                      const std::array<double, 3>& weights);

}  // namespace vidlang
