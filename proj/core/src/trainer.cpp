// Copyright 2026 vidlang authors
// Training loop implementation.
//
// Licensed under the Apache License, Version 2.0

#include "vidlang/trainer.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <unordered_map>
#include <utility>

#include "config_json.hpp"
#include "json.hpp"
#include "vidlang/checkpoint.hpp"
#include "vidlang/errors.hpp"
#include "vidlang/frames.hpp"
#include "vidlang/rng.hpp"

namespace vidlang {

namespace {

// Error codes that, on a pre-validated batch, can only arise from numeric
// blowup somewhere in the forward pass.
bool numeric_forward_error(ErrorCode code) {
  return code == ErrorCode::InvalidSimilarity ||
         code == ErrorCode::InvalidLogit || code == ErrorCode::InvalidLoss ||
         code == ErrorCode::DegenerateEmbedding ||
         code == ErrorCode::InvalidInput;
}

// Rejects malformed batches up front so a later InvalidInput from the graph
// unambiguously signals divergence, not bad data.
void validate_batch(const ModelConfig& cfg,
                    const std::vector<TrainPair>& batch) {
  for (const TrainPair& pair : batch) {
    const Tensor& f = pair.clip.frames;
    if (f.ndim() != 4 || f.dim(1) != cfg.image_size ||
        f.dim(2) != cfg.image_size || f.dim(3) != 3 || f.dim(0) < 1) {
      throw Error(ErrorCode::InvalidInput,
                  "clip frames must be [T, image_size, image_size, 3]");
    }
    for (int64_t i = 0; i < f.numel(); ++i) {
      if (!std::isfinite(f[i])) {
        throw Error(ErrorCode::InvalidInput,
                    "clip contains non-finite pixel values");
      }
    }
    if (pair.tokens.length() < 2 || pair.tokens.length() > cfg.max_text_len) {
      throw Error(ErrorCode::InvalidInput, "token sequence length out of range");
    }
  }
}

}  // namespace

LossBundle BatchLosses::values(const std::array<double, 3>& weights) const {
  return total_loss(vtc->value(0, 0), vtm->value(0, 0), mlm->value(0, 0),
                    weights);
}

BatchLosses forward_losses(ag::Tape& tape, const Model& model,
                           const std::vector<TrainPair>& batch,
                           const Vocabulary& vocab, const TrainConfig& cfg,
                           int64_t step) {
  const int64_t n = static_cast<int64_t>(batch.size());
  if (n < 2) {
    throw Error(ErrorCode::BadConfig,
                "a batch needs at least two pairs (VTM negatives)");
  }
  Rng mask_rng(stream_seed(cfg.seed, uint64_t(step), RngStream::kMasking));
  Rng neg_rng(stream_seed(cfg.seed, uint64_t(step), RngStream::kNegatives));

  // Encode each modality once; downstream heads share the features.
  std::vector<VideoFeaturesG> vfeats;
  std::vector<ag::Var> vembs, tembs;
  vfeats.reserve(size_t(n));
  for (const TrainPair& pair : batch) {
    VideoFeaturesG vf = model.encode_video(tape, pair.clip);
    TextFeaturesG tf = model.encode_text(tape, pair.tokens);
    vembs.push_back(model.project_global(tape, vf.cls, Modality::kVideo));
    tembs.push_back(model.project_global(tape, tf.cls, Modality::kText));
    vfeats.push_back(std::move(vf));
  }

  BatchLosses out;
  out.vtc = vtc_loss(
      ag::matmul_nt(ag::concat_rows(vembs), ag::concat_rows(tembs)),
      cfg.temperature);

  const std::vector<int64_t> negatives = sample_vtm_negatives(n, neg_rng);
  std::vector<ag::Var> pos_cls, neg_cls;
  for (int64_t i = 0; i < n; ++i) {
    pos_cls.push_back(
        model.fuse(tape, vfeats[size_t(i)], batch[size_t(i)].tokens)
            .global_text);
    neg_cls.push_back(
        model
            .fuse(tape, vfeats[size_t(i)],
                  batch[size_t(negatives[size_t(i)])].tokens)
            .global_text);
  }
  out.vtm = vtm_loss(model.vtm_score(tape, ag::concat_rows(pos_cls)),
                     model.vtm_score(tape, ag::concat_rows(neg_cls)));

  std::vector<ag::Var> mlm_terms;
  for (int64_t i = 0; i < n; ++i) {
    auto [masked, plan] =
        mask_tokens(batch[size_t(i)].tokens, vocab, cfg.mask_rate, mask_rng);
    FusedFeaturesG fused = model.fuse(tape, vfeats[size_t(i)], masked);
    ag::Var rows = ag::gather_rows(fused.text_hidden, plan.positions);
    mlm_terms.push_back(mlm_loss(model.mlm_logits(tape, rows), plan));
  }
  out.mlm = ag::mean_all(ag::concat_rows(mlm_terms));

  out.total = ag::add(
      ag::add(ag::scale(out.vtc, cfg.loss_weights[0]),
              ag::scale(out.vtm, cfg.loss_weights[1])),
      ag::scale(out.mlm, cfg.loss_weights[2]));
  return out;
}

LossBundle train_step(Model& model, AdamW& opt,
                      const std::vector<TrainPair>& batch,
                      const Vocabulary& vocab, const TrainConfig& cfg,
                      int64_t step, int64_t steps_per_epoch) {
  validate_batch(model.config(), batch);
  opt.zero_grad();
  ag::Tape tape(true);
  std::optional<BatchLosses> graph;
  try {
    graph.emplace(forward_losses(tape, model, batch, vocab, cfg, step));
  } catch (const Error& e) {
    if (numeric_forward_error(e.code())) {
      throw Error(ErrorCode::DivergedStep,
                  std::string("forward pass diverged: ") + e.what());
    }
    throw;
  }
  const LossBundle bundle = graph->values(cfg.loss_weights);
  if (!std::isfinite(bundle.total)) {
    throw Error(ErrorCode::DivergedStep, "non-finite total loss");
  }
  ag::backward(graph->total);
  const double norm = clip_grad_norm(model.params().all(), cfg.grad_clip);
  if (!std::isfinite(norm)) {
    opt.zero_grad();
    throw Error(ErrorCode::DivergedStep, "non-finite gradient norm");
  }
  opt.step(lr_at_step(step, steps_per_epoch, cfg));
  return bundle;
}

TrainResult train(Model& model, const Manifest& manifest,
                  const TrainConfig& cfg, const TrainOptions& opts) {
  cfg.validate();
  const ModelConfig& mc = model.config();

  // --- example selection ----------------------------------------------------
  std::vector<const ManifestEntry*> train_entries;
  std::vector<ManifestEntry> val_entries;
  bool any_marked_train = false;
  for (const ManifestEntry& e : manifest.entries) {
    if (!e.kept()) continue;
    if (e.split == "train") any_marked_train = true;
  }
  for (const ManifestEntry& e : manifest.entries) {
    if (!e.kept()) continue;
    if (!any_marked_train || e.split == "train") train_entries.push_back(&e);
    if (e.split == "val" && !e.phase_label.empty()) val_entries.push_back(e);
  }
  const int64_t n_train = static_cast<int64_t>(train_entries.size());
  const int64_t spe = n_train / cfg.batch_size;
  if (spe == 0) {
    throw Error(ErrorCode::NoData, "fewer training pairs than one batch");
  }

  // --- optimizer, vocabulary, resume ----------------------------------------
  AdamW opt(model.params().all(), cfg);
  Vocabulary vocab;
  int64_t start_step = 0;
  double best_metric = -1.0;
  if (!opts.resume_from.empty()) {
    const CheckpointState got = load_checkpoint(opts.resume_from, model, opt);
    if (train_config_to_json(got.train_config) != train_config_to_json(cfg)) {
      throw Error(ErrorCode::BadConfig,
                  "resume requires the original training configuration");
    }
    vocab = Vocabulary::from_words(got.vocab_words);
    start_step = got.step;
    best_metric = got.best_metric;
  } else {
    std::vector<std::string> texts;
    for (const ManifestEntry* e : train_entries) texts.push_back(e->caption);
    if (opts.val_prompts != nullptr) {
      for (const auto& p : *opts.val_prompts) texts.push_back(p.text);
    }
    vocab = Vocabulary::build(texts, mc.vocab_size);
  }
  if (vocab.size() > mc.vocab_size) {
    throw Error(ErrorCode::BadConfig, "vocabulary exceeds the embedding table");
  }

  // --- pair assembly (tokens up front, frames cached on first use) ----------
  std::vector<TrainPair> pairs(static_cast<size_t>(n_train));
  for (int64_t i = 0; i < n_train; ++i) {
    const ManifestEntry& e = *train_entries[size_t(i)];
    TrainPair& p = pairs[size_t(i)];
    p.tokens = tokenize(e.caption, vocab, mc.max_text_len);
    p.clip.clip_id = e.clip_id;
    p.clip.source_id = e.source_id;
    p.clip.phase_label = e.phase_label;
    p.clip.start_time = e.start;
    p.clip.end_time = e.end;
  }
  auto clip_frames = [&](TrainPair& p) -> void {
    if (p.clip.frames.numel() == 0) {
      p.clip.frames = load_clip_frames(opts.frames_root, p.clip.source_id,
                                       p.clip.start_time, p.clip.end_time,
                                       cfg.frames_per_clip);
    }
  };

  const bool validate_each_epoch =
      opts.val_prompts != nullptr && !val_entries.empty();

  std::filesystem::create_directories(opts.out_dir);
  const std::string best_path =
      (std::filesystem::path(opts.out_dir) / "best.ckpt").string();
  const std::string last_path =
      (std::filesystem::path(opts.out_dir) / "last.ckpt").string();

  TrainResult result;
  result.best_metric = best_metric;

  // --- epochs ----------------------------------------------------------------
  const int64_t first_epoch = start_step / spe;
  int64_t epochs_this_run = 0;
  int64_t step = start_step;
  bool wrote_best = false;
  for (int64_t e = first_epoch; e < cfg.epochs; ++e) {
    if (opts.max_epochs_this_run >= 0 &&
        epochs_this_run >= opts.max_epochs_this_run) {
      break;
    }
    std::vector<int64_t> order(static_cast<size_t>(n_train));
    for (int64_t i = 0; i < n_train; ++i) order[size_t(i)] = i;
    Rng shuffle_rng(stream_seed(cfg.seed, uint64_t(e), RngStream::kShuffle));
    for (size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[size_t(shuffle_rng.next_below(i))]);
    }

    EpochStats stats;
    stats.epoch = e;
    int64_t batches = 0;
    for (int64_t b = step - e * spe; b < spe; ++b) {
      std::vector<TrainPair> batch;
      batch.reserve(size_t(cfg.batch_size));
      for (int64_t i = b * cfg.batch_size; i < (b + 1) * cfg.batch_size; ++i) {
        TrainPair& p = pairs[size_t(order[size_t(i)])];
        clip_frames(p);
        batch.push_back(p);
      }
      stats.lr_last = lr_at_step(step, spe, cfg);
      const LossBundle lb =
          train_step(model, opt, batch, vocab, cfg, step, spe);
      if (step == 0) result.first_step_total = lb.total;
      stats.mean.vtc += lb.vtc;
      stats.mean.vtm += lb.vtm;
      stats.mean.mlm += lb.mlm;
      stats.mean.total += lb.total;
      ++step;
      ++batches;
    }
    if (batches > 0) {
      stats.mean.vtc /= double(batches);
      stats.mean.vtm /= double(batches);
      stats.mean.mlm /= double(batches);
      stats.mean.total /= double(batches);
    }

    if (validate_each_epoch) {
      stats.val_accuracy =
          evaluate(model, vocab, val_entries, opts.frames_root,
                   *opts.val_prompts, cfg.frames_per_clip)
              .accuracy;
    }

    CheckpointState st;
    st.model_config = mc;
    st.train_config = cfg;
    st.vocab_words = vocab.words();
    st.step = step;
    st.epoch = e + 1;
    if (validate_each_epoch && stats.val_accuracy > result.best_metric) {
      result.best_metric = stats.val_accuracy;
      result.best_epoch = e;
      st.best_metric = result.best_metric;
      save_checkpoint(best_path, model, opt, st);
      wrote_best = true;
    }
    st.best_metric = result.best_metric;
    save_checkpoint(last_path, model, opt, st);

    result.epochs.push_back(stats);
    ++epochs_this_run;
  }

  // Without validation (or when resuming past the best epoch) keep the pair
  // of artifacts complete: best falls back to the latest state.
  if (!wrote_best && !std::filesystem::exists(best_path)) {
    CheckpointState st;
    st.model_config = mc;
    st.train_config = cfg;
    st.vocab_words = vocab.words();
    st.step = step;
    st.epoch = step / spe;
    st.best_metric = result.best_metric;
    save_checkpoint(best_path, model, opt, st);
  }

  result.steps = step;
  result.best_checkpoint = best_path;
  result.last_checkpoint = last_path;

  // --- run log (deterministic: no timestamps) --------------------------------
  nlohmann::json log;
  log["epochs"] = nlohmann::json::array();
  for (const EpochStats& s : result.epochs) {
    nlohmann::json je = {
        {"epoch", s.epoch},           {"vtc", s.mean.vtc},
        {"vtm", s.mean.vtm},          {"mlm", s.mean.mlm},
        {"total", s.mean.total},      {"lr_last", s.lr_last},
    };
    if (s.val_accuracy >= 0.0) je["val_accuracy"] = s.val_accuracy;
    log["epochs"].push_back(je);
  }
  log["steps"] = result.steps;
  log["first_step_total"] = result.first_step_total;
  log["best_metric"] = result.best_metric;
  log["best_epoch"] = result.best_epoch;
  log["steps_per_epoch"] = spe;
  log["train_pairs"] = n_train;
  log["val_clips"] = int64_t(val_entries.size());
  std::ofstream out(std::filesystem::path(opts.out_dir) / "train_log.json",
                    std::ios::binary | std::ios::trunc);
  out << log.dump(2) << "\n";
  if (!out) {
    throw Error(ErrorCode::IoError, "cannot write train_log.json");
  }
  return result;
}

}  // namespace vidlang
