// Copyright 2026 vidlang authors
// Single-stage pre-training loop: batched VTC/VTM/MLM forward and backward
// passes, decoupled-weight-decay updates on the warmup+cosine schedule,
// per-epoch zero-shot validation, and best/last checkpointing with
// bit-exact resume.
//
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vidlang/autograd.hpp"
#include "vidlang/manifest.hpp"
#include "vidlang/model.hpp"
#include "vidlang/objectives.hpp"
#include "vidlang/optimizer.hpp"
#include "vidlang/tokenizer.hpp"
#include "vidlang/zeroshot.hpp"

namespace vidlang {

// One training example: sampled clip frames plus the tokenized caption.
struct TrainPair {
  VideoClip clip;
  TokenSequence tokens;
};

// Graph-mode batch losses; total is the weighted sum ready for backward.
struct BatchLosses {
  ag::Var vtc;
  ag::Var vtm;
  ag::Var mlm;
  ag::Var total;

  LossBundle values(const std::array<double, 3>& weights) const;
};

// Builds the full forward graph for one batch:
//   encode both modalities once per pair; VTC over the [N, N] similarity
//   matrix of projected globals; VTM on fused positives vs. in-batch
//   negative captions; MLM on masked fused text, averaged per sequence and
//   then over the batch.
// Masking and negative sampling draw from streams derived from (cfg.seed,
// step), so a step's randomness is reproducible in isolation.
BatchLosses forward_losses(ag::Tape& tape, const Model& model,
                           const std::vector<TrainPair>& batch,
                           const Vocabulary& vocab, const TrainConfig& cfg,
                           int64_t step);

// One optimizer step at the scheduled learning rate for `step` (0-based).
// The batch is validated up front (shapes, finite pixels, token lengths);
// after that, any numeric blowup in the forward pass, a non-finite loss, or
// a non-finite gradient norm throws Error(DivergedStep) with the update not
// applied.
LossBundle train_step(Model& model, AdamW& opt,
                      const std::vector<TrainPair>& batch,
                      const Vocabulary& vocab, const TrainConfig& cfg,
                      int64_t step, int64_t steps_per_epoch);

struct EpochStats {
  int64_t epoch = 0;        // 0-based
  LossBundle mean;          // mean over the epoch's batches
  double val_accuracy = -1.0;  // -1 when validation was skipped
  double lr_last = 0.0;     // learning rate of the epoch's last step
};

struct TrainResult {
  std::vector<EpochStats> epochs;  // epochs run by this call
  int64_t steps = 0;               // global optimizer steps completed
  double first_step_total = -1.0;  // total loss of global step 0, when run
  double best_metric = -1.0;       // best validation accuracy seen
  int64_t best_epoch = -1;         // 0-based; -1 when never validated
  std::string best_checkpoint;
  std::string last_checkpoint;
};

struct TrainOptions {
  std::string frames_root;  // frame store for clips and validation
  std::string out_dir;      // receives best.ckpt, last.ckpt, train_log.json
  const PromptBank* val_prompts = nullptr;  // enables per-epoch validation
  std::string resume_from;  // checkpoint path; empty starts fresh
  // Stop after this many epochs in this call (checkpointing as usual), so a
  // run can be interrupted and resumed; < 0 runs to cfg.epochs.
  int64_t max_epochs_this_run = -1;
};

// Trains on the manifest's kept train-split entries (all kept entries when
// the manifest carries no split), shuffling each epoch with a seed-derived
// stream and dropping the last partial batch. Validation runs after every
// epoch on kept val-split entries with phase labels when prompts are given;
// the best-accuracy checkpoint is retained alongside the last. Resuming
// restores weights, moments, step and vocabulary, and demands an identical
// training configuration; trajectories match an uninterrupted run bit for
// bit. Writes train_log.json (no timestamps) into out_dir.
// Throws NoData when fewer pairs than one batch remain.
TrainResult train(Model& model, const Manifest& manifest,
                  const TrainConfig& cfg, const TrainOptions& opts);

}  // namespace vidlang
