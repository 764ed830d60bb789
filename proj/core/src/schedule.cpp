// Copyright 2026 vidlang authors
// Learning-rate schedule implementation.
//
// Licensed under the Apache License, Version 2.0

#include "vidlang/schedule.hpp"

#include <cmath>
#include <string>

#include "vidlang/errors.hpp"

namespace vidlang {

void TrainConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::BadConfig, msg); };
  if (!(base_lr > 0.0)) fail("base_lr must be positive");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    fail("betas must lie in [0, 1)");
  }
  if (!(adam_eps > 0.0)) fail("adam_eps must be positive");
  if (weight_decay < 0.0) fail("weight_decay must be non-negative");
  if (epochs <= 0) fail("epochs must be positive");
  if (warmup_epochs < 0 || warmup_epochs >= epochs) {
    fail("warmup_epochs must be in [0, epochs)");
  }
  if (batch_size < 2) fail("batch_size must be at least 2 (in-batch negatives)");
  if (!(temperature > 0.0)) fail("temperature must be positive");
  for (double w : loss_weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) fail("loss weights must be finite and >= 0");
  }
  if (!(mask_rate > 0.0 && mask_rate <= 1.0)) fail("mask_rate must be in (0, 1]");
  if (min_lr >= 0.0 && min_lr > base_lr) fail("min_lr must not exceed base_lr");
  if (frames_per_clip < 1) fail("frames_per_clip must be at least 1");
}

double lr_at_step(int64_t step, int64_t steps_per_epoch, const TrainConfig& cfg) {
  if (steps_per_epoch <= 0) {
    throw Error(ErrorCode::BadConfig, "steps_per_epoch must be positive");
  }
  if (step < 0) {
    throw Error(ErrorCode::BadConfig, "step must be non-negative");
  }
  const int64_t warmup_steps = cfg.warmup_epochs * steps_per_epoch;
  const int64_t total_steps = cfg.epochs * steps_per_epoch;
  const double min_lr = cfg.resolved_min_lr();

  if (step < warmup_steps) {
    return cfg.base_lr * static_cast<double>(step) / static_cast<double>(warmup_steps);
  }
  // Cosine decay from base_lr (at the first post-warmup step) to min_lr
  // (at the last step of training).
  const int64_t decay_steps = total_steps - 1 - warmup_steps;
  if (decay_steps <= 0) return cfg.base_lr;
  double progress = static_cast<double>(step - warmup_steps) / static_cast<double>(decay_steps);
  progress = std::min(progress, 1.0);
  return min_lr + 0.5 * (cfg.base_lr - min_lr) * (1.0 + std::cos(M_PI * progress));
}

}  // namespace vidlang
