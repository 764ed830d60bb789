// Copyright 2026 vidlang authors
// Training hyperparameters and the warmup + cosine learning-rate schedule.
//
// Licensed under the Apache License, Version 2.0

#pragma once

#include <array>
#include <cstdint>

namespace vidlang {

struct TrainConfig {
  double base_lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.95;
  double adam_eps = 1e-8;
  double weight_decay = 0.02;        // decoupled; skips biases and norm params
  int64_t warmup_epochs = 1;
  int64_t epochs = 10;
  int64_t batch_size = 256;
  double temperature = 0.07;         // contrastive temperature
  std::array<double, 3> loss_weights{1.0, 1.0, 1.0};  // (vtc, vtm, mlm)
  double mask_rate = 0.5;
  double grad_clip = 1.0;            // global norm; <= 0 disables
  double min_lr = -1.0;              // < 0 means base_lr / 100
  int64_t frames_per_clip = 4;
  uint64_t seed = 42;

  double resolved_min_lr() const { return min_lr < 0.0 ? base_lr / 100.0 : min_lr; }
  void validate() const;  // throws Error(BadConfig)
};

// Learning rate at a 0-based optimizer step: linear warmup from 0 over the
// warmup epochs (lr hits base_lr exactly when warmup ends), then cosine decay
// to min_lr at the final step. With zero warmup epochs the schedule starts
// at base_lr.
double lr_at_step(int64_t step, int64_t steps_per_epoch, const TrainConfig& cfg);

}  // namespace vidlang
