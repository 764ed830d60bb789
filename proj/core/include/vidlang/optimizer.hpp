// Copyright 2026 vidlang authors
// AdamW with decoupled weight decay and global-norm gradient clipping.
//
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstdint>
#include <vector>

#include "vidlang/autograd.hpp"
#include "vidlang/schedule.hpp"

namespace vidlang {

// Scales all gradients by clip/norm when the global L2 norm exceeds clip.
// Returns the pre-clip norm. clip <= 0 disables clipping.
double clip_grad_norm(const std::vector<Parameter*>& params, double clip);

class AdamW {
 public:
  AdamW(std::vector<Parameter*> params, const TrainConfig& cfg)
      : params_(std::move(params)), cfg_(cfg) {}

  // Applies one update with the given learning rate. Bias correction uses
  // the internal step counter (1-based after the first call). Weight decay
  // is decoupled and skips parameters flagged weight_decay == false
  // (biases, norm scales/offsets).
  void step(double lr);

  void zero_grad();

  int64_t step_count() const { return t_; }
  void set_step_count(int64_t t) { t_ = t; }  // checkpoint restore

 private:
  std::vector<Parameter*> params_;
  TrainConfig cfg_;
  int64_t t_ = 0;
};

}  // namespace vidlang
