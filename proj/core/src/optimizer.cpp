// Copyright 2026 vidlang authors
// Optimizer implementation.
//
// Licensed under the Apache License, Version 2.0

#include "vidlang/optimizer.hpp"

#include <cmath>

namespace vidlang {

double clip_grad_norm(const std::vector<Parameter*>& params, double clip) {
  double sq = 0.0;
  for (const Parameter* p : params) {
    for (int64_t i = 0; i < p->grad.numel(); ++i) sq += p->grad[i] * p->grad[i];
  }
  const double norm = std::sqrt(sq);
  if (clip > 0.0 && norm > clip) {
    const double s = clip / norm;
    for (Parameter* p : params) {
      for (int64_t i = 0; i < p->grad.numel(); ++i) p->grad[i] *= s;
    }
  }
  return norm;
}

void AdamW::step(double lr) {
  ++t_;
  const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  for (Parameter* p : params_) {
    const int64_t n = p->value.numel();
    for (int64_t i = 0; i < n; ++i) {
      const double g = p->grad[i];
      p->adam_m[i] = cfg_.beta1 * p->adam_m[i] + (1.0 - cfg_.beta1) * g;
      p->adam_v[i] = cfg_.beta2 * p->adam_v[i] + (1.0 - cfg_.beta2) * g * g;
      const double mhat = p->adam_m[i] / bc1;
      const double vhat = p->adam_v[i] / bc2;
      double update = mhat / (std::sqrt(vhat) + cfg_.adam_eps);
      if (p->weight_decay) update += cfg_.weight_decay * p->value[i];
      p->value[i] -= lr * update;
    }
  }
}

void AdamW::zero_grad() {
  for (Parameter* p : params_) p->zero_grad();
}

}  // namespace vidlang
