// Copyright 2026 vidlang authors
// Learning-rate schedule tests against the closed form.
//
// Licensed under the Apache License, Version 2.0

#include <cmath>

#include "doctest.h"
#include "vidlang/errors.hpp"
#include "vidlang/schedule.hpp"

using namespace vidlang;

namespace {
// Independent closed-form reference: linear warmup to base over W steps,
// then cosine from base to min across the remaining steps ending at the
// last step of training.
double reference_lr(int64_t step, int64_t spe, const TrainConfig& c) {
  const int64_t w = c.warmup_epochs * spe;
  const int64_t total = c.epochs * spe;
  const double min_lr = c.min_lr < 0 ? c.base_lr / 100.0 : c.min_lr;
  if (step < w) return c.base_lr * double(step) / double(w);
  const double span = double(total - 1 - w);
  if (span <= 0) return c.base_lr;
  const double x = std::min(1.0, double(step - w) / span);
  return min_lr + 0.5 * (c.base_lr - min_lr) * (1.0 + std::cos(M_PI * x));
}

TrainConfig small_cfg() {
  TrainConfig c;
  c.base_lr = 1e-4;
  c.warmup_epochs = 1;
  c.epochs = 10;
  return c;
}
}  // namespace

TEST_CASE("schedule: warmup boundaries") {
  TrainConfig c = small_cfg();
  const int64_t spe = 50;
  CHECK(lr_at_step(0, spe, c) == 0.0);
  // End of warmup hits base_lr exactly, and exactly once.
  CHECK(lr_at_step(50, spe, c) == c.base_lr);
  CHECK_LT(lr_at_step(49, spe, c), c.base_lr);
  CHECK_LT(lr_at_step(51, spe, c), c.base_lr);
  // Final step lands on min_lr = base / 100.
  CHECK(lr_at_step(10 * spe - 1, spe, c) == doctest::Approx(1e-6).epsilon(1e-12));
}

TEST_CASE("schedule: midpoint of the decay matches the closed form") {
  TrainConfig c = small_cfg();
  const int64_t spe = 50;
  const int64_t w = spe;
  const int64_t last = 10 * spe - 1;
  // Odd decay span here, so evaluate the exact midpoint via the reference.
  const int64_t mid = w + (last - w) / 2;
  CHECK(lr_at_step(mid, spe, c) == doctest::Approx(reference_lr(mid, spe, c)).epsilon(1e-12));
  // With an even decay span the midpoint value is exactly (base + min) / 2.
  TrainConfig c2 = small_cfg();
  c2.epochs = 4;
  c2.warmup_epochs = 1;
  const int64_t spe2 = 51;  // decay span = 3*51 - 1 = 152 steps, midpoint at 76
  const int64_t mid2 = spe2 + (4 * spe2 - 1 - spe2) / 2;
  const double expect = (c2.base_lr + c2.base_lr / 100.0) / 2.0;
  CHECK(lr_at_step(mid2, spe2, c2) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("schedule: every step matches the closed form") {
  TrainConfig c = small_cfg();
  c.epochs = 7;
  c.warmup_epochs = 2;
  c.min_lr = 3e-6;
  const int64_t spe = 13;
  for (int64_t s = 0; s < c.epochs * spe; ++s) {
    CHECK(lr_at_step(s, spe, c) == doctest::Approx(reference_lr(s, spe, c)).epsilon(1e-12));
  }
  // Monotone decrease after warmup.
  double prev = lr_at_step(2 * spe, spe, c);
  for (int64_t s = 2 * spe + 1; s < c.epochs * spe; ++s) {
    const double cur = lr_at_step(s, spe, c);
    CHECK_LT(cur, prev);
    prev = cur;
  }
}

TEST_CASE("schedule: zero warmup starts at base_lr") {
  TrainConfig c = small_cfg();
  c.warmup_epochs = 0;
  CHECK(lr_at_step(0, 10, c) == c.base_lr);
}

TEST_CASE("schedule: default min_lr is base / 100") {
  TrainConfig c = small_cfg();
  CHECK(c.resolved_min_lr() == doctest::Approx(c.base_lr / 100.0).epsilon(1e-15));
  c.min_lr = 5e-6;
  CHECK(c.resolved_min_lr() == 5e-6);
}

TEST_CASE("schedule: invalid configs are rejected") {
  TrainConfig c = small_cfg();
  c.warmup_epochs = c.epochs;  // warmup must be strictly shorter
  CHECK_THROWS_AS(c.validate(), Error);
  TrainConfig c2 = small_cfg();
  c2.batch_size = 1;
  CHECK_THROWS_AS(c2.validate(), Error);
  CHECK_THROWS_AS(lr_at_step(0, 0, small_cfg()), Error);
}
