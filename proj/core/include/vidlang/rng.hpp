// Copyright 2026 vidlang authors
// Deterministic random number generation. SplitMix64 is used everywhere so
// that shuffles, masking and negative sampling replay bit-for-bit on any
// platform; std:: distributions are implementation-defined and are avoided.
//
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cmath>
#include <cstdint>

namespace vidlang {

class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  // SplitMix64 step (Steele, Lea & Flood 2014).
  uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n). Lemire multiply-shift; the modulo bias is
  // bounded by n / 2^64 and is irrelevant for the small n used here.
  int64_t next_below(int64_t n) {
    return static_cast<int64_t>(
        (static_cast<unsigned __int128>(next_u64()) * static_cast<uint64_t>(n)) >> 64);
  }

  // Standard normal via Box-Muller (first variate only, keeps the stream
  // position independent of how many variates a caller consumes).
  double next_normal() {
    double u1 = 1.0 - next_double();  // (0, 1]
    double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  // Normal(0, sigma) truncated to [-clip, clip] by resampling.
  double next_trunc_normal(double sigma, double clip) {
    for (;;) {
      double v = sigma * next_normal();
      if (v >= -clip && v <= clip) return v;
    }
  }

  // Derives an independent stream seed from components (e.g. seed, step,
  // purpose tag). Chains SplitMix64 so nearby inputs decorrelate.
  static uint64_t mix(uint64_t a, uint64_t b) {
    Rng r(a ^ (b + 0x9E3779B97F4A7C15ull + (a << 6) + (a >> 2)));
    r.next_u64();
    return r.next_u64();
  }
  static uint64_t mix(uint64_t a, uint64_t b, uint64_t c) { return mix(mix(a, b), c); }

 private:
  uint64_t state_;
};

// Stream purpose tags for Rng::mix so distinct consumers of the same
// (seed, step) pair never collide.
enum class RngStream : uint64_t {
  kShuffle = 0x51,
  kMasking = 0x52,
  kNegatives = 0x53,
  kInit = 0x54,
  kCaption = 0x55,
  kSplit = 0x56,
  kFrames = 0x57,
};

inline uint64_t stream_seed(uint64_t seed, uint64_t step, RngStream s) {
  return Rng::mix(seed, step, static_cast<uint64_t>(s));
}

}  // namespace vidlang
