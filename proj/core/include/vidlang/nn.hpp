// Copyright 2026 vidlang authors
// Parameter storage and transformer building blocks (pre-norm attention,
// feed-forward, layer norm) shared by the video and text encoders.
//
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstdint>
#include <deque>
#include <string>
#include <unordered_map>
#include <vector>

#include "vidlang/autograd.hpp"
#include "vidlang/rng.hpp"
#include "vidlang/tensor.hpp"

namespace vidlang {

// Initialization recipe for a parameter.
enum class Init {
  kZero,
  kOne,
  kTruncNormal,  // N(0, 0.02^2) truncated at 2 sigma
};

// Owns all learnable parameters of a model. Registration order is stable and
// is the canonical iteration order for the optimizer; lookups by name back
// the weight archive. Pointers stay valid for the store's lifetime.
class ParamStore {
 public:
  Parameter* create(const std::string& name, std::vector<int64_t> shape, Init init,
                    bool weight_decay, Rng& rng);
  Parameter* find(const std::string& name);
  const Parameter* find(const std::string& name) const;
  std::vector<Parameter*>& all() { return order_; }
  const std::vector<Parameter*>& all() const { return order_; }
  int64_t total_elements() const;

 private:
  std::deque<Parameter> params_;
  std::vector<Parameter*> order_;
  std::unordered_map<std::string, Parameter*> by_name_;
};

struct LayerNormParams {
  Parameter* gamma = nullptr;
  Parameter* beta = nullptr;

  void init(ParamStore& store, const std::string& prefix, int64_t dim, Rng& rng);
  ag::Var apply(ag::Tape& tape, const ag::Var& x) const;
};

struct LinearParams {
  Parameter* weight = nullptr;  // [in, out]
  Parameter* bias = nullptr;    // [1, out]

  void init(ParamStore& store, const std::string& prefix, int64_t in, int64_t out,
            Rng& rng, Init weight_init = Init::kTruncNormal);
  ag::Var apply(ag::Tape& tape, const ag::Var& x) const;
};

// Multi-head attention; the caller applies pre-norm and the residual add.
// `queries` come from x, keys/values from kv (self-attention when kv == x).
// `key_mask`, if non-null, is a [1, S_kv] additive row of 0 / -inf entries.
struct AttentionParams {
  LinearParams wq, wk, wv, wo;
  int64_t num_heads = 0;
  int64_t dim = 0;

  void init(ParamStore& store, const std::string& prefix, int64_t dim, int64_t heads,
            Rng& rng, Init out_init = Init::kTruncNormal);
  ag::Var apply(ag::Tape& tape, const ag::Var& x, const ag::Var& kv,
                const Tensor* key_mask = nullptr) const;
};

// Two-layer GELU feed-forward with hidden size 4 * dim.
struct MlpParams {
  LinearParams fc1, fc2;

  void init(ParamStore& store, const std::string& prefix, int64_t dim, Rng& rng);
  ag::Var apply(ag::Tape& tape, const ag::Var& x) const;
};

}  // namespace vidlang
