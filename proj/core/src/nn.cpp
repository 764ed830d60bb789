// Copyright 2026 vidlang authors
// Transformer building block implementation.
//
// Licensed under the Apache License, Version 2.0

#include "vidlang/nn.hpp"

#include <cmath>

#include "vidlang/errors.hpp"

namespace vidlang {

namespace {
constexpr double kInitSigma = 0.02;
constexpr double kInitClip = 0.04;  // 2 sigma
}  // namespace

Parameter* ParamStore::create(const std::string& name, std::vector<int64_t> shape,
                              Init init, bool weight_decay, Rng& rng) {
  if (by_name_.count(name) != 0) {
    throw Error(ErrorCode::BadConfig, "duplicate parameter name " + name);
  }
  params_.emplace_back();
  Parameter& p = params_.back();
  p.name = name;
  p.value = Tensor(shape);
  p.grad = Tensor(shape);
  p.adam_m = Tensor(shape);
  p.adam_v = Tensor(shape);
  p.weight_decay = weight_decay;
  switch (init) {
    case Init::kZero:
      break;
    case Init::kOne:
      p.value.fill(1.0);
      break;
    case Init::kTruncNormal:
      for (int64_t i = 0; i < p.value.numel(); ++i) {
        p.value[i] = rng.next_trunc_normal(kInitSigma, kInitClip);
      }
      break;
  }
  order_.push_back(&p);
  by_name_.emplace(name, &p);
  return &p;
}

Parameter* ParamStore::find(const std::string& name) {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? nullptr : it->second;
}

const Parameter* ParamStore::find(const std::string& name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? nullptr : it->second;
}

int64_t ParamStore::total_elements() const {
  int64_t n = 0;
  for (const Parameter* p : order_) n += p->value.numel();
  return n;
}

void LayerNormParams::init(ParamStore& store, const std::string& prefix, int64_t dim,
                           Rng& rng) {
  gamma = store.create(prefix + ".gamma", {1, dim}, Init::kOne, false, rng);
  beta = store.create(prefix + ".beta", {1, dim}, Init::kZero, false, rng);
}

ag::Var LayerNormParams::apply(ag::Tape& tape, const ag::Var& x) const {
  return ag::layer_norm(x, tape.use(*gamma), tape.use(*beta));
}

void LinearParams::init(ParamStore& store, const std::string& prefix, int64_t in,
                        int64_t out, Rng& rng, Init weight_init) {
  weight = store.create(prefix + ".weight", {in, out}, weight_init, true, rng);
  bias = store.create(prefix + ".bias", {1, out}, Init::kZero, false, rng);
}

ag::Var LinearParams::apply(ag::Tape& tape, const ag::Var& x) const {
  return ag::add_rowwise(ag::matmul(x, tape.use(*weight)), tape.use(*bias));
}

void AttentionParams::init(ParamStore& store, const std::string& prefix, int64_t d,
                           int64_t heads, Rng& rng, Init out_init) {
  dim = d;
  num_heads = heads;
  wq.init(store, prefix + ".wq", d, d, rng);
  wk.init(store, prefix + ".wk", d, d, rng);
  wv.init(store, prefix + ".wv", d, d, rng);
  wo.init(store, prefix + ".wo", d, d, rng, out_init);
}

ag::Var AttentionParams::apply(ag::Tape& tape, const ag::Var& x, const ag::Var& kv,
                               const Tensor* key_mask) const {
  const int64_t dh = dim / num_heads;
  const double inv_sqrt_dh = 1.0 / std::sqrt(static_cast<double>(dh));
  ag::Var q = wq.apply(tape, x);
  ag::Var k = wk.apply(tape, kv);
  ag::Var v = wv.apply(tape, kv);
  std::vector<ag::Var> heads;
  heads.reserve(num_heads);
  for (int64_t h = 0; h < num_heads; ++h) {
    ag::Var qh = ag::slice_cols(q, h * dh, (h + 1) * dh);
    ag::Var kh = ag::slice_cols(k, h * dh, (h + 1) * dh);
    ag::Var vh = ag::slice_cols(v, h * dh, (h + 1) * dh);
    ag::Var scores = ag::scale(ag::matmul_nt(qh, kh), inv_sqrt_dh);
    ag::Var probs = ag::softmax_rows(scores, key_mask);
    heads.push_back(ag::matmul(probs, vh));
  }
  ag::Var ctx = num_heads == 1 ? heads[0] : ag::concat_cols(heads);
  return wo.apply(tape, ctx);
}

void MlpParams::init(ParamStore& store, const std::string& prefix, int64_t dim, Rng& rng) {
  fc1.init(store, prefix + ".fc1", dim, 4 * dim, rng);
  fc2.init(store, prefix + ".fc2", 4 * dim, dim, rng);
}

ag::Var MlpParams::apply(ag::Tape& tape, const ag::Var& x) const {
  return fc2.apply(tape, ag::gelu(fc1.apply(tape, x)));
}

}  // namespace vidlang
