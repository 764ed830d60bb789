// Copyright 2026 vidlang authors
// Minimal reverse-mode automatic differentiation over 2-D tensors.
//
// A forward pass builds a DAG of shared Nodes; backward() topologically
// sorts the graph from a scalar root and accumulates gradients into leaf
// parameters. Everything is single-threaded and double precision.
//
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "vidlang/tensor.hpp"

namespace vidlang {

// A learnable tensor plus its accumulated gradient and Adam moments.
// Parameters live in a ParamStore (see nn.hpp); the autograd graph holds
// non-owning pointers to them.
struct Parameter {
  std::string name;
  Tensor value;
  Tensor grad;
  Tensor adam_m;
  Tensor adam_v;
  bool weight_decay = true;  // false for biases and norm scales/offsets

  void zero_grad() { grad.fill(0.0); }
};

namespace ag {

struct Node;
using Var = std::shared_ptr<Node>;

struct Node {
  Tensor value;
  Tensor grad;  // allocated lazily during backward
  std::vector<Var> inputs;
  // Propagates this node's grad into inputs' grads (and bound parameter).
  std::function<void(Node&)> backprop;
  Parameter* param = nullptr;
  bool requires_grad = false;

  Tensor& ensure_grad();
};

// Per-forward-pass context. Caches one leaf Var per Parameter so each
// parameter is copied into the graph at most once per pass, and switches
// the whole graph between training (grad) and inference (no-grad) modes.
class Tape {
 public:
  explicit Tape(bool grad = true) : grad_(grad) {}

  Var use(Parameter& p);
  bool grad_enabled() const { return grad_; }

 private:
  bool grad_;
  std::unordered_map<const Parameter*, Var> leaves_;
};

Var constant(Tensor value);

// Seeds root.grad with 1 (root must be scalar, shape [1,1]) and runs reverse
// topological accumulation. Parameter grads are *added to*; call zero_grad
// on parameters between steps.
void backward(const Var& root);

// ---------------------------------------------------------------------------
// Primitive operations. All return a fresh node; shapes are validated and
// violations throw Error(InvalidInput).
// ---------------------------------------------------------------------------

Var add(const Var& a, const Var& b);           // same shape
Var sub(const Var& a, const Var& b);           // same shape
Var scale(const Var& a, double c);             // c * a
Var add_rowwise(const Var& m, const Var& row); // m [r,c] + row [1,c]
Var matmul(const Var& a, const Var& b);        // [m,k] x [k,n] -> [m,n]
Var matmul_nt(const Var& a, const Var& b);     // [m,k] x [n,k]^T -> [m,n]
Var transpose(const Var& a);

// Per-row layer normalization: y = gamma * (x - mu) / sqrt(var + eps) + beta.
Var layer_norm(const Var& x, const Var& gamma, const Var& beta, double eps = 1e-5);

// Exact GELU: x * Phi(x) with the Gaussian CDF.
Var gelu(const Var& x);

// Row-wise softmax. If add_mask is non-null it is added to every row before
// normalization; -inf entries produce exactly-zero probabilities, which is
// how padded keys are excluded from attention.
Var softmax_rows(const Var& x, const Tensor* add_mask = nullptr);

Var logsumexp_rows(const Var& x);              // [m,n] -> [m,1], stable
Var diag_part(const Var& x);                   // [n,n] -> [n,1]
Var pick_per_row(const Var& x, const std::vector<int64_t>& cols);  // [m,n] -> [m,1]
Var gather_rows(const Var& x, std::vector<int64_t> idx);  // backward scatter-adds
Var slice_cols(const Var& x, int64_t c0, int64_t c1);     // half-open [c0, c1)
Var concat_rows(const std::vector<Var>& parts);
Var concat_cols(const std::vector<Var>& parts);
Var mean_all(const Var& x);                    // -> [1,1]
Var mean_rows(const Var& x);                   // [m,n] -> [1,n], mean over rows
Var softplus(const Var& x);                    // log(1 + e^x), overflow-safe
Var l2_normalize_rows(const Var& x, double min_norm);  // throws DegenerateEmbedding

}  // namespace ag
}  // namespace vidlang
