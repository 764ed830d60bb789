// Copyright 2026 vidlang authors
// Finite-difference verification of every autograd primitive.
//
// Licensed under the Apache License, Version 2.0

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "doctest.h"
#include "test_util.hpp"
#include "vidlang/autograd.hpp"
#include "vidlang/errors.hpp"

using namespace vidlang;
using namespace vidlang::testing;
using ag::Var;

namespace {

Parameter make_param(const std::string& name, Tensor value) {
  Parameter p;
  p.name = name;
  p.value = std::move(value);
  p.grad = Tensor(p.value.shape());
  return p;
}

// Reduces a matrix output to a scalar via fixed random row/column weights so
// every output entry receives a distinct gradient contribution.
Var weighted_sum(const Var& x, uint64_t seed) {
  Rng rng(seed);
  const int64_t m = x->value.rows(), n = x->value.cols();
  Tensor a({1, m}), b({n, 1});
  for (int64_t i = 0; i < m; ++i) a(0, i) = 0.5 + rng.next_double();
  for (int64_t j = 0; j < n; ++j) b(j, 0) = 0.5 + rng.next_double();
  return ag::matmul(ag::matmul(ag::constant(a), x), ag::constant(b));
}

// Runs an FD check of builder() over the given parameters.
void check_op(const std::string& label, std::vector<Parameter*> params,
              const std::function<Var(ag::Tape&)>& builder, double tol = 1e-6) {
  auto value = [&]() {
    ag::Tape tape(false);
    return builder(tape)->value(0, 0);
  };
  auto backward = [&]() {
    ag::Tape tape(true);
    ag::backward(builder(tape));
  };
  GradCheckResult res = grad_check(params, value, backward, 16, 1e-6, 0xF00D);
  INFO(label, ": ", res.worst);
  CHECK_LT(res.max_rel_err, tol);
}

}  // namespace

TEST_CASE("autograd: elementwise and matmul ops match finite differences") {
  Rng rng(11);
  Parameter a = make_param("a", random_tensor({4, 5}, rng));
  Parameter b = make_param("b", random_tensor({4, 5}, rng));
  Parameter row = make_param("row", random_tensor({1, 5}, rng));
  Parameter w = make_param("w", random_tensor({5, 3}, rng));
  Parameter u = make_param("u", random_tensor({6, 5}, rng));

  check_op("add", {&a, &b}, [&](ag::Tape& t) {
    return weighted_sum(ag::add(t.use(a), t.use(b)), 1);
  });
  check_op("sub", {&a, &b}, [&](ag::Tape& t) {
    return weighted_sum(ag::sub(t.use(a), t.use(b)), 2);
  });
  check_op("scale", {&a}, [&](ag::Tape& t) {
    return weighted_sum(ag::scale(t.use(a), -1.7), 3);
  });
  check_op("add_rowwise", {&a, &row}, [&](ag::Tape& t) {
    return weighted_sum(ag::add_rowwise(t.use(a), t.use(row)), 4);
  });
  check_op("matmul", {&a, &w}, [&](ag::Tape& t) {
    return weighted_sum(ag::matmul(t.use(a), t.use(w)), 5);
  });
  check_op("matmul_nt", {&a, &u}, [&](ag::Tape& t) {
    return weighted_sum(ag::matmul_nt(t.use(a), t.use(u)), 6);
  });
  check_op("transpose", {&a}, [&](ag::Tape& t) {
    return weighted_sum(ag::transpose(t.use(a)), 7);
  });
}

TEST_CASE("autograd: nonlinearities match finite differences") {
  Rng rng(22);
  Parameter x = make_param("x", random_tensor({3, 7}, rng));
  Parameter gamma = make_param("gamma", random_tensor({1, 7}, rng, 0.5));
  Parameter beta = make_param("beta", random_tensor({1, 7}, rng, 0.5));

  check_op("layer_norm", {&x, &gamma, &beta}, [&](ag::Tape& t) {
    return weighted_sum(ag::layer_norm(t.use(x), t.use(gamma), t.use(beta)), 1);
  });
  check_op("gelu", {&x}, [&](ag::Tape& t) {
    return weighted_sum(ag::gelu(t.use(x)), 2);
  });
  check_op("softmax_rows", {&x}, [&](ag::Tape& t) {
    return weighted_sum(ag::softmax_rows(t.use(x)), 3);
  });
  check_op("logsumexp_rows", {&x}, [&](ag::Tape& t) {
    return weighted_sum(ag::logsumexp_rows(t.use(x)), 4);
  });
  check_op("softplus", {&x}, [&](ag::Tape& t) {
    return weighted_sum(ag::softplus(t.use(x)), 5);
  });
  check_op("l2_normalize_rows", {&x}, [&](ag::Tape& t) {
    return weighted_sum(ag::l2_normalize_rows(t.use(x), 1e-12), 6);
  });

  Tensor mask({1, 7});
  for (int64_t j = 0; j < 7; ++j) {
    mask(0, j) = j >= 5 ? -std::numeric_limits<double>::infinity() : 0.0;
  }
  check_op("softmax_rows masked", {&x}, [&](ag::Tape& t) {
    return weighted_sum(ag::softmax_rows(t.use(x), &mask), 7);
  });
}

TEST_CASE("autograd: structural ops match finite differences") {
  Rng rng(33);
  Parameter x = make_param("x", random_tensor({5, 5}, rng));
  Parameter y = make_param("y", random_tensor({3, 5}, rng));
  Parameter z = make_param("z", random_tensor({5, 2}, rng));

  check_op("diag_part", {&x}, [&](ag::Tape& t) {
    return weighted_sum(ag::diag_part(t.use(x)), 1);
  });
  check_op("pick_per_row", {&x}, [&](ag::Tape& t) {
    return weighted_sum(ag::pick_per_row(t.use(x), {4, 0, 2, 2, 1}), 2);
  });
  // Repeated gather indices exercise the scatter-add in backward.
  check_op("gather_rows", {&x}, [&](ag::Tape& t) {
    return weighted_sum(ag::gather_rows(t.use(x), {0, 3, 3, 1, 0, 4}), 3);
  });
  check_op("slice_cols", {&x}, [&](ag::Tape& t) {
    return weighted_sum(ag::slice_cols(t.use(x), 1, 4), 4);
  });
  check_op("concat_rows", {&x, &y}, [&](ag::Tape& t) {
    return weighted_sum(ag::concat_rows({t.use(x), t.use(y)}), 5);
  });
  check_op("concat_cols", {&x, &z}, [&](ag::Tape& t) {
    return weighted_sum(ag::concat_cols({t.use(x), t.use(z)}), 6);
  });
  check_op("mean_all", {&x}, [&](ag::Tape& t) { return ag::mean_all(t.use(x)); });
  check_op("mean_rows", {&x}, [&](ag::Tape& t) {
    return weighted_sum(ag::mean_rows(t.use(x)), 7);
  });
}

TEST_CASE("autograd: graph reuse accumulates gradients") {
  // f = mean(x + x): df/dx must be 2/n, exercising multi-consumer nodes.
  Rng rng(44);
  Parameter x = make_param("x", random_tensor({2, 3}, rng));
  ag::Tape tape(true);
  Var leaf = tape.use(x);
  Var loss = ag::mean_all(ag::add(leaf, leaf));
  x.zero_grad();
  ag::backward(loss);
  for (int64_t i = 0; i < x.grad.numel(); ++i) {
    CHECK(x.grad[i] == doctest::Approx(2.0 / 6.0).epsilon(1e-12));
  }
}

TEST_CASE("autograd: softmax with -inf mask zeroes masked keys exactly") {
  Tensor x({2, 4});
  Rng rng(55);
  for (int64_t i = 0; i < x.numel(); ++i) x[i] = rng.next_double();
  Tensor mask({1, 4});
  mask(0, 2) = -std::numeric_limits<double>::infinity();
  Var p = ag::softmax_rows(ag::constant(x), &mask);
  for (int64_t i = 0; i < 2; ++i) {
    CHECK(p->value(i, 2) == 0.0);
    double sum = 0.0;
    for (int64_t j = 0; j < 4; ++j) sum += p->value(i, j);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("autograd: degenerate rows are rejected by l2_normalize_rows") {
  Tensor x({2, 3});
  x(0, 0) = 1.0;  // second row stays zero
  CHECK_THROWS_AS(ag::l2_normalize_rows(ag::constant(x), 1e-12), Error);
  try {
    ag::l2_normalize_rows(ag::constant(x), 1e-12);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateEmbedding);
  }
}

TEST_CASE("autograd: no-grad tapes build no graph") {
  Rng rng(66);
  Parameter x = make_param("x", random_tensor({2, 2}, rng));
  ag::Tape tape(false);
  Var out = ag::gelu(tape.use(x));
  CHECK_FALSE(out->requires_grad);
  CHECK(out->inputs.empty());
}
