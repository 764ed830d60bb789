// Copyright 2026 vidlang authors
// Reverse-mode autodiff implementation.
//
// Licensed under the Apache License, Version 2.0

#include "vidlang/autograd.hpp"

#include <cmath>
#include <limits>
#include <unordered_set>
#include <utility>

#include "vidlang/errors.hpp"

namespace vidlang {
namespace ag {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw Error(ErrorCode::InvalidInput, msg);
}

// C = A[m,k] * B[k,n]
Tensor mm(const Tensor& a, const Tensor& b) {
  const int64_t m = a.rows(), k = a.cols(), n = b.cols();
  Tensor c({m, n});
  const double* pa = a.data();
  const double* pb = b.data();
  double* pc = c.data();
  for (int64_t i = 0; i < m; ++i) {
    for (int64_t p = 0; p < k; ++p) {
      const double aip = pa[i * k + p];
      if (aip == 0.0) continue;
      const double* brow = pb + p * n;
      double* crow = pc + i * n;
      for (int64_t j = 0; j < n; ++j) crow[j] += aip * brow[j];
    }
  }
  return c;
}

// C = A[m,k] * B[n,k]^T
Tensor mm_nt(const Tensor& a, const Tensor& b) {
  const int64_t m = a.rows(), k = a.cols(), n = b.rows();
  Tensor c({m, n});
  for (int64_t i = 0; i < m; ++i) {
    const double* arow = a.data() + i * k;
    for (int64_t j = 0; j < n; ++j) {
      const double* brow = b.data() + j * k;
      double acc = 0.0;
      for (int64_t p = 0; p < k; ++p) acc += arow[p] * brow[p];
      c(i, j) = acc;
    }
  }
  return c;
}

// C = A[k,m]^T * B[k,n]
Tensor mm_tn(const Tensor& a, const Tensor& b) {
  const int64_t k = a.rows(), m = a.cols(), n = b.cols();
  Tensor c({m, n});
  double* pc = c.data();
  for (int64_t p = 0; p < k; ++p) {
    const double* arow = a.data() + p * m;
    const double* brow = b.data() + p * n;
    for (int64_t i = 0; i < m; ++i) {
      const double aip = arow[i];
      if (aip == 0.0) continue;
      double* crow = pc + i * n;
      for (int64_t j = 0; j < n; ++j) crow[j] += aip * brow[j];
    }
  }
  return c;
}

void axpy(Tensor& dst, const Tensor& src, double c = 1.0) {
  double* d = dst.data();
  const double* s = src.data();
  const int64_t n = dst.numel();
  for (int64_t i = 0; i < n; ++i) d[i] += c * s[i];
}

Var make(Tensor value, std::vector<Var> inputs, std::function<void(Node&)> bp) {
  auto n = std::make_shared<Node>();
  n->value = std::move(value);
  bool rg = false;
  for (const auto& in : inputs) rg = rg || in->requires_grad;
  if (rg) {
    n->inputs = std::move(inputs);
    n->backprop = std::move(bp);
    n->requires_grad = true;
  }
  return n;
}

// Gaussian CDF and PDF for exact GELU.
double phi_cdf(double x) { return 0.5 * (1.0 + std::erf(x * M_SQRT1_2)); }
double phi_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); }

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

Tensor& Node::ensure_grad() {
  if (grad.numel() != value.numel()) grad = Tensor(value.shape());
  return grad;
}

Var Tape::use(Parameter& p) {
  auto it = leaves_.find(&p);
  if (it != leaves_.end()) return it->second;
  auto n = std::make_shared<Node>();
  n->value = p.value;
  if (grad_) {
    n->requires_grad = true;
    n->param = &p;
    n->backprop = [](Node& self) { axpy(self.param->grad, self.grad); };
  }
  leaves_.emplace(&p, n);
  return n;
}

Var constant(Tensor value) {
  auto n = std::make_shared<Node>();
  n->value = std::move(value);
  return n;
}

void backward(const Var& root) {
  require(root->value.numel() == 1, "backward root must be scalar");
  if (!root->requires_grad) return;

  std::vector<Node*> order;
  std::unordered_set<Node*> seen;
  std::vector<std::pair<Node*, size_t>> stack;
  stack.emplace_back(root.get(), 0);
  seen.insert(root.get());
  while (!stack.empty()) {
    auto& top = stack.back();
    if (top.second < top.first->inputs.size()) {
      Node* child = top.first->inputs[top.second++].get();
      if (child->requires_grad && seen.insert(child).second) {
        stack.emplace_back(child, 0);
      }
    } else {
      order.push_back(top.first);
      stack.pop_back();
    }
  }

  root->ensure_grad().fill(1.0);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Node* n = *it;
    if (n->backprop) {
      n->ensure_grad();
      n->backprop(*n);
    }
  }
}

// ---------------------------------------------------------------------------
// Ops
// ---------------------------------------------------------------------------

Var add(const Var& a, const Var& b) {
  require(a->value.same_shape(b->value), "add: shape mismatch");
  Tensor out = a->value;
  axpy(out, b->value);
  return make(std::move(out), {a, b}, [](Node& n) {
    if (n.inputs[0]->requires_grad) axpy(n.inputs[0]->ensure_grad(), n.grad);
    if (n.inputs[1]->requires_grad) axpy(n.inputs[1]->ensure_grad(), n.grad);
  });
}

Var sub(const Var& a, const Var& b) {
  require(a->value.same_shape(b->value), "sub: shape mismatch");
  Tensor out = a->value;
  axpy(out, b->value, -1.0);
  return make(std::move(out), {a, b}, [](Node& n) {
    if (n.inputs[0]->requires_grad) axpy(n.inputs[0]->ensure_grad(), n.grad);
    if (n.inputs[1]->requires_grad) axpy(n.inputs[1]->ensure_grad(), n.grad, -1.0);
  });
}

Var scale(const Var& a, double c) {
  Tensor out = a->value;
  for (int64_t i = 0; i < out.numel(); ++i) out[i] *= c;
  return make(std::move(out), {a}, [c](Node& n) {
    if (n.inputs[0]->requires_grad) axpy(n.inputs[0]->ensure_grad(), n.grad, c);
  });
}

Var add_rowwise(const Var& m, const Var& row) {
  require(m->value.ndim() == 2 && row->value.ndim() == 2, "add_rowwise: need matrices");
  require(row->value.rows() == 1 && row->value.cols() == m->value.cols(),
          "add_rowwise: row shape mismatch");
  Tensor out = m->value;
  const int64_t r = out.rows(), c = out.cols();
  for (int64_t i = 0; i < r; ++i) {
    for (int64_t j = 0; j < c; ++j) out(i, j) += row->value(0, j);
  }
  return make(std::move(out), {m, row}, [](Node& n) {
    if (n.inputs[0]->requires_grad) axpy(n.inputs[0]->ensure_grad(), n.grad);
    if (n.inputs[1]->requires_grad) {
      Tensor& g = n.inputs[1]->ensure_grad();
      const int64_t r = n.grad.rows(), c = n.grad.cols();
      for (int64_t i = 0; i < r; ++i) {
        for (int64_t j = 0; j < c; ++j) g(0, j) += n.grad(i, j);
      }
    }
  });
}

Var matmul(const Var& a, const Var& b) {
  require(a->value.ndim() == 2 && b->value.ndim() == 2, "matmul: need matrices");
  require(a->value.cols() == b->value.rows(), "matmul: inner dim mismatch");
  return make(mm(a->value, b->value), {a, b}, [](Node& n) {
    if (n.inputs[0]->requires_grad)
      axpy(n.inputs[0]->ensure_grad(), mm_nt(n.grad, n.inputs[1]->value));
    if (n.inputs[1]->requires_grad)
      axpy(n.inputs[1]->ensure_grad(), mm_tn(n.inputs[0]->value, n.grad));
  });
}

Var matmul_nt(const Var& a, const Var& b) {
  require(a->value.ndim() == 2 && b->value.ndim() == 2, "matmul_nt: need matrices");
  require(a->value.cols() == b->value.cols(), "matmul_nt: inner dim mismatch");
  return make(mm_nt(a->value, b->value), {a, b}, [](Node& n) {
    if (n.inputs[0]->requires_grad)
      axpy(n.inputs[0]->ensure_grad(), mm(n.grad, n.inputs[1]->value));
    if (n.inputs[1]->requires_grad)
      axpy(n.inputs[1]->ensure_grad(), mm_tn(n.grad, n.inputs[0]->value));
  });
}

Var transpose(const Var& a) {
  require(a->value.ndim() == 2, "transpose: need matrix");
  const int64_t r = a->value.rows(), c = a->value.cols();
  Tensor out({c, r});
  for (int64_t i = 0; i < r; ++i) {
    for (int64_t j = 0; j < c; ++j) out(j, i) = a->value(i, j);
  }
  return make(std::move(out), {a}, [](Node& n) {
    if (!n.inputs[0]->requires_grad) return;
    Tensor& g = n.inputs[0]->ensure_grad();
    const int64_t r = g.rows(), c = g.cols();
    for (int64_t i = 0; i < r; ++i) {
      for (int64_t j = 0; j < c; ++j) g(i, j) += n.grad(j, i);
    }
  });
}

Var layer_norm(const Var& x, const Var& gamma, const Var& beta, double eps) {
  const int64_t r = x->value.rows(), c = x->value.cols();
  require(x->value.ndim() == 2, "layer_norm: need matrix");
  require(gamma->value.rows() == 1 && gamma->value.cols() == c, "layer_norm: gamma shape");
  require(beta->value.rows() == 1 && beta->value.cols() == c, "layer_norm: beta shape");

  Tensor out({r, c});
  Tensor xhat({r, c});
  Tensor inv_sigma({r, 1});
  for (int64_t i = 0; i < r; ++i) {
    double mu = 0.0;
    for (int64_t j = 0; j < c; ++j) mu += x->value(i, j);
    mu /= static_cast<double>(c);
    double var = 0.0;
    for (int64_t j = 0; j < c; ++j) {
      const double d = x->value(i, j) - mu;
      var += d * d;
    }
    var /= static_cast<double>(c);
    const double inv = 1.0 / std::sqrt(var + eps);
    inv_sigma(i, 0) = inv;
    for (int64_t j = 0; j < c; ++j) {
      const double xh = (x->value(i, j) - mu) * inv;
      xhat(i, j) = xh;
      out(i, j) = gamma->value(0, j) * xh + beta->value(0, j);
    }
  }
  return make(std::move(out), {x, gamma, beta},
              [xhat = std::move(xhat), inv_sigma = std::move(inv_sigma)](Node& n) {
    const int64_t r = n.grad.rows(), c = n.grad.cols();
    const Tensor& gamma = n.inputs[1]->value;
    if (n.inputs[1]->requires_grad || n.inputs[2]->requires_grad) {
      Tensor& gg = n.inputs[1]->ensure_grad();
      Tensor& gb = n.inputs[2]->ensure_grad();
      for (int64_t i = 0; i < r; ++i) {
        for (int64_t j = 0; j < c; ++j) {
          gg(0, j) += n.grad(i, j) * xhat(i, j);
          gb(0, j) += n.grad(i, j);
        }
      }
    }
    if (n.inputs[0]->requires_grad) {
      Tensor& gx = n.inputs[0]->ensure_grad();
      for (int64_t i = 0; i < r; ++i) {
        double mean_g = 0.0, mean_gx = 0.0;
        for (int64_t j = 0; j < c; ++j) {
          const double g = gamma(0, j) * n.grad(i, j);
          mean_g += g;
          mean_gx += g * xhat(i, j);
        }
        mean_g /= static_cast<double>(c);
        mean_gx /= static_cast<double>(c);
        for (int64_t j = 0; j < c; ++j) {
          const double g = gamma(0, j) * n.grad(i, j);
          gx(i, j) += inv_sigma(i, 0) * (g - mean_g - xhat(i, j) * mean_gx);
        }
      }
    }
  });
}

Var gelu(const Var& x) {
  Tensor out = x->value;
  for (int64_t i = 0; i < out.numel(); ++i) out[i] = out[i] * phi_cdf(out[i]);
  return make(std::move(out), {x}, [](Node& n) {
    if (!n.inputs[0]->requires_grad) return;
    Tensor& g = n.inputs[0]->ensure_grad();
    const Tensor& x = n.inputs[0]->value;
    for (int64_t i = 0; i < g.numel(); ++i) {
      g[i] += n.grad[i] * (phi_cdf(x[i]) + x[i] * phi_pdf(x[i]));
    }
  });
}

Var softmax_rows(const Var& x, const Tensor* add_mask) {
  const int64_t r = x->value.rows(), c = x->value.cols();
  require(x->value.ndim() == 2, "softmax_rows: need matrix");
  if (add_mask != nullptr) {
    require(add_mask->rows() == 1 && add_mask->cols() == c, "softmax_rows: mask shape");
  }
  Tensor probs({r, c});
  for (int64_t i = 0; i < r; ++i) {
    double mx = -std::numeric_limits<double>::infinity();
    for (int64_t j = 0; j < c; ++j) {
      double v = x->value(i, j) + (add_mask ? (*add_mask)(0, j) : 0.0);
      probs(i, j) = v;
      if (v > mx) mx = v;
    }
    require(std::isfinite(mx), "softmax_rows: fully masked row");
    double sum = 0.0;
    for (int64_t j = 0; j < c; ++j) {
      const double e = std::exp(probs(i, j) - mx);  // exp(-inf) == 0 exactly
      probs(i, j) = e;
      sum += e;
    }
    for (int64_t j = 0; j < c; ++j) probs(i, j) /= sum;
  }
  Tensor out = probs;
  return make(std::move(out), {x}, [probs = std::move(probs)](Node& n) {
    if (!n.inputs[0]->requires_grad) return;
    Tensor& g = n.inputs[0]->ensure_grad();
    const int64_t r = n.grad.rows(), c = n.grad.cols();
    for (int64_t i = 0; i < r; ++i) {
      double dot = 0.0;
      for (int64_t j = 0; j < c; ++j) dot += n.grad(i, j) * probs(i, j);
      for (int64_t j = 0; j < c; ++j) g(i, j) += probs(i, j) * (n.grad(i, j) - dot);
    }
  });
}

Var logsumexp_rows(const Var& x) {
  const int64_t r = x->value.rows(), c = x->value.cols();
  require(x->value.ndim() == 2 && c > 0, "logsumexp_rows: need non-empty matrix");
  Tensor out({r, 1});
  Tensor probs({r, c});
  for (int64_t i = 0; i < r; ++i) {
    double mx = x->value(i, 0);
    for (int64_t j = 1; j < c; ++j) mx = std::max(mx, x->value(i, j));
    double sum = 0.0;
    for (int64_t j = 0; j < c; ++j) {
      const double e = std::exp(x->value(i, j) - mx);
      probs(i, j) = e;
      sum += e;
    }
    out(i, 0) = mx + std::log(sum);
    for (int64_t j = 0; j < c; ++j) probs(i, j) /= sum;
  }
  return make(std::move(out), {x}, [probs = std::move(probs)](Node& n) {
    if (!n.inputs[0]->requires_grad) return;
    Tensor& g = n.inputs[0]->ensure_grad();
    const int64_t r = probs.rows(), c = probs.cols();
    for (int64_t i = 0; i < r; ++i) {
      for (int64_t j = 0; j < c; ++j) g(i, j) += n.grad(i, 0) * probs(i, j);
    }
  });
}

Var diag_part(const Var& x) {
  const int64_t nn = x->value.rows();
  require(x->value.ndim() == 2 && x->value.cols() == nn, "diag_part: need square matrix");
  Tensor out({nn, 1});
  for (int64_t i = 0; i < nn; ++i) out(i, 0) = x->value(i, i);
  return make(std::move(out), {x}, [](Node& n) {
    if (!n.inputs[0]->requires_grad) return;
    Tensor& g = n.inputs[0]->ensure_grad();
    for (int64_t i = 0; i < n.grad.rows(); ++i) g(i, i) += n.grad(i, 0);
  });
}

Var pick_per_row(const Var& x, const std::vector<int64_t>& cols) {
  const int64_t r = x->value.rows(), c = x->value.cols();
  require(static_cast<int64_t>(cols.size()) == r, "pick_per_row: index count mismatch");
  Tensor out({r, 1});
  for (int64_t i = 0; i < r; ++i) {
    require(cols[i] >= 0 && cols[i] < c, "pick_per_row: index out of range");
    out(i, 0) = x->value(i, cols[i]);
  }
  return make(std::move(out), {x}, [cols](Node& n) {
    if (!n.inputs[0]->requires_grad) return;
    Tensor& g = n.inputs[0]->ensure_grad();
    for (int64_t i = 0; i < n.grad.rows(); ++i) g(i, cols[i]) += n.grad(i, 0);
  });
}

Var gather_rows(const Var& x, std::vector<int64_t> idx) {
  const int64_t r = x->value.rows(), c = x->value.cols();
  Tensor out({static_cast<int64_t>(idx.size()), c});
  for (size_t i = 0; i < idx.size(); ++i) {
    require(idx[i] >= 0 && idx[i] < r, "gather_rows: index out of range");
    for (int64_t j = 0; j < c; ++j) out(static_cast<int64_t>(i), j) = x->value(idx[i], j);
  }
  return make(std::move(out), {x}, [idx = std::move(idx)](Node& n) {
    if (!n.inputs[0]->requires_grad) return;
    Tensor& g = n.inputs[0]->ensure_grad();
    const int64_t c = n.grad.cols();
    for (size_t i = 0; i < idx.size(); ++i) {
      for (int64_t j = 0; j < c; ++j) g(idx[i], j) += n.grad(static_cast<int64_t>(i), j);
    }
  });
}

Var slice_cols(const Var& x, int64_t c0, int64_t c1) {
  const int64_t r = x->value.rows(), c = x->value.cols();
  require(0 <= c0 && c0 < c1 && c1 <= c, "slice_cols: bad range");
  Tensor out({r, c1 - c0});
  for (int64_t i = 0; i < r; ++i) {
    for (int64_t j = c0; j < c1; ++j) out(i, j - c0) = x->value(i, j);
  }
  return make(std::move(out), {x}, [c0](Node& n) {
    if (!n.inputs[0]->requires_grad) return;
    Tensor& g = n.inputs[0]->ensure_grad();
    const int64_t r = n.grad.rows(), w = n.grad.cols();
    for (int64_t i = 0; i < r; ++i) {
      for (int64_t j = 0; j < w; ++j) g(i, c0 + j) += n.grad(i, j);
    }
  });
}

Var concat_rows(const std::vector<Var>& parts) {
  require(!parts.empty(), "concat_rows: empty input");
  const int64_t c = parts[0]->value.cols();
  int64_t rows = 0;
  for (const auto& p : parts) {
    require(p->value.ndim() == 2 && p->value.cols() == c, "concat_rows: column mismatch");
    rows += p->value.rows();
  }
  Tensor out({rows, c});
  int64_t off = 0;
  for (const auto& p : parts) {
    for (int64_t i = 0; i < p->value.rows(); ++i) {
      for (int64_t j = 0; j < c; ++j) out(off + i, j) = p->value(i, j);
    }
    off += p->value.rows();
  }
  return make(std::move(out), parts, [](Node& n) {
    int64_t off = 0;
    const int64_t c = n.grad.cols();
    for (auto& in : n.inputs) {
      const int64_t r = in->value.rows();
      if (in->requires_grad) {
        Tensor& g = in->ensure_grad();
        for (int64_t i = 0; i < r; ++i) {
          for (int64_t j = 0; j < c; ++j) g(i, j) += n.grad(off + i, j);
        }
      }
      off += r;
    }
  });
}

Var concat_cols(const std::vector<Var>& parts) {
  require(!parts.empty(), "concat_cols: empty input");
  const int64_t r = parts[0]->value.rows();
  int64_t cols = 0;
  for (const auto& p : parts) {
    require(p->value.ndim() == 2 && p->value.rows() == r, "concat_cols: row mismatch");
    cols += p->value.cols();
  }
  Tensor out({r, cols});
  int64_t off = 0;
  for (const auto& p : parts) {
    for (int64_t i = 0; i < r; ++i) {
      for (int64_t j = 0; j < p->value.cols(); ++j) out(i, off + j) = p->value(i, j);
    }
    off += p->value.cols();
  }
  return make(std::move(out), parts, [](Node& n) {
    int64_t off = 0;
    const int64_t r = n.grad.rows();
    for (auto& in : n.inputs) {
      const int64_t c = in->value.cols();
      if (in->requires_grad) {
        Tensor& g = in->ensure_grad();
        for (int64_t i = 0; i < r; ++i) {
          for (int64_t j = 0; j < c; ++j) g(i, j) += n.grad(i, off + j);
        }
      }
      off += c;
    }
  });
}

Var mean_all(const Var& x) {
  const int64_t n_el = x->value.numel();
  require(n_el > 0, "mean_all: empty tensor");
  double sum = 0.0;
  for (int64_t i = 0; i < n_el; ++i) sum += x->value[i];
  Tensor out({1, 1});
  out(0, 0) = sum / static_cast<double>(n_el);
  return make(std::move(out), {x}, [n_el](Node& n) {
    if (!n.inputs[0]->requires_grad) return;
    Tensor& g = n.inputs[0]->ensure_grad();
    const double s = n.grad(0, 0) / static_cast<double>(n_el);
    for (int64_t i = 0; i < g.numel(); ++i) g[i] += s;
  });
}

Var mean_rows(const Var& x) {
  const int64_t r = x->value.rows(), c = x->value.cols();
  require(x->value.ndim() == 2 && r > 0, "mean_rows: need non-empty matrix");
  Tensor out({1, c});
  for (int64_t i = 0; i < r; ++i) {
    for (int64_t j = 0; j < c; ++j) out(0, j) += x->value(i, j);
  }
  for (int64_t j = 0; j < c; ++j) out(0, j) /= static_cast<double>(r);
  return make(std::move(out), {x}, [](Node& n) {
    if (!n.inputs[0]->requires_grad) return;
    Tensor& g = n.inputs[0]->ensure_grad();
    const int64_t r = g.rows(), c = g.cols();
    for (int64_t i = 0; i < r; ++i) {
      for (int64_t j = 0; j < c; ++j) g(i, j) += n.grad(0, j) / static_cast<double>(r);
    }
  });
}

Var softplus(const Var& x) {
  Tensor out = x->value;
  for (int64_t i = 0; i < out.numel(); ++i) {
    const double v = out[i];
    out[i] = v > 0.0 ? v + std::log1p(std::exp(-v)) : std::log1p(std::exp(v));
  }
  return make(std::move(out), {x}, [](Node& n) {
    if (!n.inputs[0]->requires_grad) return;
    Tensor& g = n.inputs[0]->ensure_grad();
    const Tensor& x = n.inputs[0]->value;
    for (int64_t i = 0; i < g.numel(); ++i) g[i] += n.grad[i] * sigmoid(x[i]);
  });
}

Var l2_normalize_rows(const Var& x, double min_norm) {
  const int64_t r = x->value.rows(), c = x->value.cols();
  require(x->value.ndim() == 2, "l2_normalize_rows: need matrix");
  Tensor out({r, c});
  Tensor norms({r, 1});
  for (int64_t i = 0; i < r; ++i) {
    double sq = 0.0;
    for (int64_t j = 0; j < c; ++j) sq += x->value(i, j) * x->value(i, j);
    const double norm = std::sqrt(sq);
    if (!(norm >= min_norm) || !std::isfinite(norm)) {
      throw Error(ErrorCode::DegenerateEmbedding,
                  "row norm " + std::to_string(norm) + " below " + std::to_string(min_norm));
    }
    norms(i, 0) = norm;
    for (int64_t j = 0; j < c; ++j) out(i, j) = x->value(i, j) / norm;
  }
  Tensor unit = out;
  return make(std::move(out), {x}, [unit = std::move(unit), norms = std::move(norms)](Node& n) {
    if (!n.inputs[0]->requires_grad) return;
    Tensor& g = n.inputs[0]->ensure_grad();
    const int64_t r = n.grad.rows(), c = n.grad.cols();
    for (int64_t i = 0; i < r; ++i) {
      double dot = 0.0;
      for (int64_t j = 0; j < c; ++j) dot += n.grad(i, j) * unit(i, j);
      for (int64_t j = 0; j < c; ++j) {
        g(i, j) += (n.grad(i, j) - unit(i, j) * dot) / norms(i, 0);
      }
    }
  });
}

}  // namespace ag
}  // namespace vidlang
