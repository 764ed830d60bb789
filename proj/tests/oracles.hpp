// Copyright 2026 vidlang authors
// Independent reference implementations used to verify library results.
// Everything here is written with plain loops and directly-transcribed
// formulas, sharing no code with the library under test.
//
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "vidlang/model.hpp"
#include "vidlang/tensor.hpp"

namespace vidlang::testing {

// --- loss oracles -----------------------------------------------------------

// Symmetric InfoNCE by brute-force enumeration: softmax over each row for
// the video-to-text direction, over each column for text-to-video, averaging
// -log p(diagonal) over the batch and the two directions.
inline double oracle_vtc(const Tensor& sims, double tau) {
  const int64_t n = sims.rows();
  double l_v2t = 0.0, l_t2v = 0.0;
  for (int64_t i = 0; i < n; ++i) {
    double denom = 0.0;
    for (int64_t j = 0; j < n; ++j) denom += std::exp(sims(i, j) / tau);
    l_v2t += -std::log(std::exp(sims(i, i) / tau) / denom);
  }
  for (int64_t j = 0; j < n; ++j) {
    double denom = 0.0;
    for (int64_t i = 0; i < n; ++i) denom += std::exp(sims(i, j) / tau);
    l_t2v += -std::log(std::exp(sims(j, j) / tau) / denom);
  }
  return 0.5 * (l_v2t / double(n) + l_t2v / double(n));
}

// Binary matching loss via direct sigmoid probabilities.
inline double oracle_vtm(const std::vector<double>& pos, const std::vector<double>& neg) {
  double loss = 0.0;
  for (size_t i = 0; i < pos.size(); ++i) {
    const double p_pos = 1.0 / (1.0 + std::exp(-pos[i]));
    const double p_neg = 1.0 / (1.0 + std::exp(-neg[i]));
    loss += -std::log(p_pos) - std::log(1.0 - p_neg);
  }
  return loss / double(pos.size());
}

// Masked-token cross-entropy: softmax each row, -log of the target entry.
inline double oracle_mlm(const Tensor& logits, const std::vector<int64_t>& targets) {
  double loss = 0.0;
  for (int64_t i = 0; i < logits.rows(); ++i) {
    double mx = logits(i, 0);
    for (int64_t j = 1; j < logits.cols(); ++j) mx = std::max(mx, logits(i, j));
    double denom = 0.0;
    for (int64_t j = 0; j < logits.cols(); ++j) denom += std::exp(logits(i, j) - mx);
    loss += -std::log(std::exp(logits(i, targets[size_t(i)]) - mx) / denom);
  }
  return loss / double(logits.rows());
}

// --- metric oracles ---------------------------------------------------------

struct OracleMetrics {
  double accuracy = 0.0;
  double macro_f1 = 0.0;
  std::vector<double> f1;  // per class; NaN-free, 0 when degenerate
};

// Accuracy and macro F1 from a confusion matrix with rows = true class,
// columns = predicted class. Classes without true instances are excluded
// from the macro mean.
inline OracleMetrics oracle_metrics(const std::vector<std::vector<int64_t>>& conf) {
  const size_t k = conf.size();
  OracleMetrics m;
  int64_t total = 0, correct = 0;
  for (size_t i = 0; i < k; ++i) {
    for (size_t j = 0; j < k; ++j) total += conf[i][j];
    correct += conf[i][i];
  }
  m.accuracy = total > 0 ? double(correct) / double(total) : 0.0;
  double f1_sum = 0.0;
  int64_t f1_count = 0;
  for (size_t c = 0; c < k; ++c) {
    int64_t tp = conf[c][c], row = 0, col = 0;
    for (size_t j = 0; j < k; ++j) row += conf[c][j];
    for (size_t i = 0; i < k; ++i) col += conf[i][c];
    const double prec = col > 0 ? double(tp) / double(col) : 0.0;
    const double rec = row > 0 ? double(tp) / double(row) : 0.0;
    const double f1 = (prec + rec) > 0.0 ? 2.0 * prec * rec / (prec + rec) : 0.0;
    m.f1.push_back(f1);
    if (row > 0) {  // class has support
      f1_sum += f1;
      ++f1_count;
    }
  }
  m.macro_f1 = f1_count > 0 ? f1_sum / double(f1_count) : 0.0;
  return m;
}

// --- reference spatial-only encoder -----------------------------------------
//
// Re-implements the video encoder with plain loops, processing every frame
// independently and skipping the temporal-attention sublayer entirely. With
// the temporal output projection at zero (its initialization) the full
// encoder must agree with this reference exactly.

namespace ref {

using Mat = std::vector<std::vector<double>>;

inline Mat matmul(const Mat& a, const Mat& b) {
  Mat c(a.size(), std::vector<double>(b[0].size(), 0.0));
  for (size_t i = 0; i < a.size(); ++i) {
    for (size_t p = 0; p < b.size(); ++p) {
      for (size_t j = 0; j < b[0].size(); ++j) c[i][j] += a[i][p] * b[p][j];
    }
  }
  return c;
}

inline Mat from_param(const Tensor& t) {
  Mat m(size_t(t.rows()), std::vector<double>(size_t(t.cols())));
  for (int64_t i = 0; i < t.rows(); ++i) {
    for (int64_t j = 0; j < t.cols(); ++j) m[size_t(i)][size_t(j)] = t(i, j);
  }
  return m;
}

inline void add_bias(Mat& m, const Tensor& bias) {
  for (auto& row : m) {
    for (size_t j = 0; j < row.size(); ++j) row[j] += bias(0, int64_t(j));
  }
}

inline Mat layer_norm(const Mat& x, const Tensor& gamma, const Tensor& beta,
                      double eps = 1e-5) {
  Mat out = x;
  for (auto& row : out) {
    double mu = 0.0;
    for (double v : row) mu += v;
    mu /= double(row.size());
    double var = 0.0;
    for (double v : row) var += (v - mu) * (v - mu);
    var /= double(row.size());
    const double inv = 1.0 / std::sqrt(var + eps);
    for (size_t j = 0; j < row.size(); ++j) {
      row[j] = gamma(0, int64_t(j)) * (row[j] - mu) * inv + beta(0, int64_t(j));
    }
  }
  return out;
}

inline void gelu_inplace(Mat& m) {
  for (auto& row : m) {
    for (double& v : row) v = v * 0.5 * (1.0 + std::erf(v / std::sqrt(2.0)));
  }
}

// Multi-head self-attention over a single sequence.
inline Mat attention(const Mat& x, const LinearParams& wq, const LinearParams& wk,
                     const LinearParams& wv, const LinearParams& wo, int64_t heads) {
  const size_t n = x.size();
  const size_t d = x[0].size();
  const size_t dh = d / size_t(heads);
  Mat q = matmul(x, from_param(wq.weight->value));
  add_bias(q, wq.bias->value);
  Mat k = matmul(x, from_param(wk.weight->value));
  add_bias(k, wk.bias->value);
  Mat v = matmul(x, from_param(wv.weight->value));
  add_bias(v, wv.bias->value);
  Mat ctx(n, std::vector<double>(d, 0.0));
  for (int64_t h = 0; h < heads; ++h) {
    const size_t off = size_t(h) * dh;
    for (size_t i = 0; i < n; ++i) {
      std::vector<double> scores(n, 0.0);
      double mx = -1e300;
      for (size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (size_t c = 0; c < dh; ++c) s += q[i][off + c] * k[j][off + c];
        scores[j] = s / std::sqrt(double(dh));
        mx = std::max(mx, scores[j]);
      }
      double denom = 0.0;
      for (size_t j = 0; j < n; ++j) {
        scores[j] = std::exp(scores[j] - mx);
        denom += scores[j];
      }
      for (size_t j = 0; j < n; ++j) {
        const double p = scores[j] / denom;
        for (size_t c = 0; c < dh; ++c) ctx[i][off + c] += p * v[j][off + c];
      }
    }
  }
  Mat out = matmul(ctx, from_param(wo.weight->value));
  add_bias(out, wo.bias->value);
  return out;
}

}  // namespace ref

struct RefVideoOut {
  std::vector<double> cls;                 // [D] mean of per-frame CLS
  std::vector<std::vector<double>> tokens; // [T*P][D] patch tokens
};

// Spatial-only reference encoding of a clip using the model's own weights.
// Temporal positional embeddings are still added (interpolated with the
// same midpoint rule) so the reference stays valid for any table contents.
inline RefVideoOut reference_spatial_encode(const Model& model, const Tensor& frames) {
  const ModelConfig& cfg = model.config();
  const int64_t t = frames.dim(0);
  const int64_t p = cfg.patches_per_frame();
  const int64_t d = cfg.embed_dim;
  const int64_t ps = cfg.patch_size;
  const int64_t grid = cfg.grid_size();

  // Interpolated temporal position for each frame.
  std::vector<std::vector<double>> tpos(size_t(t), std::vector<double>(size_t(d), 0.0));
  for (int64_t f = 0; f < t; ++f) {
    double pos = (double(f) + 0.5) * double(cfg.max_frames) / double(t) - 0.5;
    pos = std::min(std::max(pos, 0.0), double(cfg.max_frames - 1));
    const int64_t lo = int64_t(std::floor(pos));
    const int64_t hi = std::min(lo + 1, cfg.max_frames - 1);
    const double w = pos - double(lo);
    for (int64_t c = 0; c < d; ++c) {
      tpos[size_t(f)][size_t(c)] = (1.0 - w) * model.video.temporal_pos->value(lo, c) +
                                   w * model.video.temporal_pos->value(hi, c);
    }
  }

  RefVideoOut out;
  out.cls.assign(size_t(d), 0.0);
  out.tokens.assign(size_t(t * p), std::vector<double>(size_t(d), 0.0));

  for (int64_t f = 0; f < t; ++f) {
    // Tokens for one frame: [CLS] + patches, with positions added.
    ref::Mat x(size_t(p + 1), std::vector<double>(size_t(d), 0.0));
    for (int64_t c = 0; c < d; ++c) {
      x[0][size_t(c)] = model.video.cls_token->value(0, c) +
                        model.video.spatial_pos->value(0, c);
    }
    for (int64_t gy = 0; gy < grid; ++gy) {
      for (int64_t gx = 0; gx < grid; ++gx) {
        const int64_t pi = gy * grid + gx;
        std::vector<double> patch(size_t(ps * ps * 3), 0.0);
        size_t w_idx = 0;
        for (int64_t py = 0; py < ps; ++py) {
          for (int64_t px = 0; px < ps; ++px) {
            for (int64_t ch = 0; ch < 3; ++ch) {
              const int64_t y = gy * ps + py, xx = gx * ps + px;
              patch[w_idx++] =
                  frames[((f * cfg.image_size + y) * cfg.image_size + xx) * 3 + ch];
            }
          }
        }
        for (int64_t c = 0; c < d; ++c) {
          double acc = model.video.patch_embed.bias->value(0, c);
          for (size_t k = 0; k < patch.size(); ++k) {
            acc += patch[k] * model.video.patch_embed.weight->value(int64_t(k), c);
          }
          x[size_t(pi + 1)][size_t(c)] = acc +
                                         model.video.spatial_pos->value(pi + 1, c) +
                                         tpos[size_t(f)][size_t(c)];
        }
      }
    }

    // Spatial attention + MLP blocks (no temporal sublayer).
    for (const auto& blk : model.video.blocks) {
      ref::Mat h = ref::layer_norm(x, blk.ln_space.gamma->value, blk.ln_space.beta->value);
      ref::Mat att = ref::attention(h, blk.space_attn.wq, blk.space_attn.wk,
                                    blk.space_attn.wv, blk.space_attn.wo, cfg.num_heads);
      for (size_t i = 0; i < x.size(); ++i) {
        for (size_t j = 0; j < x[0].size(); ++j) x[i][j] += att[i][j];
      }
      h = ref::layer_norm(x, blk.ln_mlp.gamma->value, blk.ln_mlp.beta->value);
      ref::Mat mid = ref::matmul(h, ref::from_param(blk.mlp.fc1.weight->value));
      ref::add_bias(mid, blk.mlp.fc1.bias->value);
      ref::gelu_inplace(mid);
      ref::Mat ff = ref::matmul(mid, ref::from_param(blk.mlp.fc2.weight->value));
      ref::add_bias(ff, blk.mlp.fc2.bias->value);
      for (size_t i = 0; i < x.size(); ++i) {
        for (size_t j = 0; j < x[0].size(); ++j) x[i][j] += ff[i][j];
      }
    }
    x = ref::layer_norm(x, model.video.ln_final.gamma->value,
                        model.video.ln_final.beta->value);

    for (int64_t c = 0; c < d; ++c) out.cls[size_t(c)] += x[0][size_t(c)] / double(t);
    for (int64_t pi = 0; pi < p; ++pi) {
      out.tokens[size_t(f * p + pi)] = x[size_t(pi + 1)];
    }
  }
  return out;
}

}  // namespace vidlang::testing
