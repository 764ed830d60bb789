// Copyright 2026 vidlang authors
// Model implementation.
//
// Licensed under the Apache License, Version 2.0

#include "vidlang/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "vidlang/errors.hpp"

namespace vidlang {

namespace {
// Minimum norm before a global embedding counts as degenerate.
constexpr double kMinEmbeddingNorm = 1e-12;

std::string idx_name(const std::string& prefix, int64_t i, const std::string& suffix) {
  return prefix + std::to_string(i) + suffix;
}
}  // namespace

void ModelConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::BadConfig, msg); };
  if (image_size <= 0 || patch_size <= 0) fail("image_size and patch_size must be positive");
  if (image_size % patch_size != 0) fail("patch_size must divide image_size");
  if (embed_dim <= 0 || num_heads <= 0) fail("embed_dim and num_heads must be positive");
  if (embed_dim % num_heads != 0) fail("num_heads must divide embed_dim");
  if (num_layers_video <= 0 || num_layers_text <= 0) fail("layer counts must be positive");
  if (num_fusion_layers < 1 || num_fusion_layers > num_layers_text) {
    fail("num_fusion_layers must be in [1, num_layers_text]");
  }
  if (vocab_size <= Vocabulary::kNumSpecial) fail("vocab_size too small for special tokens");
  if (max_frames <= 0) fail("max_frames must be positive");
  if (max_text_len < 3) fail("max_text_len must be at least 3");
  if (proj_dim <= 0) fail("proj_dim must be positive");
}

Model::Model(ModelConfig cfg, uint64_t seed) : cfg_(cfg) {
  cfg_.validate();
  Rng rng(stream_seed(seed, 0, RngStream::kInit));
  const int64_t d = cfg_.embed_dim;
  const int64_t p = cfg_.patches_per_frame();

  video.patch_embed.init(store_, "video.patch_embed", cfg_.patch_size * cfg_.patch_size * 3,
                         d, rng);
  video.cls_token = store_.create("video.cls_token", {1, d}, Init::kTruncNormal, true, rng);
  video.spatial_pos =
      store_.create("video.spatial_pos", {p + 1, d}, Init::kTruncNormal, true, rng);
  // Temporal positions start at zero so that at initialization the encoder
  // carries no frame-order signal; combined with the zero temporal output
  // projection this makes the untrained model exactly frame-parallel.
  video.temporal_pos =
      store_.create("video.temporal_pos", {cfg_.max_frames, d}, Init::kZero, true, rng);
  video.blocks.resize(cfg_.num_layers_video);
  for (int64_t i = 0; i < cfg_.num_layers_video; ++i) {
    DividedBlockParams& b = video.blocks[i];
    const std::string base = idx_name("video.block", i, "");
    b.ln_time.init(store_, base + ".ln_time", d, rng);
    b.time_attn.init(store_, base + ".time_attn", d, cfg_.num_heads, rng, Init::kZero);
    b.ln_space.init(store_, base + ".ln_space", d, rng);
    b.space_attn.init(store_, base + ".space_attn", d, cfg_.num_heads, rng);
    b.ln_mlp.init(store_, base + ".ln_mlp", d, rng);
    b.mlp.init(store_, base + ".mlp", d, rng);
  }
  video.ln_final.init(store_, "video.ln_final", d, rng);

  text.token_embed =
      store_.create("text.token_embed", {cfg_.vocab_size, d}, Init::kTruncNormal, true, rng);
  text.pos_embed =
      store_.create("text.pos_embed", {cfg_.max_text_len, d}, Init::kTruncNormal, true, rng);
  text.blocks.resize(cfg_.num_layers_text);
  for (int64_t i = 0; i < cfg_.num_layers_text; ++i) {
    TextBlockParams& b = text.blocks[i];
    const std::string base = idx_name("text.block", i, "");
    b.ln1.init(store_, base + ".ln1", d, rng);
    b.self_attn.init(store_, base + ".self_attn", d, cfg_.num_heads, rng);
    b.ln2.init(store_, base + ".ln2", d, rng);
    b.mlp.init(store_, base + ".mlp", d, rng);
  }
  text.ln_final.init(store_, "text.ln_final", d, rng);

  fusion.cross.resize(cfg_.num_fusion_layers);
  for (int64_t i = 0; i < cfg_.num_fusion_layers; ++i) {
    CrossBlockParams& c = fusion.cross[i];
    const std::string base = idx_name("fusion.layer", i, "");
    c.ln.init(store_, base + ".ln", d, rng);
    // Zero output projection: fusion starts as an exact no-op on the text
    // stream and opens up as training moves the projection off zero.
    c.attn.init(store_, base + ".attn", d, cfg_.num_heads, rng, Init::kZero);
  }
  fusion.spatial_pos = store_.create("fusion.spatial_pos", {p, d}, Init::kTruncNormal, true, rng);
  fusion.temporal_pos =
      store_.create("fusion.temporal_pos", {cfg_.max_frames, d}, Init::kZero, true, rng);

  heads.proj_video.init(store_, "head.proj_video", d, cfg_.proj_dim, rng);
  heads.proj_text.init(store_, "head.proj_text", d, cfg_.proj_dim, rng);
  heads.vtm.init(store_, "head.vtm", d, 1, rng);
  heads.mlm.init(store_, "head.mlm", d, cfg_.vocab_size, rng);
}

Tensor Model::temporal_interp_matrix(int64_t t, int64_t max_frames) {
  Tensor m({t, max_frames});
  for (int64_t i = 0; i < t; ++i) {
    double pos = (static_cast<double>(i) + 0.5) * static_cast<double>(max_frames) /
                     static_cast<double>(t) -
                 0.5;
    pos = std::min(std::max(pos, 0.0), static_cast<double>(max_frames - 1));
    const int64_t lo = static_cast<int64_t>(std::floor(pos));
    const int64_t hi = std::min(lo + 1, max_frames - 1);
    const double w = pos - static_cast<double>(lo);
    m(i, lo) += 1.0 - w;
    m(i, hi) += w;
  }
  return m;
}

Tensor Model::extract_patches(const Tensor& frames, int64_t patch_size) {
  const int64_t t = frames.dim(0), h = frames.dim(1), w = frames.dim(2);
  const int64_t grid_y = h / patch_size, grid_x = w / patch_size;
  const int64_t p = grid_y * grid_x;
  const int64_t patch_len = patch_size * patch_size * 3;
  Tensor out({t * p, patch_len});
  const double* src = frames.data();
  for (int64_t f = 0; f < t; ++f) {
    for (int64_t gy = 0; gy < grid_y; ++gy) {
      for (int64_t gx = 0; gx < grid_x; ++gx) {
        const int64_t row = f * p + gy * grid_x + gx;
        double* dst = out.data() + row * patch_len;
        for (int64_t py = 0; py < patch_size; ++py) {
          for (int64_t px = 0; px < patch_size; ++px) {
            const int64_t y = gy * patch_size + py;
            const int64_t x = gx * patch_size + px;
            const double* pix = src + ((f * h + y) * w + x) * 3;
            *dst++ = pix[0];
            *dst++ = pix[1];
            *dst++ = pix[2];
          }
        }
      }
    }
  }
  return out;
}

ag::Var Model::divided_st_block(ag::Tape& tape, const ag::Var& tokens, int64_t layer,
                                int64_t t) const {
  const DividedBlockParams& b = video.blocks[layer];
  const int64_t p = cfg_.patches_per_frame();
  const int64_t stride = p + 1;

  // Temporal attention: each patch grid position attends across frames.
  // [CLS] rows are skipped; a constant zero row fills their residual slot.
  ag::Var h = b.ln_time.apply(tape, tokens);
  std::vector<ag::Var> time_out;
  time_out.reserve(p + 1);
  time_out.push_back(ag::constant(Tensor({1, cfg_.embed_dim})));
  for (int64_t j = 0; j < p; ++j) {
    std::vector<int64_t> idx(t);
    for (int64_t f = 0; f < t; ++f) idx[f] = f * stride + 1 + j;
    ag::Var seq = ag::gather_rows(h, std::move(idx));
    time_out.push_back(b.time_attn.apply(tape, seq, seq));
  }
  // time_out rows: [zero | patch 0 over t frames | patch 1 ... ], so the
  // token at (frame f, patch j) lives at row 1 + j*t + f.
  std::vector<int64_t> back(t * stride);
  for (int64_t f = 0; f < t; ++f) {
    back[f * stride] = 0;
    for (int64_t j = 0; j < p; ++j) back[f * stride + 1 + j] = 1 + j * t + f;
  }
  ag::Var x = ag::add(tokens, ag::gather_rows(ag::concat_rows(time_out), std::move(back)));

  // Spatial attention within each frame, [CLS] included.
  h = b.ln_space.apply(tape, x);
  std::vector<ag::Var> space_out;
  space_out.reserve(t);
  for (int64_t f = 0; f < t; ++f) {
    std::vector<int64_t> idx(stride);
    for (int64_t j = 0; j < stride; ++j) idx[j] = f * stride + j;
    ag::Var seq = ag::gather_rows(h, std::move(idx));
    space_out.push_back(b.space_attn.apply(tape, seq, seq));
  }
  x = ag::add(x, ag::concat_rows(space_out));

  // Feed-forward.
  return ag::add(x, b.mlp.apply(tape, b.ln_mlp.apply(tape, x)));
}

VideoFeaturesG Model::encode_video(ag::Tape& tape, const VideoClip& clip) const {
  if (clip.frames.ndim() != 4 || clip.frames.dim(3) != 3) {
    throw Error(ErrorCode::InvalidInput, "clip frames must be [T, H, W, 3]");
  }
  const int64_t t = clip.frames.dim(0);
  if (t < 1) throw Error(ErrorCode::InvalidInput, "clip has no frames");
  if (t > cfg_.max_frames) {
    throw Error(ErrorCode::TooManyFrames,
                std::to_string(t) + " frames exceeds max " + std::to_string(cfg_.max_frames));
  }
  if (clip.frames.dim(1) != cfg_.image_size || clip.frames.dim(2) != cfg_.image_size) {
    throw Error(ErrorCode::InvalidInput, "frame size does not match model image_size");
  }
  if (!clip.frames.all_finite()) {
    throw Error(ErrorCode::InvalidInput, "clip contains non-finite pixel values");
  }

  const int64_t p = cfg_.patches_per_frame();
  const int64_t stride = p + 1;

  // Patch embedding plus spatial and (interpolated) temporal positions.
  ag::Var x = video.patch_embed.apply(
      tape, ag::constant(extract_patches(clip.frames, cfg_.patch_size)));
  std::vector<int64_t> spatial_idx(t * p), temporal_idx(t * p);
  for (int64_t f = 0; f < t; ++f) {
    for (int64_t j = 0; j < p; ++j) {
      spatial_idx[f * p + j] = 1 + j;  // row 0 of the table is the [CLS] slot
      temporal_idx[f * p + j] = f;
    }
  }
  ag::Var tpos = ag::matmul(ag::constant(temporal_interp_matrix(t, cfg_.max_frames)),
                            tape.use(*video.temporal_pos));
  x = ag::add(x, ag::gather_rows(tape.use(*video.spatial_pos), std::move(spatial_idx)));
  x = ag::add(x, ag::gather_rows(tpos, std::move(temporal_idx)));

  // Assemble [CLS | patches] per frame; the shared [CLS] token gets the
  // spatial table's row 0 and no temporal position.
  ag::Var cls_row = ag::add(tape.use(*video.cls_token),
                            ag::gather_rows(tape.use(*video.spatial_pos), {0}));
  ag::Var full = ag::concat_rows({cls_row, x});  // row 0 = [CLS], 1 + f*p + j = patch
  std::vector<int64_t> order(t * stride);
  for (int64_t f = 0; f < t; ++f) {
    order[f * stride] = 0;
    for (int64_t j = 0; j < p; ++j) order[f * stride + 1 + j] = 1 + f * p + j;
  }
  ag::Var tokens = ag::gather_rows(full, std::move(order));

  for (int64_t l = 0; l < cfg_.num_layers_video; ++l) {
    tokens = divided_st_block(tape, tokens, l, t);
  }
  tokens = video.ln_final.apply(tape, tokens);

  std::vector<int64_t> cls_idx(t), patch_idx(t * p);
  for (int64_t f = 0; f < t; ++f) {
    cls_idx[f] = f * stride;
    for (int64_t j = 0; j < p; ++j) patch_idx[f * p + j] = f * stride + 1 + j;
  }
  VideoFeaturesG out;
  out.cls = ag::mean_rows(ag::gather_rows(tokens, std::move(cls_idx)));
  out.tokens = ag::gather_rows(tokens, std::move(patch_idx));
  out.t = t;
  out.p = p;
  return out;
}

void Model::validate_tokens(const TokenSequence& seq) const {
  const int64_t len = seq.length();
  if (len < 1 || len > cfg_.max_text_len) {
    throw Error(ErrorCode::InvalidInput, "token sequence length out of range");
  }
  if (seq.attention_mask.size() != seq.ids.size() || seq.special.size() != seq.ids.size()) {
    throw Error(ErrorCode::InvalidInput, "token sequence fields disagree on length");
  }
  for (size_t i = 0; i < seq.ids.size(); ++i) {
    if (seq.ids[i] < 0 || seq.ids[i] >= cfg_.vocab_size) {
      throw Error(ErrorCode::BadToken,
                  "token id " + std::to_string(seq.ids[i]) + " out of range");
    }
    if (seq.attention_mask[i] == 0 && seq.ids[i] != Vocabulary::kPad) {
      throw Error(ErrorCode::BadToken, "masked-out position must carry the pad id");
    }
  }
  if (seq.attention_mask[0] != 1) {
    throw Error(ErrorCode::InvalidInput, "position 0 must be a real [CLS] token");
  }
}

ag::Var Model::fusion_kv(ag::Tape& tape, const VideoFeaturesG& video_feats) const {
  const int64_t t = video_feats.t, p = video_feats.p;
  std::vector<int64_t> spatial_idx(t * p), temporal_idx(t * p);
  for (int64_t f = 0; f < t; ++f) {
    for (int64_t j = 0; j < p; ++j) {
      spatial_idx[f * p + j] = j;
      temporal_idx[f * p + j] = f;
    }
  }
  ag::Var tpos = ag::matmul(ag::constant(temporal_interp_matrix(t, cfg_.max_frames)),
                            tape.use(*fusion.temporal_pos));
  ag::Var kv = ag::add(video_feats.tokens,
                       ag::gather_rows(tape.use(*fusion.spatial_pos), std::move(spatial_idx)));
  return ag::add(kv, ag::gather_rows(tpos, std::move(temporal_idx)));
}

ag::Var Model::text_forward(ag::Tape& tape, const TokenSequence& seq,
                            const ag::Var* video_kv) const {
  validate_tokens(seq);
  const int64_t len = seq.length();

  std::vector<int64_t> pos_idx(len);
  for (int64_t i = 0; i < len; ++i) pos_idx[i] = i;
  ag::Var x = ag::add(ag::gather_rows(tape.use(*text.token_embed), seq.ids),
                      ag::gather_rows(tape.use(*text.pos_embed), std::move(pos_idx)));

  // Additive key mask: padded keys get -inf and receive exactly zero
  // attention, so padding cannot leak into real positions.
  Tensor key_mask({1, len});
  for (int64_t i = 0; i < len; ++i) {
    key_mask(0, i) = seq.attention_mask[i] ? 0.0 : -std::numeric_limits<double>::infinity();
  }

  const int64_t first_fusion = cfg_.num_layers_text - cfg_.num_fusion_layers;
  for (int64_t l = 0; l < cfg_.num_layers_text; ++l) {
    const TextBlockParams& b = text.blocks[l];
    ag::Var h = b.ln1.apply(tape, x);
    x = ag::add(x, b.self_attn.apply(tape, h, h, &key_mask));
    if (video_kv != nullptr && l >= first_fusion) {
      const CrossBlockParams& c = fusion.cross[l - first_fusion];
      h = c.ln.apply(tape, x);
      x = ag::add(x, c.attn.apply(tape, h, *video_kv));
    }
    x = ag::add(x, b.mlp.apply(tape, b.ln2.apply(tape, x)));
  }
  return text.ln_final.apply(tape, x);
}

TextFeaturesG Model::encode_text(ag::Tape& tape, const TokenSequence& seq) const {
  TextFeaturesG out;
  out.hidden = text_forward(tape, seq, nullptr);
  out.cls = ag::gather_rows(out.hidden, {0});
  return out;
}

FusedFeaturesG Model::fuse(ag::Tape& tape, const VideoFeaturesG& video_feats,
                           const TokenSequence& seq) const {
  ag::Var kv = fusion_kv(tape, video_feats);
  FusedFeaturesG out;
  out.text_hidden = text_forward(tape, seq, &kv);
  out.video_tokens = video_feats.tokens;
  out.global_text = ag::gather_rows(out.text_hidden, {0});
  return out;
}

ag::Var Model::project_global(ag::Tape& tape, const ag::Var& cls, Modality m) const {
  const LinearParams& head = m == Modality::kVideo ? heads.proj_video : heads.proj_text;
  return ag::l2_normalize_rows(head.apply(tape, cls), kMinEmbeddingNorm);
}

ag::Var Model::vtm_score(ag::Tape& tape, const ag::Var& fused_cls_rows) const {
  return heads.vtm.apply(tape, fused_cls_rows);
}

ag::Var Model::mlm_logits(ag::Tape& tape, const ag::Var& features) const {
  return heads.mlm.apply(tape, features);
}

VideoFeatures Model::encode_video(const VideoClip& clip) const {
  ag::Tape tape(false);
  VideoFeaturesG g = encode_video(tape, clip);
  return {g.tokens->value, g.cls->value, g.t, g.p};
}

TextFeatures Model::encode_text(const TokenSequence& seq) const {
  ag::Tape tape(false);
  TextFeaturesG g = encode_text(tape, seq);
  return {g.hidden->value, g.cls->value};
}

FusedFeatures Model::fuse(const VideoClip& clip, const TokenSequence& seq) const {
  ag::Tape tape(false);
  VideoFeaturesG v = encode_video(tape, clip);
  FusedFeaturesG g = fuse(tape, v, seq);
  return {g.text_hidden->value, g.video_tokens->value, g.global_text->value};
}

GlobalEmbedding Model::project_global(const Tensor& cls, Modality m) const {
  ag::Tape tape(false);
  ag::Var v = project_global(tape, ag::constant(cls), m);
  return {v->value};
}

}  // namespace vidlang
