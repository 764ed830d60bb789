// Copyright 2026 vidlang authors
// Video-language model: a divided space-time attention video encoder, a text
// encoder, and a fusion pass that inserts video-to-text cross-attention into
// the last fusion layers of the text encoder (sharing its weights).
//
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vidlang/autograd.hpp"
#include "vidlang/nn.hpp"
#include "vidlang/tokenizer.hpp"

namespace vidlang {

struct ModelConfig {
  int64_t image_size = 32;        // square frames, pixels
  int64_t patch_size = 8;         // must divide image_size
  int64_t embed_dim = 64;         // must be divisible by num_heads
  int64_t num_heads = 4;
  int64_t num_layers_video = 4;
  int64_t num_layers_text = 4;
  int64_t num_fusion_layers = 3;  // in [1, num_layers_text]
  int64_t vocab_size = 512;       // embedding rows; >= tokenizer vocab size
  int64_t max_frames = 45;        // temporal position table size
  int64_t max_text_len = 32;      // includes [CLS] and [SEP]
  int64_t proj_dim = 128;         // shared contrastive embedding size

  int64_t grid_size() const { return image_size / patch_size; }
  int64_t patches_per_frame() const { return grid_size() * grid_size(); }
  void validate() const;  // throws Error(BadConfig)
};

// One video clip ready for the model: frames are [T, H, W, 3] doubles in
// [0, 1], sampled at a fixed rate from the source segment.
struct VideoClip {
  std::string clip_id;
  std::string source_id;
  std::string phase_label;  // empty when unlabeled
  double start_time = 0.0;
  double end_time = 0.0;
  Tensor frames;

  int64_t num_frames() const { return frames.ndim() == 4 ? frames.dim(0) : 0; }
};

// Graph-mode features (training). The plain-tensor variants below mirror
// them for inference.
struct VideoFeaturesG {
  ag::Var tokens;  // [T*P, D] patch tokens, frame-major
  ag::Var cls;     // [1, D] mean of per-frame [CLS] outputs
  int64_t t = 0;
  int64_t p = 0;
};

struct TextFeaturesG {
  ag::Var hidden;  // [L, D]
  ag::Var cls;     // [1, D] == hidden row 0
};

struct FusedFeaturesG {
  ag::Var text_hidden;   // H^w: [L, D] text stream after cross-attention
  ag::Var video_tokens;  // H^v: video patch tokens, passed through unchanged
  ag::Var global_text;   // h^c: [1, D] fused [CLS] representation
};

struct VideoFeatures {
  Tensor tokens;
  Tensor cls;
  int64_t t = 0;
  int64_t p = 0;
};

struct TextFeatures {
  Tensor hidden;
  Tensor cls;
};

struct FusedFeatures {
  Tensor text_hidden;
  Tensor video_tokens;
  Tensor global_text;
};

// L2-normalized embedding in the shared video-text space.
struct GlobalEmbedding {
  Tensor vec;  // [1, proj_dim], unit norm
};

enum class Modality { kVideo, kText };

// One divided space-time block: pre-norm temporal attention over same-grid
// patches across frames ([CLS] rows skipped), pre-norm spatial attention
// within each frame ([CLS] included), pre-norm MLP; residual after each.
struct DividedBlockParams {
  LayerNormParams ln_time, ln_space, ln_mlp;
  AttentionParams time_attn, space_attn;
  MlpParams mlp;
};

struct TextBlockParams {
  LayerNormParams ln1, ln2;
  AttentionParams self_attn;
  MlpParams mlp;
};

// Cross-attention inserted between self-attention and MLP of one fusion
// layer. Output projections start at zero so an untrained fusion pass
// reproduces the plain text encoder exactly.
struct CrossBlockParams {
  LayerNormParams ln;
  AttentionParams attn;
};

class Model {
 public:
  explicit Model(ModelConfig cfg, uint64_t seed = 0);

  const ModelConfig& config() const { return cfg_; }
  ParamStore& params() { return store_; }
  const ParamStore& params() const { return store_; }

  // --- graph mode (training) ---
  VideoFeaturesG encode_video(ag::Tape& tape, const VideoClip& clip) const;
  TextFeaturesG encode_text(ag::Tape& tape, const TokenSequence& seq) const;
  FusedFeaturesG fuse(ag::Tape& tape, const VideoFeaturesG& video,
                      const TokenSequence& seq) const;
  ag::Var project_global(ag::Tape& tape, const ag::Var& cls, Modality m) const;
  ag::Var vtm_score(ag::Tape& tape, const ag::Var& fused_cls_rows) const;  // [n,1]
  ag::Var mlm_logits(ag::Tape& tape, const ag::Var& features) const;  // [m, vocab]

  // One divided space-time block applied to assembled tokens
  // [T*(P+1), D] (frame-major, [CLS] first in each frame). Exposed for
  // block-level verification.
  ag::Var divided_st_block(ag::Tape& tape, const ag::Var& tokens, int64_t layer,
                           int64_t t) const;

  // --- value mode (inference) ---
  VideoFeatures encode_video(const VideoClip& clip) const;
  TextFeatures encode_text(const TokenSequence& seq) const;
  FusedFeatures fuse(const VideoClip& clip, const TokenSequence& seq) const;
  GlobalEmbedding project_global(const Tensor& cls, Modality m) const;

  // Interpolation matrix [t, max_frames] mapping the temporal position table
  // to t sampled positions: row i targets position (i + 0.5) * max/t - 0.5,
  // matching the midpoint rule used for frame sampling. Identity when
  // t == max_frames.
  static Tensor temporal_interp_matrix(int64_t t, int64_t max_frames);

  // Patch extraction: [T, H, W, 3] -> [T*P, patch*patch*3], frame-major,
  // raster patch order, pixel-major (y, x, channel) within a patch.
  static Tensor extract_patches(const Tensor& frames, int64_t patch_size);

  struct VideoEncoderParams {
    LinearParams patch_embed;
    Parameter* cls_token = nullptr;     // [1, D]
    Parameter* spatial_pos = nullptr;   // [P+1, D], row 0 = [CLS] slot
    Parameter* temporal_pos = nullptr;  // [max_frames, D], zero-init
    std::vector<DividedBlockParams> blocks;
    LayerNormParams ln_final;
  };

  struct TextEncoderParams {
    Parameter* token_embed = nullptr;  // [vocab_size, D]
    Parameter* pos_embed = nullptr;    // [max_text_len, D]
    std::vector<TextBlockParams> blocks;
    LayerNormParams ln_final;
  };

  struct FusionParams {
    std::vector<CrossBlockParams> cross;  // one per fusion layer
    Parameter* spatial_pos = nullptr;     // [P, D] fusion key positions
    Parameter* temporal_pos = nullptr;    // [max_frames, D], zero-init
  };

  struct Heads {
    LinearParams proj_video;  // [D, proj_dim]
    LinearParams proj_text;   // [D, proj_dim]
    LinearParams vtm;         // [D, 1]
    LinearParams mlm;         // [D, vocab_size]
  };

  VideoEncoderParams video;
  TextEncoderParams text;
  FusionParams fusion;
  Heads heads;

 private:
  ag::Var text_forward(ag::Tape& tape, const TokenSequence& seq,
                       const ag::Var* video_kv) const;
  ag::Var fusion_kv(ag::Tape& tape, const VideoFeaturesG& video) const;
  void validate_tokens(const TokenSequence& seq) const;

  ModelConfig cfg_;
  ParamStore store_;
};

}  // namespace vidlang
