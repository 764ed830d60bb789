// Copyright 2026 vidlang authors
// Deterministic synthetic corpus: phase-patterned clips with drifting
// geometric signatures, templated two-sentence narrations with seeded
// word-order jitter, and a standard curated manifest with a stratified
// train/val/test split. Exists so pre-training and zero-shot evaluation can
// be exercised end to end without real surgical data.
//
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vidlang/manifest.hpp"
#include "vidlang/tensor.hpp"
#include "vidlang/zeroshot.hpp"

namespace vidlang {

struct SyntheticSpec {
  int64_t num_phases = 4;      // >= 2; defaults cover at most 4
  int64_t clips_per_phase = 100;
  int64_t image_size = 32;
  int64_t frames_per_clip = 45;  // one frame per second of source footage
  double noise_level = 0.02;     // additive Gaussian pixel noise sigma
  uint64_t seed = 7;
  // Per-phase narration templates (two sentences each). Empty selects the
  // built-in surgical templates.
  std::vector<std::vector<std::string>> caption_templates;
};

// Built-in phase names, in order: preparation, dissection, clipping,
// extraction.
const std::vector<std::string>& synth_phase_names();

// Built-in two-sentence narration templates, three per phase. Each template
// passes the default linguistic filter and leans on that phase's signature
// vocabulary only, so captions stay separable across phases.
std::vector<std::vector<std::string>> default_caption_templates(
    int64_t num_phases);

// One classification prompt per phase, phrased like the generated captions.
PromptBank default_synth_prompts(int64_t num_phases);

// Length of a phase pattern's drift cycle: band patterns repeat every 16
// pixels, the blob wraps around the full image.
int64_t synth_cycle(int64_t phase, int64_t image_size);

// Noise-free phase signature at a given drift shift, values in [0, 1],
// shape [image_size, image_size, 3]. Patterns are low-frequency so an
// 8-pixel patch embedding can detect them:
//   phase 0  red horizontal bands      phase 1  green vertical bands
//   phase 2  blue diagonal bands       phase 3  yellow blob on a torus
// Frame f of a clip with drift offset d shows shift (d + f) mod cycle.
Tensor synth_pattern(int64_t phase, int64_t image_size, int64_t shift);

// Generates the corpus under out_dir:
//   frames/<video_id>/fNNNNN.ppm   one source video per clip
//   transcripts/<video_id>.json    single-segment narration
//   sources.jsonl                  pipeline input records
//   manifest.jsonl                 curated manifest, phase_label + split set
//   prompts.tsv                    default_synth_prompts for evaluation
// The manifest is produced by the standard curation pipeline with the stub
// transcription and caption clients; the split is 80/10/10 by clip,
// stratified per phase (counts proportional within one clip). Everything is
// a pure function of the spec: the same spec yields identical bytes.
Manifest build_synthetic_corpus(const SyntheticSpec& spec,
                                const std::string& out_dir);

}  // namespace vidlang
