// Copyright 2026 vidlang authors
// Zero-shot surgical-phase recognition: embed caption-like class prompts
// with the text encoder, embed clips with the video encoder, classify by
// cosine similarity, and report accuracy, per-class F1, and the confusion
// matrix, plus the frame-count ablation sweep.
//
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vidlang/manifest.hpp"
#include "vidlang/model.hpp"
#include "vidlang/tokenizer.hpp"

namespace vidlang {

struct PhasePrompt {
  std::string label;
  std::string text;
};
using PromptBank = std::vector<PhasePrompt>;

// Reads a tab-separated bank: one "label<TAB>prompt" per line; blank lines
// and lines starting with '#' are skipped. Throws Error(DuplicateLabel) on
// repeated labels and Error(NoData) on an empty bank.
PromptBank load_prompt_bank(const std::string& path);

struct ClassMetrics {
  std::string label;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  int64_t support = 0;
};

struct EvalResult {
  double accuracy = 0.0;
  double macro_f1 = 0.0;  // unweighted mean over classes with support > 0
  std::vector<ClassMetrics> per_class;
  std::vector<std::vector<int64_t>> confusion;  // [true][predicted]
  int64_t k_frames = 0;
  int64_t total = 0;
};

// One unit-norm embedding per bank entry, in bank order.
std::vector<GlobalEmbedding> embed_prompts(const Model& model,
                                           const Vocabulary& vocab,
                                           const PromptBank& bank);

// Midpoint-samples k of the clip's frames, encodes, and projects.
GlobalEmbedding embed_clip(const Model& model, const VideoClip& clip,
                           int64_t k);

// Argmax of dot products (equal to cosine: inputs are unit-norm). Ties go
// to the lowest bank index.
int64_t classify(const GlobalEmbedding& clip_emb,
                 const std::vector<GlobalEmbedding>& class_embs);

// Accuracy, precision/recall/F1 per class, and macro F1 from a confusion
// matrix of [true][predicted] counts. Classes with zero support are
// excluded from the macro mean.
EvalResult metrics_from_confusion(
    const std::vector<std::vector<int64_t>>& confusion,
    const std::vector<std::string>& labels);

// Classifies every kept entry (loading k sampled frames per clip from
// frames_root) against the bank. Throws Error(UnknownLabel) when an entry's
// phase_label is not in the bank and Error(NoData) when clips is empty.
EvalResult evaluate(const Model& model, const Vocabulary& vocab,
                    const std::vector<ManifestEntry>& clips,
                    const std::string& frames_root, const PromptBank& bank,
                    int64_t k);

// One evaluate run per k over the identical clip set.
std::vector<EvalResult> frame_ablation(const Model& model,
                                       const Vocabulary& vocab,
                                       const std::vector<ManifestEntry>& clips,
                                       const std::string& frames_root,
                                       const PromptBank& bank,
                                       const std::vector<int64_t>& k_list);

}  // namespace vidlang
