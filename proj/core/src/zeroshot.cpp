// Copyright 2026 vidlang authors
// Zero-shot phase recognition over prompt banks.
//
// Licensed under the Apache License, Version 2.0

#include "vidlang/zeroshot.hpp"

#include <fstream>
#include <set>
#include <unordered_map>

#include "vidlang/errors.hpp"
#include "vidlang/frames.hpp"

namespace vidlang {

PromptBank load_prompt_bank(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);

  PromptBank bank;
  std::set<std::string> seen;
  std::string line;
  int64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 >= line.size()) {
      throw Error(ErrorCode::InvalidInput,
                  path + ":" + std::to_string(lineno) +
                      ": expected label<TAB>prompt");
    }
    PhasePrompt p{line.substr(0, tab), line.substr(tab + 1)};
    if (!seen.insert(p.label).second) {
      throw Error(ErrorCode::DuplicateLabel, "duplicate label " + p.label);
    }
    bank.push_back(std::move(p));
  }
  if (bank.empty()) throw Error(ErrorCode::NoData, path + " has no prompts");
  return bank;
}

std::vector<GlobalEmbedding> embed_prompts(const Model& model,
                                           const Vocabulary& vocab,
                                           const PromptBank& bank) {
  if (bank.empty()) throw Error(ErrorCode::NoData, "empty prompt bank");
  std::set<std::string> seen;
  for (const auto& p : bank) {
    if (!seen.insert(p.label).second) {
      throw Error(ErrorCode::DuplicateLabel, "duplicate label " + p.label);
    }
  }

  std::vector<GlobalEmbedding> out;
  out.reserve(bank.size());
  for (const auto& p : bank) {
    const TokenSequence seq =
        tokenize(p.text, vocab, model.config().max_text_len);
    const TextFeatures feats = model.encode_text(seq);
    out.push_back(model.project_global(feats.cls, Modality::kText));
  }
  return out;
}

GlobalEmbedding embed_clip(const Model& model, const VideoClip& clip,
                           int64_t k) {
  const int64_t total = clip.num_frames();
  const std::vector<int64_t> idx = sample_frames(total, k);

  const int64_t h = clip.frames.dim(1), w = clip.frames.dim(2);
  const int64_t stride = h * w * 3;
  VideoClip sampled = clip;
  sampled.frames = Tensor({k, h, w, 3});
  for (int64_t i = 0; i < k; ++i) {
    for (int64_t j = 0; j < stride; ++j) {
      sampled.frames[i * stride + j] = clip.frames[idx[size_t(i)] * stride + j];
    }
  }

  const VideoFeatures feats = model.encode_video(sampled);
  return model.project_global(feats.cls, Modality::kVideo);
}

int64_t classify(const GlobalEmbedding& clip_emb,
                 const std::vector<GlobalEmbedding>& class_embs) {
  if (class_embs.empty()) throw Error(ErrorCode::NoData, "no class embeddings");
  int64_t best = 0;
  double best_sim = 0.0;
  for (size_t c = 0; c < class_embs.size(); ++c) {
    double sim = 0.0;
    for (int64_t j = 0; j < clip_emb.vec.cols(); ++j) {
      sim += clip_emb.vec(0, j) * class_embs[c].vec(0, j);
    }
    if (c == 0 || sim > best_sim) {  // strict: ties keep the lowest index
      best_sim = sim;
      best = static_cast<int64_t>(c);
    }
  }
  return best;
}

EvalResult metrics_from_confusion(
    const std::vector<std::vector<int64_t>>& confusion,
    const std::vector<std::string>& labels) {
  const size_t k = labels.size();
  if (confusion.size() != k) {
    throw Error(ErrorCode::InvalidInput, "confusion size != label count");
  }

  EvalResult r;
  r.confusion = confusion;
  int64_t total = 0, correct = 0;
  for (size_t i = 0; i < k; ++i) {
    if (confusion[i].size() != k) {
      throw Error(ErrorCode::InvalidInput, "confusion matrix is not square");
    }
    for (size_t j = 0; j < k; ++j) total += confusion[i][j];
    correct += confusion[i][i];
  }
  if (total == 0) throw Error(ErrorCode::NoData, "empty confusion matrix");
  r.total = total;
  r.accuracy = static_cast<double>(correct) / static_cast<double>(total);

  double f1_sum = 0.0;
  int64_t f1_classes = 0;
  for (size_t c = 0; c < k; ++c) {
    int64_t support = 0, predicted = 0;
    for (size_t j = 0; j < k; ++j) {
      support += confusion[c][j];    // row: true class c
      predicted += confusion[j][c];  // column: predicted class c
    }
    ClassMetrics cm;
    cm.label = labels[c];
    cm.support = support;
    const double tp = static_cast<double>(confusion[c][c]);
    cm.precision = predicted > 0 ? tp / static_cast<double>(predicted) : 0.0;
    cm.recall = support > 0 ? tp / static_cast<double>(support) : 0.0;
    cm.f1 = (cm.precision + cm.recall) > 0.0
                ? 2.0 * cm.precision * cm.recall / (cm.precision + cm.recall)
                : 0.0;
    if (support > 0) {
      f1_sum += cm.f1;
      ++f1_classes;
    }
    r.per_class.push_back(std::move(cm));
  }
  r.macro_f1 = f1_classes > 0 ? f1_sum / static_cast<double>(f1_classes) : 0.0;
  return r;
}

EvalResult evaluate(const Model& model, const Vocabulary& vocab,
                    const std::vector<ManifestEntry>& clips,
                    const std::string& frames_root, const PromptBank& bank,
                    int64_t k) {
  if (clips.empty()) throw Error(ErrorCode::NoData, "no clips to evaluate");

  std::unordered_map<std::string, size_t> label_index;
  std::vector<std::string> labels;
  for (size_t c = 0; c < bank.size(); ++c) {
    label_index[bank[c].label] = c;
    labels.push_back(bank[c].label);
  }
  const std::vector<GlobalEmbedding> class_embs =
      embed_prompts(model, vocab, bank);

  std::vector<std::vector<int64_t>> confusion(
      bank.size(), std::vector<int64_t>(bank.size(), 0));
  for (const auto& e : clips) {
    const auto it = label_index.find(e.phase_label);
    if (it == label_index.end()) {
      throw Error(ErrorCode::UnknownLabel,
                  "clip " + e.clip_id + " has label '" + e.phase_label +
                      "' outside the prompt bank");
    }
    VideoClip clip;
    clip.clip_id = e.clip_id;
    clip.source_id = e.source_id;
    clip.phase_label = e.phase_label;
    clip.start_time = e.start;
    clip.end_time = e.end;
    clip.frames = load_clip_frames(frames_root, e.source_id, e.start, e.end, k);

    const GlobalEmbedding emb = embed_clip(model, clip, k);
    const int64_t pred = classify(emb, class_embs);
    ++confusion[it->second][static_cast<size_t>(pred)];
  }

  EvalResult r = metrics_from_confusion(confusion, labels);
  r.k_frames = k;
  return r;
}

std::vector<EvalResult> frame_ablation(const Model& model,
                                       const Vocabulary& vocab,
                                       const std::vector<ManifestEntry>& clips,
                                       const std::string& frames_root,
                                       const PromptBank& bank,
                                       const std::vector<int64_t>& k_list) {
  std::vector<EvalResult> out;
  out.reserve(k_list.size());
  for (const int64_t k : k_list) {
    out.push_back(evaluate(model, vocab, clips, frames_root, bank, k));
  }
  return out;
}

}  // namespace vidlang
