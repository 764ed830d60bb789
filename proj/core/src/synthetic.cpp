// Copyright 2026 vidlang authors
// Synthetic corpus generation.
//
// Licensed under the Apache License, Version 2.0

#include "vidlang/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <utility>

#include "json.hpp"
#include "vidlang/errors.hpp"
#include "vidlang/frames.hpp"
#include "vidlang/pipeline.hpp"
#include "vidlang/rng.hpp"

namespace vidlang {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kBase = 0.15;       // background intensity
constexpr double kAmplitude = 0.7;   // signature strength above background
constexpr int64_t kBandPeriod = 16;  // band patterns repeat every 16 pixels
constexpr double kPi = 3.14159265358979323846;

double band(int64_t coord, int64_t shift) {
  const double phase = 2.0 * kPi * double(coord + shift) / double(kBandPeriod);
  return kBase + kAmplitude * (0.5 + 0.5 * std::sin(phase));
}

// Sentences stay within one phase's signature vocabulary; shared words are
// neutral connectives only, so captions remain separable across phases.
const std::vector<std::vector<std::string>>& builtin_templates() {
  static const std::vector<std::vector<std::string>> t = {
      {
          "The team prepares the operative field and inserts four trocars "
          "under direct vision. Insufflation settles and every port is "
          "checked before docking begins.",
          "Ports are placed around the umbilicus while the camera warms to "
          "working temperature. The abdomen is insufflated and the table "
          "tilts into position.",
          "Preparation starts with trocar placement and a slow survey of "
          "the abdomen. The camera sweeps the quadrants while the team "
          "completes the setup.",
      },
      {
          "The grasper retracts the fundus while the hook develops the "
          "dissection plane. Peritoneum peels away until the calot triangle "
          "shows clear exposure.",
          "Careful dissection opens the triangle between the liver edge and "
          "the infundibulum. The hook sweeps fibrous strands while the "
          "grasper holds steady tension.",
          "Blunt dissection exposes the window and the plane widens with "
          "each pass. The grasper lifts gently so the triangle stays under "
          "tension.",
      },
      {
          "Three clips secure the cystic duct and two more land on the "
          "artery. Scissors pass between the clips and divide both "
          "structures cleanly.",
          "The applier places titanium clips across the duct under direct "
          "view. Cold scissors divide the artery and the stump is "
          "inspected.",
          "Clipping proceeds from the duct to the artery with the applier "
          "angled low. The scissors cut between clips and the divided ends "
          "retract.",
      },
      {
          "The specimen drops into the retrieval bag and extraction "
          "proceeds through the port. Irrigation clears the fossa while "
          "suction dries the field for closure.",
          "A bag swallows the gallbladder and the neck cinches for "
          "extraction. Suction clears fluid and the fascia takes the "
          "closing stitch.",
          "Extraction of the specimen finishes once the bag clears the "
          "abdominal wall. Irrigation and suction leave a dry bed before "
          "closure.",
      },
  };
  return t;
}

const std::vector<std::string>& builtin_prompts() {
  static const std::vector<std::string> p = {
      "Surgeon prepares the operative field with trocars, ports, "
      "insufflation, and docking of the camera.",
      "Surgeon performs dissection of the calot triangle with grasper and "
      "hook to develop the plane and exposure.",
      "Surgeon places clips on the cystic duct and artery, then divides "
      "them with scissors.",
      "Surgeon performs extraction of the specimen in a retrieval bag with "
      "irrigation, suction, and closure.",
  };
  return p;
}

void check_phase_count(int64_t num_phases) {
  if (num_phases < 2 || num_phases > 4) {
    throw Error(ErrorCode::BadConfig,
                "num_phases must be in [2, 4]; built-in phases cover 4");
  }
}

std::string video_id_for(int64_t phase, int64_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "p%dv%04d", int(phase), int(index));
  return buf;
}

// Seeded word-order jitter: two adjacent-pair swaps on the space-separated
// words. The word multiset is unchanged, so filter verdicts are too.
std::string jitter_words(const std::string& text, Rng& rng) {
  std::vector<std::string> words;
  std::istringstream in(text);
  for (std::string w; in >> w;) words.push_back(std::move(w));
  if (words.size() >= 2) {
    for (int s = 0; s < 2; ++s) {
      const uint64_t i = rng.next_below(uint64_t(words.size() - 1));
      std::swap(words[i], words[i + 1]);
    }
  }
  std::string out;
  for (size_t i = 0; i < words.size(); ++i) {
    if (i > 0) out += ' ';
    out += words[i];
  }
  return out;
}

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::IoError, "cannot write " + path.string());
  }
  out << content;
  if (!out) {
    throw Error(ErrorCode::IoError, "short write to " + path.string());
  }
}

}  // namespace

const std::vector<std::string>& synth_phase_names() {
  static const std::vector<std::string> names = {"preparation", "dissection",
                                                 "clipping", "extraction"};
  return names;
}

std::vector<std::vector<std::string>> default_caption_templates(
    int64_t num_phases) {
  check_phase_count(num_phases);
  const auto& all = builtin_templates();
  return {all.begin(), all.begin() + num_phases};
}

PromptBank default_synth_prompts(int64_t num_phases) {
  check_phase_count(num_phases);
  PromptBank bank;
  for (int64_t k = 0; k < num_phases; ++k) {
    bank.push_back({synth_phase_names()[size_t(k)],
                    builtin_prompts()[size_t(k)]});
  }
  return bank;
}

int64_t synth_cycle(int64_t phase, int64_t image_size) {
  if (phase < 0 || phase > 3) {
    throw Error(ErrorCode::BadConfig, "phase must be in [0, 3]");
  }
  return phase == 3 ? image_size : kBandPeriod;
}

Tensor synth_pattern(int64_t phase, int64_t image_size, int64_t shift) {
  if (image_size < 1) {
    throw Error(ErrorCode::BadConfig, "image_size must be positive");
  }
  const int64_t cycle = synth_cycle(phase, image_size);
  const int64_t s = ((shift % cycle) + cycle) % cycle;
  const int64_t n = image_size;
  Tensor img({n, n, 3});
  img.fill(kBase);
  const double sigma = double(n) / 6.0;
  for (int64_t y = 0; y < n; ++y) {
    for (int64_t x = 0; x < n; ++x) {
      const int64_t at = (y * n + x) * 3;
      switch (phase) {
        case 0:
          img[at + 0] = band(y, s);
          break;
        case 1:
          img[at + 1] = band(x, s);
          break;
        case 2:
          img[at + 2] = band(x + y, s);
          break;
        default: {
          // Yellow blob drifting diagonally on a torus.
          const int64_t cy = (n / 2 + s) % n;
          const int64_t cx = (n / 2 + s) % n;
          const int64_t ay = std::min(std::abs(y - cy), n - std::abs(y - cy));
          const int64_t ax = std::min(std::abs(x - cx), n - std::abs(x - cx));
          const double d2 = double(ay * ay + ax * ax);
          const double v =
              kBase + kAmplitude * std::exp(-d2 / (2.0 * sigma * sigma));
          img[at + 0] = v;
          img[at + 1] = v;
          break;
        }
      }
    }
  }
  return img;
}

Manifest build_synthetic_corpus(const SyntheticSpec& spec,
                                const std::string& out_dir) {
  check_phase_count(spec.num_phases);
  if (spec.clips_per_phase < 1) {
    throw Error(ErrorCode::BadConfig, "clips_per_phase must be positive");
  }
  if (spec.image_size < 1) {
    throw Error(ErrorCode::BadConfig, "image_size must be positive");
  }
  if (spec.frames_per_clip < 1) {
    throw Error(ErrorCode::BadConfig, "frames_per_clip must be positive");
  }
  if (spec.noise_level < 0.0) {
    throw Error(ErrorCode::BadConfig, "noise_level must be non-negative");
  }
  auto templates = spec.caption_templates.empty()
                       ? default_caption_templates(spec.num_phases)
                       : spec.caption_templates;
  if (int64_t(templates.size()) != spec.num_phases) {
    throw Error(ErrorCode::BadConfig,
                "caption_templates must list one set per phase");
  }
  for (const auto& per_phase : templates) {
    if (per_phase.empty()) {
      throw Error(ErrorCode::BadConfig,
                  "each phase needs at least one caption template");
    }
  }

  const fs::path root(out_dir);
  const fs::path frames_root = root / "frames";
  const fs::path transcripts = root / "transcripts";
  fs::create_directories(frames_root);
  fs::create_directories(transcripts);

  // --- per-clip sources: frames, transcript, source record -----------------
  std::vector<SourceVideo> sources;
  std::string sources_jsonl;
  for (int64_t phase = 0; phase < spec.num_phases; ++phase) {
    for (int64_t i = 0; i < spec.clips_per_phase; ++i) {
      const int64_t g = phase * spec.clips_per_phase + i;
      const std::string vid = video_id_for(phase, i);

      const fs::path clip_dir = frames_root / vid;
      fs::create_directories(clip_dir);
      Rng frame_rng(stream_seed(spec.seed, uint64_t(g), RngStream::kFrames));
      const int64_t cycle = synth_cycle(phase, spec.image_size);
      const int64_t drift = int64_t(frame_rng.next_below(uint64_t(cycle)));
      for (int64_t f = 0; f < spec.frames_per_clip; ++f) {
        Tensor img = synth_pattern(phase, spec.image_size, drift + f);
        if (spec.noise_level > 0.0) {
          for (int64_t v = 0; v < img.numel(); ++v) {
            img[v] = std::clamp(
                img[v] + spec.noise_level * frame_rng.next_normal(), 0.0, 1.0);
          }
        }
        write_ppm((clip_dir / frame_filename(f)).string(), img);
      }

      Rng text_rng(stream_seed(spec.seed, uint64_t(g), RngStream::kCaption));
      const auto& pool = templates[size_t(phase)];
      const std::string& tmpl =
          pool[size_t(text_rng.next_below(uint64_t(pool.size())))];
      const std::string narration = jitter_words(tmpl, text_rng);

      const double duration = double(spec.frames_per_clip);
      json tj;
      tj["video_id"] = vid;
      tj["segments"] =
          json::array({{{"start", 0.0}, {"end", duration}, {"text", narration}}});
      write_text_file(transcripts / (vid + ".json"), tj.dump() + "\n");

      SourceVideo sv;
      sv.video_id = vid;
      sv.duration = duration;
      sv.has_audio = true;
      sv.frames_dir = "frames/" + vid;
      sv.transcript_file = "transcripts/" + vid + ".json";
      sv.phase_label = synth_phase_names()[size_t(phase)];
      json sj;
      sj["video_id"] = sv.video_id;
      sj["duration"] = sv.duration;
      sj["has_audio"] = sv.has_audio;
      sj["frames_dir"] = sv.frames_dir;
      sj["transcript_file"] = sv.transcript_file;
      sj["phase_label"] = sv.phase_label;
      sources_jsonl += sj.dump() + "\n";
      sources.push_back(std::move(sv));
    }
  }
  write_text_file(root / "sources.jsonl", sources_jsonl);

  // --- curate through the standard pipeline --------------------------------
  FileAsrClient asr(root.string());
  StubCaptionClient captioner;
  PipelineConfig pcfg;
  pcfg.frames_root = "frames";
  // One clip per source: spans must match the source duration, or short
  // sources would all drop as short tails.
  pcfg.filters.clip_seconds = spec.frames_per_clip;
  pcfg.filters.min_tail_seconds = std::min<int64_t>(
      pcfg.filters.min_tail_seconds, spec.frames_per_clip);
  Manifest manifest = build_manifest(sources, asr, captioner, pcfg);

  // --- stratified 80/10/10 split by clip ------------------------------------
  std::unordered_map<std::string, std::string> split_of;
  for (int64_t phase = 0; phase < spec.num_phases; ++phase) {
    std::vector<int64_t> order(size_t(spec.clips_per_phase));
    for (int64_t i = 0; i < spec.clips_per_phase; ++i) order[size_t(i)] = i;
    Rng split_rng(stream_seed(spec.seed, uint64_t(phase), RngStream::kSplit));
    for (size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[size_t(split_rng.next_below(i))]);
    }
    const int64_t n_val = spec.clips_per_phase / 10;
    const int64_t n_test = spec.clips_per_phase / 10;
    for (int64_t r = 0; r < spec.clips_per_phase; ++r) {
      const char* split = r < n_val              ? "val"
                          : r < n_val + n_test   ? "test"
                                                 : "train";
      split_of[video_id_for(phase, order[size_t(r)])] = split;
    }
  }
  for (auto& e : manifest.entries) {
    e.split = split_of.at(e.source_id);
  }

  write_manifest((root / "manifest.jsonl").string(), manifest);

  std::string prompts_tsv;
  for (const auto& p : default_synth_prompts(spec.num_phases)) {
    prompts_tsv += p.label + "\t" + p.text + "\n";
  }
  write_text_file(root / "prompts.tsv", prompts_tsv);

  return manifest;
}

}  // namespace vidlang
