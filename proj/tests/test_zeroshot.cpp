// Copyright 2026 vidlang authors
// Zero-shot evaluation tests: prompt banks, embedding determinism, the
// cosine classifier against a brute-force oracle, confusion-matrix metrics,
// and the ablation sweep bookkeeping.
//
// Licensed under the Apache License, Version 2.0

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "test_util.hpp"
#include "vidlang/errors.hpp"
#include "vidlang/frames.hpp"
#include "vidlang/manifest.hpp"
#include "vidlang/model.hpp"
#include "vidlang/zeroshot.hpp"

using namespace vidlang;
using namespace vidlang::testing;

namespace {

std::filesystem::path test_dir() {
  static const std::filesystem::path dir = [] {
    auto d = std::filesystem::temp_directory_path() / "vidlang_zeroshot_test";
    std::filesystem::remove_all(d);
    std::filesystem::create_directories(d);
    return d;
  }();
  return dir;
}

ModelConfig tiny_config() {
  ModelConfig cfg;
  cfg.image_size = 16;
  cfg.patch_size = 8;
  cfg.embed_dim = 16;
  cfg.num_heads = 2;
  cfg.num_layers_video = 1;
  cfg.num_layers_text = 1;
  cfg.num_fusion_layers = 1;
  cfg.vocab_size = 32;
  cfg.max_frames = 8;
  cfg.max_text_len = 12;
  cfg.proj_dim = 8;
  return cfg;
}

GlobalEmbedding unit_embedding(int64_t dim, Rng& rng) {
  GlobalEmbedding e;
  e.vec = Tensor({1, dim});
  double norm2 = 0.0;
  for (int64_t j = 0; j < dim; ++j) {
    e.vec(0, j) = rng.next_normal();
    norm2 += e.vec(0, j) * e.vec(0, j);
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (int64_t j = 0; j < dim; ++j) e.vec(0, j) *= inv;
  return e;
}

// A two-source frame store (bright vs dark) with 45 frames each, plus the
// matching kept manifest entries and prompt bank.
struct TinyEvalFixture {
  std::string frames_root;
  std::vector<ManifestEntry> entries;
  PromptBank bank;
  Vocabulary vocab;
};

TinyEvalFixture make_fixture(const ModelConfig& cfg) {
  TinyEvalFixture f;
  const auto root = test_dir() / "store";
  f.frames_root = root.string();
  const double levels[2] = {0.9, 0.15};
  const char* sources[2] = {"s_bright", "s_dark"};
  for (int s = 0; s < 2; ++s) {
    std::filesystem::create_directories(root / sources[s]);
    for (int64_t sec = 0; sec < 45; ++sec) {
      Tensor frame({cfg.image_size, cfg.image_size, 3});
      frame.fill(levels[s]);
      write_ppm((root / sources[s] / frame_filename(sec)).string(), frame);
    }
    ManifestEntry e;
    e.clip_id = std::string(sources[s]) + "_c000";
    e.source_id = sources[s];
    e.start = 0.0;
    e.end = 45.0;
    e.status = "kept";
    e.phase_label = s == 0 ? "bright" : "dark";
    f.entries.push_back(std::move(e));
  }
  f.bank = {{"bright", "Everything is bright white tissue."},
            {"dark", "The dark field shows nothing yet."}};
  f.vocab = Vocabulary::build(
      {"everything is bright white tissue the dark field shows nothing yet"},
      32);
  return f;
}

}  // namespace

TEST_CASE("prompt bank: parsing, comments, and error paths") {
  const std::string p = (test_dir() / "bank.tsv").string();
  std::ofstream(p, std::ios::binary)
      << "# comment line\n"
      << "Preparation\tSurgeon prepares the field.\n"
      << "\n"
      << "Dissection\tSurgeon dissects the triangle.\n";
  const PromptBank bank = load_prompt_bank(p);
  REQUIRE(bank.size() == 2);
  CHECK(bank[0].label == "Preparation");
  CHECK(bank[1].text == "Surgeon dissects the triangle.");

  std::ofstream(p, std::ios::binary | std::ios::trunc)
      << "A\tone.\nA\ttwo.\n";
  CHECK_THROWS_AS(load_prompt_bank(p), Error);

  std::ofstream(p, std::ios::binary | std::ios::trunc) << "no tab here\n";
  CHECK_THROWS_AS(load_prompt_bank(p), Error);

  std::ofstream(p, std::ios::binary | std::ios::trunc) << "# only comments\n";
  CHECK_THROWS_AS(load_prompt_bank(p), Error);

  CHECK_THROWS_AS(load_prompt_bank((test_dir() / "absent.tsv").string()), Error);
}

TEST_CASE("prompt bank: shipped banks load with seven phases each") {
  const std::string root = std::string(VIDLANG_REPO_DIR) + "/assets/prompts";
  const PromptBank cholec = load_prompt_bank(root + "/cholec80.tsv");
  REQUIRE(cholec.size() == 7);
  CHECK(cholec[0].label == "Preparation");
  CHECK(cholec[1].label == "Calot Triangle Dissection");
  CHECK(cholec[6].label == "Gallbladder Retraction");

  const PromptBank autolap = load_prompt_bank(root + "/autolaparo.tsv");
  REQUIRE(autolap.size() == 7);
  CHECK(autolap[3].label == "Transecting the Vagina");
}

TEST_CASE("embed_prompts: unit norm, determinism, duplicate guard") {
  const ModelConfig cfg = tiny_config();
  Model model(cfg, 3);
  randomize_params(model.params().all(), 17);

  TinyEvalFixture f = make_fixture(cfg);
  const auto embs = embed_prompts(model, f.vocab, f.bank);
  REQUIRE(embs.size() == 2);
  for (const auto& e : embs) {
    double norm2 = 0.0;
    for (int64_t j = 0; j < e.vec.cols(); ++j) norm2 += e.vec(0, j) * e.vec(0, j);
    CHECK(std::fabs(std::sqrt(norm2) - 1.0) < 1e-9);
  }

  const auto again = embed_prompts(model, f.vocab, f.bank);
  for (size_t c = 0; c < embs.size(); ++c) {
    for (int64_t j = 0; j < embs[c].vec.cols(); ++j) {
      CHECK(embs[c].vec(0, j) == again[c].vec(0, j));
    }
  }

  PromptBank dup = {{"x", "one."}, {"x", "two."}};
  CHECK_THROWS_AS(embed_prompts(model, f.vocab, dup), Error);
  CHECK_THROWS_AS(embed_prompts(model, f.vocab, PromptBank{}), Error);
}

TEST_CASE("embed_clip: samples the midpoint frames exactly") {
  const ModelConfig cfg = tiny_config();
  Model model(cfg, 4);
  randomize_params(model.params().all(), 21);

  VideoClip clip;
  clip.frames = Tensor({45, cfg.image_size, cfg.image_size, 3});
  Rng rng(6);
  for (int64_t i = 0; i < clip.frames.numel(); ++i) {
    clip.frames[i] = rng.next_double();
  }

  // Manual gather of frames [5, 16, 28, 39] must match embed_clip(k=4).
  VideoClip manual;
  manual.frames = Tensor({4, cfg.image_size, cfg.image_size, 3});
  const int64_t stride = cfg.image_size * cfg.image_size * 3;
  const std::vector<int64_t> idx = {5, 16, 28, 39};
  for (int64_t i = 0; i < 4; ++i) {
    for (int64_t j = 0; j < stride; ++j) {
      manual.frames[i * stride + j] = clip.frames[idx[size_t(i)] * stride + j];
    }
  }

  const GlobalEmbedding via_clip = embed_clip(model, clip, 4);
  const GlobalEmbedding via_manual =
      model.project_global(model.encode_video(manual).cls, Modality::kVideo);
  for (int64_t j = 0; j < via_clip.vec.cols(); ++j) {
    CHECK(via_clip.vec(0, j) == via_manual.vec(0, j));
  }

  // Single-frame inference works and stays unit-norm.
  const GlobalEmbedding single = embed_clip(model, clip, 1);
  double norm2 = 0.0;
  for (int64_t j = 0; j < single.vec.cols(); ++j) {
    norm2 += single.vec(0, j) * single.vec(0, j);
  }
  CHECK(std::fabs(std::sqrt(norm2) - 1.0) < 1e-9);

  CHECK_THROWS_AS(embed_clip(model, clip, 46), Error);
}

TEST_CASE("classify: matches brute-force cosine argmax on 100 instances") {
  Rng rng(40);
  const int64_t dim = 8;
  std::vector<GlobalEmbedding> classes;
  for (int c = 0; c < 5; ++c) classes.push_back(unit_embedding(dim, rng));

  for (int trial = 0; trial < 100; ++trial) {
    const GlobalEmbedding clip = unit_embedding(dim, rng);
    // Independent oracle: explicit cosine with norms, first-max tie rule.
    int64_t want = 0;
    double best = -2.0;
    for (size_t c = 0; c < classes.size(); ++c) {
      double dot = 0.0, na = 0.0, nb = 0.0;
      for (int64_t j = 0; j < dim; ++j) {
        dot += clip.vec(0, j) * classes[c].vec(0, j);
        na += clip.vec(0, j) * clip.vec(0, j);
        nb += classes[c].vec(0, j) * classes[c].vec(0, j);
      }
      const double cosine = dot / std::sqrt(na * nb);
      if (cosine > best) {
        best = cosine;
        want = static_cast<int64_t>(c);
      }
    }
    CHECK(classify(clip, classes) == want);
  }
}

TEST_CASE("classify: scale invariance and deterministic ties") {
  Rng rng(41);
  std::vector<GlobalEmbedding> classes;
  for (int c = 0; c < 3; ++c) classes.push_back(unit_embedding(6, rng));

  GlobalEmbedding clip = unit_embedding(6, rng);
  const int64_t base = classify(clip, classes);
  for (double scale : {0.25, 3.0, 1e6}) {
    GlobalEmbedding scaled = clip;
    for (int64_t j = 0; j < scaled.vec.cols(); ++j) scaled.vec(0, j) *= scale;
    CHECK(classify(scaled, classes) == base);
  }

  // Identical class embeddings tie; the first in bank order wins.
  std::vector<GlobalEmbedding> tied = {classes[0], classes[0], classes[0]};
  CHECK(classify(clip, tied) == 0);

  // Self-similarity is maximal: a clip equal to class 2 picks class 2.
  CHECK(classify(classes[2], classes) == 2);

  // Bank of one degenerates to that label.
  std::vector<GlobalEmbedding> one = {classes[1]};
  CHECK(classify(clip, one) == 0);
}

TEST_CASE("metrics: worked confusion fixture and identities") {
  const std::vector<std::vector<int64_t>> confusion = {{8, 2}, {1, 9}};
  const EvalResult r = metrics_from_confusion(confusion, {"A", "B"});

  CHECK(r.accuracy == 0.85);
  CHECK(std::fabs(r.macro_f1 - 113.0 / 133.0) < 1e-15);
  CHECK(std::fabs(r.macro_f1 - 0.8496240601503759) < 1e-9);
  CHECK(r.total == 20);

  REQUIRE(r.per_class.size() == 2);
  CHECK(std::fabs(r.per_class[0].precision - 8.0 / 9.0) < 1e-15);
  CHECK(std::fabs(r.per_class[0].recall - 0.8) < 1e-15);
  CHECK(std::fabs(r.per_class[0].f1 - 16.0 / 19.0) < 1e-15);
  CHECK(std::fabs(r.per_class[1].f1 - 18.0 / 21.0) < 1e-15);
  CHECK(r.per_class[0].support == 10);

  // Independent recomputation from precision/recall definitions.
  const auto oracle = oracle_metrics(confusion);
  CHECK(std::fabs(r.accuracy - oracle.accuracy) < 1e-12);
  CHECK(std::fabs(r.macro_f1 - oracle.macro_f1) < 1e-12);

  // Perfect predictions.
  const EvalResult perfect =
      metrics_from_confusion({{4, 0}, {0, 6}}, {"A", "B"});
  CHECK(perfect.accuracy == 1.0);
  CHECK(perfect.macro_f1 == 1.0);

  // Zero-support class drops out of the macro mean.
  const EvalResult partial = metrics_from_confusion(
      {{5, 0, 0}, {2, 3, 0}, {0, 0, 0}}, {"A", "B", "C"});
  const auto oracle3 = oracle_metrics({{5, 0, 0}, {2, 3, 0}, {0, 0, 0}});
  CHECK(std::fabs(partial.macro_f1 - oracle3.macro_f1) < 1e-12);
  CHECK(partial.per_class[2].support == 0);

  CHECK_THROWS_AS(metrics_from_confusion({{0, 0}, {0, 0}}, {"A", "B"}), Error);
  CHECK_THROWS_AS(metrics_from_confusion({{1, 0}}, {"A", "B"}), Error);
}

TEST_CASE("evaluate: bookkeeping, label guard, bank permutation") {
  const ModelConfig cfg = tiny_config();
  Model model(cfg, 8);
  randomize_params(model.params().all(), 55);
  TinyEvalFixture f = make_fixture(cfg);

  const EvalResult r = evaluate(model, f.vocab, f.entries, f.frames_root,
                                f.bank, 4);
  CHECK(r.total == 2);
  CHECK(r.k_frames == 4);
  int64_t sum = 0;
  for (const auto& row : r.confusion) {
    for (int64_t v : row) sum += v;
  }
  CHECK(sum == 2);

  // Permuting the bank permutes per-class rows and preserves the metrics.
  PromptBank reversed = {f.bank[1], f.bank[0]};
  const EvalResult rr = evaluate(model, f.vocab, f.entries, f.frames_root,
                                 reversed, 4);
  CHECK(rr.accuracy == r.accuracy);
  CHECK(rr.macro_f1 == doctest::Approx(r.macro_f1).epsilon(1e-12));
  CHECK(rr.per_class[0].label == "dark");
  CHECK(rr.per_class[0].f1 == r.per_class[1].f1);
  CHECK(rr.confusion[0][0] == r.confusion[1][1]);

  // A label outside the bank is an error.
  std::vector<ManifestEntry> bad = f.entries;
  bad[0].phase_label = "unheard_of";
  CHECK_THROWS_AS(evaluate(model, f.vocab, bad, f.frames_root, f.bank, 4),
                  Error);
  CHECK_THROWS_AS(evaluate(model, f.vocab, {}, f.frames_root, f.bank, 4),
                  Error);
}

TEST_CASE("frame ablation: one row per k over the identical clip set") {
  const ModelConfig cfg = tiny_config();
  Model model(cfg, 9);
  randomize_params(model.params().all(), 77);
  TinyEvalFixture f = make_fixture(cfg);

  const std::vector<int64_t> k_list = {1, 4};
  const auto table = frame_ablation(model, f.vocab, f.entries, f.frames_root,
                                    f.bank, k_list);
  REQUIRE(table.size() == 2);
  CHECK(table[0].k_frames == 1);
  CHECK(table[1].k_frames == 4);
  CHECK(table[0].total == table[1].total);

  // Rerun with the same model and data: identical results.
  const auto again = frame_ablation(model, f.vocab, f.entries, f.frames_root,
                                    f.bank, k_list);
  for (size_t i = 0; i < table.size(); ++i) {
    CHECK(table[i].accuracy == again[i].accuracy);
    CHECK(table[i].confusion == again[i].confusion);
  }
}
