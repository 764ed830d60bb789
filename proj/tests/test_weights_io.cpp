// Copyright 2026 vidlang authors
// Weight archive and checkpoint tests: round-trips, byte identity, and the
// corruption / version error paths.
//
// Licensed under the Apache License, Version 2.0

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "test_util.hpp"
#include "vidlang/checkpoint.hpp"
#include "vidlang/errors.hpp"
#include "vidlang/model.hpp"
#include "vidlang/optimizer.hpp"
#include "vidlang/weights_io.hpp"

using namespace vidlang;

namespace {

std::filesystem::path test_dir() {
  static const std::filesystem::path dir = [] {
    auto d = std::filesystem::temp_directory_path() / "vidlang_wio_test";
    std::filesystem::remove_all(d);
    std::filesystem::create_directories(d);
    return d;
  }();
  return dir;
}

std::string path_in(const std::string& name) {
  return (test_dir() / name).string();
}

std::string read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

void write_bytes(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  REQUIRE(out.good());
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error to be thrown");
  return ErrorCode::InvalidInput;
}

bool bitwise_equal(const Tensor& a, const Tensor& b) {
  if (!a.same_shape(b)) return false;
  return std::memcmp(a.data(), b.data(),
                     sizeof(double) * static_cast<size_t>(a.numel())) == 0;
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
  cfg.max_frames = 4;
  cfg.max_text_len = 8;
  cfg.proj_dim = 8;
  return cfg;
}

}  // namespace

TEST_CASE("archive round-trips tensors and metadata") {
  const std::string path = path_in("roundtrip.vlw");

  Rng rng(11);
  const Tensor a = testing::random_tensor({3, 5}, rng);
  const Tensor b = testing::random_tensor({1, 1}, rng);
  const Tensor c = testing::random_tensor({7, 2}, rng);

  WeightArchiveWriter writer;
  writer.add("zeta", c);
  writer.add("alpha", a);
  writer.add("mid/one", b);
  writer.set_meta_json(R"({"tag": 7, "purpose": "test"})");
  writer.write(path);

  const WeightArchive ar = WeightArchive::load(path);
  CHECK(ar.contains("alpha"));
  CHECK(ar.contains("mid/one"));
  CHECK(ar.contains("zeta"));
  CHECK_FALSE(ar.contains("missing"));
  CHECK(bitwise_equal(ar.tensor("alpha"), a));
  CHECK(bitwise_equal(ar.tensor("mid/one"), b));
  CHECK(bitwise_equal(ar.tensor("zeta"), c));

  // Entries come back name-sorted regardless of insertion order.
  const auto entries = ar.entries();
  REQUIRE(entries.size() == 3);
  CHECK(entries[0].name == "alpha");
  CHECK(entries[1].name == "mid/one");
  CHECK(entries[2].name == "zeta");
  CHECK(entries[0].dtype == "f64");
  CHECK(entries[0].shape == std::vector<int64_t>{3, 5});

  // Metadata is canonicalized but semantically intact.
  const auto meta = nlohmann::json::parse(ar.meta_json());
  CHECK(meta.at("tag").get<int>() == 7);
  CHECK(meta.at("purpose").get<std::string>() == "test");
}

TEST_CASE("archive payload is bit-exact for special doubles") {
  const std::string path = path_in("bits.vlw");

  Tensor t = Tensor::zeros({1, 4});
  t[0] = -0.0;
  t[1] = std::numeric_limits<double>::infinity();
  t[2] = std::numeric_limits<double>::quiet_NaN();
  t[3] = 4.9406564584124654e-324;  // smallest subnormal

  WeightArchiveWriter writer;
  writer.add("bits", t);
  writer.write(path);

  const WeightArchive ar = WeightArchive::load(path);
  const Tensor& back = ar.tensor("bits");
  CHECK(std::signbit(back[0]));
  CHECK(back[0] == 0.0);
  CHECK(std::isinf(back[1]));
  CHECK(std::isnan(back[2]));
  CHECK(back[3] == t[3]);
}

TEST_CASE("rewriting a loaded archive is byte-identical") {
  const std::string p1 = path_in("ident1.vlw");
  const std::string p2 = path_in("ident2.vlw");

  Rng rng(23);
  WeightArchiveWriter writer;
  writer.add("w/a", testing::random_tensor({4, 4}, rng));
  writer.add("w/b", testing::random_tensor({2, 9}, rng));
  writer.set_meta_json(R"({"z": 1, "a": [1.5, -2.25]})");
  writer.write(p1);

  const WeightArchive ar = WeightArchive::load(p1);
  WeightArchiveWriter again;
  for (const auto& e : ar.entries()) again.add(e.name, ar.tensor(e.name));
  again.set_meta_json(ar.meta_json());
  again.write(p2);

  CHECK(read_bytes(p1) == read_bytes(p2));
}

TEST_CASE("archive error paths carry the right codes") {
  const std::string good = path_in("good.vlw");
  WeightArchiveWriter writer;
  writer.add("only", Tensor::full({2, 2}, 1.25));
  writer.write(good);
  const std::string bytes = read_bytes(good);
  REQUIRE(bytes.size() > 24);

  SUBCASE("missing file") {
    CHECK(code_of([&] { WeightArchive::load(path_in("nope.vlw")); }) ==
          ErrorCode::IoError);
  }
  SUBCASE("bad magic") {
    std::string bad = bytes;
    bad[0] = 'X';
    write_bytes(path_in("magic.vlw"), bad);
    CHECK(code_of([&] { WeightArchive::load(path_in("magic.vlw")); }) ==
          ErrorCode::CorruptArchive);
  }
  SUBCASE("future version") {
    std::string bad = bytes;
    bad[4] = static_cast<char>(kWeightFormatVersion + 1);
    write_bytes(path_in("version.vlw"), bad);
    CHECK(code_of([&] { WeightArchive::load(path_in("version.vlw")); }) ==
          ErrorCode::VersionMismatch);
  }
  SUBCASE("truncated header") {
    write_bytes(path_in("trunc_hdr.vlw"), bytes.substr(0, 20));
    CHECK(code_of([&] { WeightArchive::load(path_in("trunc_hdr.vlw")); }) ==
          ErrorCode::CorruptArchive);
  }
  SUBCASE("truncated payload") {
    write_bytes(path_in("trunc_pay.vlw"), bytes.substr(0, bytes.size() - 8));
    CHECK(code_of([&] { WeightArchive::load(path_in("trunc_pay.vlw")); }) ==
          ErrorCode::CorruptArchive);
  }
  SUBCASE("duplicate entry name") {
    WeightArchiveWriter dup;
    dup.add("x", Tensor::zeros({1, 1}));
    CHECK(code_of([&] { dup.add("x", Tensor::zeros({1, 1})); }) ==
          ErrorCode::BadConfig);
  }
  SUBCASE("metadata must be a JSON object") {
    WeightArchiveWriter w2;
    CHECK(code_of([&] { w2.set_meta_json("[1,2]"); }) == ErrorCode::BadConfig);
    CHECK(code_of([&] { w2.set_meta_json("not json"); }) ==
          ErrorCode::BadConfig);
  }
  SUBCASE("missing tensor lookup") {
    const WeightArchive ar = WeightArchive::load(good);
    CHECK(code_of([&] { ar.tensor("absent"); }) == ErrorCode::CorruptArchive);
  }
}

TEST_CASE("export/import moves every parameter between models") {
  const std::string path = path_in("export.vlw");
  const ModelConfig cfg = tiny_config();

  Model src(cfg, /*seed=*/1);
  Model dst(cfg, /*seed=*/2);
  REQUIRE_FALSE(bitwise_equal(src.params().all()[0]->value,
                              dst.params().all()[0]->value));

  export_weights(src, path, R"({"note": "full export"})");
  const int64_t loaded = import_weights(dst, path);
  CHECK(loaded == static_cast<int64_t>(src.params().all().size()));
  for (size_t i = 0; i < src.params().all().size(); ++i) {
    CAPTURE(src.params().all()[i]->name);
    CHECK(bitwise_equal(src.params().all()[i]->value,
                        dst.params().all()[i]->value));
  }

  // Exporting the same model twice produces identical bytes.
  const std::string path2 = path_in("export2.vlw");
  export_weights(src, path2, R"({"note": "full export"})");
  CHECK(read_bytes(path) == read_bytes(path2));
}

TEST_CASE("import accepts partial and prefixed archives") {
  const ModelConfig cfg = tiny_config();
  Model model(cfg, /*seed=*/3);
  Parameter* target = model.params().all()[0];
  const Tensor replacement = Tensor::full(target->value.shape(), 0.5);

  SUBCASE("raw name, single entry") {
    const std::string path = path_in("partial.vlw");
    WeightArchiveWriter w;
    w.add(target->name, replacement);
    w.write(path);
    CHECK(import_weights(model, path) == 1);
    CHECK(bitwise_equal(target->value, replacement));
  }
  SUBCASE("param/ prefix") {
    const std::string path = path_in("prefixed.vlw");
    WeightArchiveWriter w;
    w.add("param/" + target->name, replacement);
    w.write(path);
    CHECK(import_weights(model, path) == 1);
    CHECK(bitwise_equal(target->value, replacement));
  }
  SUBCASE("shape mismatch is an error") {
    const std::string path = path_in("badshape.vlw");
    WeightArchiveWriter w;
    w.add(target->name, Tensor::zeros({1, 1 + target->value.cols()}));
    w.write(path);
    CHECK(code_of([&] { import_weights(model, path); }) ==
          ErrorCode::BadConfig);
  }
}

TEST_CASE("checkpoint restores weights, moments, and run state") {
  const std::string path = path_in("ckpt.vlw");
  const ModelConfig cfg = tiny_config();

  TrainConfig tc;
  tc.base_lr = 3e-4;
  tc.epochs = 4;
  tc.warmup_epochs = 1;
  tc.batch_size = 2;
  tc.loss_weights = {1.0, 0.5, 0.25};
  tc.frames_per_clip = 2;
  tc.seed = 99;

  Model src(cfg, /*seed=*/5);
  AdamW src_opt(src.params().all(), tc);
  // Fake a mid-run optimizer: populate moments with distinctive values.
  Rng rng(77);
  for (Parameter* p : src.params().all()) {
    p->adam_m = testing::random_tensor(p->value.shape(), rng);
    p->adam_v = testing::random_tensor(p->value.shape(), rng);
  }
  src_opt.set_step_count(17);

  CheckpointState state;
  state.model_config = cfg;
  state.train_config = tc;
  state.vocab_words = {"grasper", "retracts", "the", "gallbladder"};
  state.step = 17;
  state.epoch = 2;
  state.best_metric = 0.8125;
  save_checkpoint(path, src, src_opt, state);

  // Meta-only read sees the run state without a model.
  const CheckpointState peek = read_checkpoint_state(path);
  CHECK(peek.step == 17);
  CHECK(peek.epoch == 2);
  CHECK(peek.best_metric == 0.8125);
  CHECK(peek.vocab_words == state.vocab_words);
  CHECK(peek.model_config.embed_dim == cfg.embed_dim);
  CHECK(peek.train_config.base_lr == 3e-4);
  CHECK(peek.train_config.loss_weights == tc.loss_weights);
  CHECK(peek.train_config.seed == 99);

  Model dst(cfg, /*seed=*/6);
  AdamW dst_opt(dst.params().all(), tc);
  const CheckpointState restored = load_checkpoint(path, dst, dst_opt);
  CHECK(restored.step == 17);
  CHECK(dst_opt.step_count() == 17);
  for (size_t i = 0; i < src.params().all().size(); ++i) {
    const Parameter* a = src.params().all()[i];
    const Parameter* b = dst.params().all()[i];
    CAPTURE(a->name);
    CHECK(bitwise_equal(a->value, b->value));
    CHECK(bitwise_equal(a->adam_m, b->adam_m));
    CHECK(bitwise_equal(a->adam_v, b->adam_v));
  }

  // Save-after-load is byte-identical.
  const std::string path2 = path_in("ckpt2.vlw");
  save_checkpoint(path2, dst, dst_opt, restored);
  CHECK(read_bytes(path) == read_bytes(path2));
}

TEST_CASE("checkpoint guards config and kind") {
  const ModelConfig cfg = tiny_config();
  TrainConfig tc;
  tc.batch_size = 2;

  SUBCASE("config mismatch") {
    const std::string path = path_in("ckpt_cfg.vlw");
    Model src(cfg, 1);
    AdamW opt(src.params().all(), tc);
    CheckpointState state;
    state.model_config = cfg;
    state.train_config = tc;
    save_checkpoint(path, src, opt, state);

    ModelConfig other = cfg;
    other.proj_dim = 16;
    Model wrong(other, 1);
    AdamW wopt(wrong.params().all(), tc);
    CHECK(code_of([&] { load_checkpoint(path, wrong, wopt); }) ==
          ErrorCode::BadConfig);
  }
  SUBCASE("plain weight export is not a checkpoint") {
    const std::string path = path_in("not_ckpt.vlw");
    Model src(cfg, 1);
    AdamW opt(src.params().all(), tc);
    export_weights(src, path);
    CHECK(code_of([&] { load_checkpoint(path, src, opt); }) ==
          ErrorCode::CorruptArchive);
    CHECK(code_of([&] { read_checkpoint_state(path); }) ==
          ErrorCode::CorruptArchive);
  }
}
