// Copyright 2026 vidlang authors
// Checkpoint save/restore on top of the weight archive format.
//
// Licensed under the Apache License, Version 2.0

#include "vidlang/checkpoint.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "config_json.hpp"
#include "json.hpp"
#include "vidlang/errors.hpp"
#include "vidlang/weights_io.hpp"

namespace vidlang {

namespace {

nlohmann::json state_to_json(const CheckpointState& s, int64_t adam_steps) {
  const double best = std::isfinite(s.best_metric) ? s.best_metric : -1.0;
  return nlohmann::json{
      {"kind", "checkpoint"},
      {"model_config", model_config_to_json(s.model_config)},
      {"train_config", train_config_to_json(s.train_config)},
      {"vocab_words", s.vocab_words},
      {"step", s.step},
      {"epoch", s.epoch},
      {"best_metric", best},
      {"adam_steps", adam_steps},
  };
}

CheckpointState state_from_json(const nlohmann::json& j) {
  CheckpointState s;
  s.model_config = model_config_from_json(j.at("model_config"));
  s.train_config = train_config_from_json(j.at("train_config"));
  s.vocab_words = j.at("vocab_words").get<std::vector<std::string>>();
  s.step = j.at("step").get<int64_t>();
  s.epoch = j.at("epoch").get<int64_t>();
  s.best_metric = j.at("best_metric").get<double>();
  return s;
}

nlohmann::json checkpoint_meta(const WeightArchive& ar) {
  nlohmann::json j = nlohmann::json::parse(ar.meta_json(), nullptr, false);
  if (!j.is_object() || j.value("kind", "") != "checkpoint") {
    throw Error(ErrorCode::CorruptArchive, "archive is not a checkpoint");
  }
  return j;
}

const Tensor& required(const WeightArchive& ar, const std::string& name) {
  if (!ar.contains(name)) {
    throw Error(ErrorCode::CorruptArchive, "checkpoint missing tensor " + name);
  }
  return ar.tensor(name);
}

}  // namespace

void save_checkpoint(const std::string& path, const Model& model,
                     const AdamW& opt, const CheckpointState& state) {
  WeightArchiveWriter w;
  for (const Parameter* p : model.params().all()) {
    w.add("param/" + p->name, p->value);
    w.add("adam_m/" + p->name,
          p->adam_m.empty() ? Tensor::zeros(p->value.shape()) : p->adam_m);
    w.add("adam_v/" + p->name,
          p->adam_v.empty() ? Tensor::zeros(p->value.shape()) : p->adam_v);
  }
  w.set_meta_json(state_to_json(state, opt.step_count()).dump());
  w.write(path);
}

CheckpointState read_checkpoint_state(const std::string& path) {
  const WeightArchive ar = WeightArchive::load(path);
  return state_from_json(checkpoint_meta(ar));
}

CheckpointState load_checkpoint(const std::string& path, Model& model,
                                AdamW& opt) {
  const WeightArchive ar = WeightArchive::load(path);
  const nlohmann::json meta = checkpoint_meta(ar);
  CheckpointState state = state_from_json(meta);

  if (model_config_to_json(state.model_config) !=
      model_config_to_json(model.config())) {
    throw Error(ErrorCode::BadConfig,
                "checkpoint was written for a different model config");
  }

  for (Parameter* p : model.params().all()) {
    const Tensor& value = required(ar, "param/" + p->name);
    const Tensor& m = required(ar, "adam_m/" + p->name);
    const Tensor& v = required(ar, "adam_v/" + p->name);
    if (!value.same_shape(p->value) || !m.same_shape(p->value) ||
        !v.same_shape(p->value)) {
      throw Error(ErrorCode::CorruptArchive,
                  "checkpoint tensor shape mismatch for " + p->name);
    }
    p->value = value;
    p->adam_m = m;
    p->adam_v = v;
  }
  opt.set_step_count(meta.at("adam_steps").get<int64_t>());
  return state;
}

}  // namespace vidlang
