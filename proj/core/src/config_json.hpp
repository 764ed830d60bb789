// Copyright 2026 vidlang authors
// Internal JSON conversions for config structs (checkpoint + run log wire
// format). Not installed; public headers stay JSON-free.
//
// Licensed under the Apache License, Version 2.0

#pragma once

#include "json.hpp"
#include "vidlang/model.hpp"
#include "vidlang/schedule.hpp"

namespace vidlang {

inline nlohmann::json model_config_to_json(const ModelConfig& c) {
  return nlohmann::json{
      {"image_size", c.image_size},
      {"patch_size", c.patch_size},
      {"embed_dim", c.embed_dim},
      {"num_heads", c.num_heads},
      {"num_layers_video", c.num_layers_video},
      {"num_layers_text", c.num_layers_text},
      {"num_fusion_layers", c.num_fusion_layers},
      {"vocab_size", c.vocab_size},
      {"max_frames", c.max_frames},
      {"max_text_len", c.max_text_len},
      {"proj_dim", c.proj_dim},
  };
}

inline ModelConfig model_config_from_json(const nlohmann::json& j) {
  ModelConfig c;
  c.image_size = j.at("image_size").get<int64_t>();
  c.patch_size = j.at("patch_size").get<int64_t>();
  c.embed_dim = j.at("embed_dim").get<int64_t>();
  c.num_heads = j.at("num_heads").get<int64_t>();
  c.num_layers_video = j.at("num_layers_video").get<int64_t>();
  c.num_layers_text = j.at("num_layers_text").get<int64_t>();
  c.num_fusion_layers = j.at("num_fusion_layers").get<int64_t>();
  c.vocab_size = j.at("vocab_size").get<int64_t>();
  c.max_frames = j.at("max_frames").get<int64_t>();
  c.max_text_len = j.at("max_text_len").get<int64_t>();
  c.proj_dim = j.at("proj_dim").get<int64_t>();
  return c;
}

inline nlohmann::json train_config_to_json(const TrainConfig& c) {
  return nlohmann::json{
      {"base_lr", c.base_lr},
      {"beta1", c.beta1},
      {"beta2", c.beta2},
      {"adam_eps", c.adam_eps},
      {"weight_decay", c.weight_decay},
      {"warmup_epochs", c.warmup_epochs},
      {"epochs", c.epochs},
      {"batch_size", c.batch_size},
      {"temperature", c.temperature},
      {"loss_weights", c.loss_weights},
      {"mask_rate", c.mask_rate},
      {"grad_clip", c.grad_clip},
      {"min_lr", c.min_lr},
      {"frames_per_clip", c.frames_per_clip},
      {"seed", c.seed},
  };
}

inline TrainConfig train_config_from_json(const nlohmann::json& j) {
  TrainConfig c;
  c.base_lr = j.at("base_lr").get<double>();
  c.beta1 = j.at("beta1").get<double>();
  c.beta2 = j.at("beta2").get<double>();
  c.adam_eps = j.at("adam_eps").get<double>();
  c.weight_decay = j.at("weight_decay").get<double>();
  c.warmup_epochs = j.at("warmup_epochs").get<int64_t>();
  c.epochs = j.at("epochs").get<int64_t>();
  c.batch_size = j.at("batch_size").get<int64_t>();
  c.temperature = j.at("temperature").get<double>();
  const auto w = j.at("loss_weights").get<std::vector<double>>();
  for (size_t i = 0; i < 3 && i < w.size(); ++i) c.loss_weights[i] = w[i];
  c.mask_rate = j.at("mask_rate").get<double>();
  c.grad_clip = j.at("grad_clip").get<double>();
  c.min_lr = j.at("min_lr").get<double>();
  c.frames_per_clip = j.at("frames_per_clip").get<int64_t>();
  c.seed = j.at("seed").get<uint64_t>();
  return c;
}

}  // namespace vidlang
