// Copyright 2026 vidlang authors
// Config file parsing.
//
// Licensed under the Apache License, Version 2.0

#include "vidlang/run_config.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "vidlang/errors.hpp"

namespace vidlang {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

int64_t parse_i64(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    const int64_t v = std::stoll(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::BadConfig,
                "config key " + key + " needs an integer, got '" + value + "'");
  }
}

uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    const uint64_t v = std::stoull(value, &pos);
    if (pos != value.size() || value.find('-') != std::string::npos) {
      throw std::invalid_argument(value);
    }
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::BadConfig, "config key " + key +
                                          " needs a non-negative integer, got '" +
                                          value + "'");
  }
}

double parse_f64(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::BadConfig,
                "config key " + key + " needs a number, got '" + value + "'");
  }
}

std::array<double, 3> parse_weights(const std::string& key,
                                    const std::string& value) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : value) {
    if (c == ',') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  if (parts.size() != 3) {
    throw Error(ErrorCode::BadConfig,
                "config key " + key + " needs three comma-separated numbers");
  }
  return {parse_f64(key, trim(parts[0])), parse_f64(key, trim(parts[1])),
          parse_f64(key, trim(parts[2]))};
}

// Shared line-grammar driver: key = value, # comments, blank lines.
template <typename Apply>
void load_lines(const std::string& path, Apply&& apply) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot read config file " + path);
  }
  std::string line;
  int64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::BadConfig,
                  path + ":" + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw Error(ErrorCode::BadConfig,
                  path + ":" + std::to_string(lineno) + ": expected key = value");
    }
    try {
      apply(key, value);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::BadConfig) throw;
      std::string msg = e.what();
      const std::string prefix =
          std::string(error_code_name(ErrorCode::BadConfig)) + ": ";
      if (msg.rfind(prefix, 0) == 0) msg = msg.substr(prefix.size());
      throw Error(ErrorCode::BadConfig,
                  path + ":" + std::to_string(lineno) + ": " + msg);
    }
  }
}

}  // namespace

void apply_key_value(RunConfig& cfg, const std::string& key,
                     const std::string& value) {
  ModelConfig& m = cfg.model;
  TrainConfig& t = cfg.train;
  // model
  if (key == "image_size") m.image_size = parse_i64(key, value);
  else if (key == "patch_size") m.patch_size = parse_i64(key, value);
  else if (key == "embed_dim") m.embed_dim = parse_i64(key, value);
  else if (key == "num_heads") m.num_heads = parse_i64(key, value);
  else if (key == "num_layers_video") m.num_layers_video = parse_i64(key, value);
  else if (key == "num_layers_text") m.num_layers_text = parse_i64(key, value);
  else if (key == "num_fusion_layers") m.num_fusion_layers = parse_i64(key, value);
  else if (key == "vocab_size") m.vocab_size = parse_i64(key, value);
  else if (key == "max_frames") m.max_frames = parse_i64(key, value);
  else if (key == "max_text_len") m.max_text_len = parse_i64(key, value);
  else if (key == "proj_dim") m.proj_dim = parse_i64(key, value);
  // training
  else if (key == "base_lr") t.base_lr = parse_f64(key, value);
  else if (key == "beta1") t.beta1 = parse_f64(key, value);
  else if (key == "beta2") t.beta2 = parse_f64(key, value);
  else if (key == "adam_eps") t.adam_eps = parse_f64(key, value);
  else if (key == "weight_decay") t.weight_decay = parse_f64(key, value);
  else if (key == "warmup_epochs") t.warmup_epochs = parse_i64(key, value);
  else if (key == "epochs") t.epochs = parse_i64(key, value);
  else if (key == "batch_size") t.batch_size = parse_i64(key, value);
  else if (key == "temperature") t.temperature = parse_f64(key, value);
  else if (key == "loss_weights") t.loss_weights = parse_weights(key, value);
  else if (key == "mask_rate") t.mask_rate = parse_f64(key, value);
  else if (key == "grad_clip") t.grad_clip = parse_f64(key, value);
  else if (key == "min_lr") t.min_lr = parse_f64(key, value);
  else if (key == "frames_per_clip") t.frames_per_clip = parse_i64(key, value);
  else if (key == "seed") t.seed = parse_u64(key, value);
  else {
    throw Error(ErrorCode::BadConfig, "unknown config key: " + key);
  }
}

void load_run_config(const std::string& path, RunConfig& cfg) {
  load_lines(path, [&cfg](const std::string& k, const std::string& v) {
    apply_key_value(cfg, k, v);
  });
}

void apply_filter_key_value(FilterConfig& cfg, const std::string& key,
                            const std::string& value) {
  if (key == "min_unique") cfg.min_unique = parse_i64(key, value);
  else if (key == "max_rep_ratio") cfg.max_rep_ratio = parse_f64(key, value);
  else if (key == "min_ttr") cfg.min_ttr = parse_f64(key, value);
  else if (key == "clip_seconds") cfg.clip_seconds = parse_i64(key, value);
  else if (key == "min_tail_seconds") cfg.min_tail_seconds = parse_i64(key, value);
  else {
    throw Error(ErrorCode::BadConfig, "unknown filter config key: " + key);
  }
}

void load_filter_config(const std::string& path, FilterConfig& cfg) {
  load_lines(path, [&cfg](const std::string& k, const std::string& v) {
    apply_filter_key_value(cfg, k, v);
  });
}

}  // namespace vidlang
