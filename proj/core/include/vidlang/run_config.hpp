// Copyright 2026 vidlang authors
// Run configuration: model + training settings merged from defaults, an
// optional key = value config file, and command-line flags (defaults < file
// < flags). Keys mirror the config struct field names one-to-one.
//
// Licensed under the Apache License, Version 2.0

#pragma once

#include <string>

#include "vidlang/manifest.hpp"
#include "vidlang/model.hpp"
#include "vidlang/schedule.hpp"

namespace vidlang {

struct RunConfig {
  ModelConfig model;
  TrainConfig train;
};

// Applies one key/value pair onto the config. Keys are the ModelConfig and
// TrainConfig field names (e.g. embed_dim, base_lr, loss_weights); values
// are numbers, except loss_weights = three comma-separated numbers. Throws
// Error(BadConfig) for unknown keys or unparsable values.
void apply_key_value(RunConfig& cfg, const std::string& key,
                     const std::string& value);

// Reads a config file: one key = value per line, blank lines and
// #-comments ignored. Values land on top of the passed-in config (callers
// start from defaults). Throws IoError when unreadable, BadConfig on
// malformed lines.
void load_run_config(const std::string& path, RunConfig& cfg);

// Same grammar for curation filter settings (min_unique, max_rep_ratio,
// min_ttr, clip_seconds, min_tail_seconds).
void apply_filter_key_value(FilterConfig& cfg, const std::string& key,
                            const std::string& value);
void load_filter_config(const std::string& path, FilterConfig& cfg);

}  // namespace vidlang
