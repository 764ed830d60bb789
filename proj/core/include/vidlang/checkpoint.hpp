// Copyright 2026 vidlang authors
// Training checkpoints: model weights, optimizer moments, and run state in a
// single weight archive. Re-saving an untouched checkpoint is byte-identical,
// and restoring one reproduces the exact training trajectory.
//
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vidlang/model.hpp"
#include "vidlang/optimizer.hpp"
#include "vidlang/schedule.hpp"

namespace vidlang {

// Run state stored alongside the tensors. vocab_words lists the learned
// words in id order (specials excluded), so a restored run tokenizes
// identically. best_metric is -1 before the first validation pass.
struct CheckpointState {
  ModelConfig model_config;
  TrainConfig train_config;
  std::vector<std::string> vocab_words;
  int64_t step = 0;   // optimizer steps completed
  int64_t epoch = 0;  // epochs completed
  double best_metric = -1.0;
};

// Writes param/<name>, adam_m/<name>, adam_v/<name> entries for every model
// parameter plus a metadata record. Moments not yet allocated by the
// optimizer are written as zeros of the parameter's shape.
void save_checkpoint(const std::string& path, const Model& model,
                     const AdamW& opt, const CheckpointState& state);

// Parses only the metadata record (cheap relative to tensor payloads; the
// archive is still read fully). Use it to build a Model with the right
// config before load_checkpoint.
CheckpointState read_checkpoint_state(const std::string& path);

// Restores weights, moments, and the optimizer step counter. The model must
// have been built with the stored config (mismatch throws Error(BadConfig));
// missing tensors throw Error(CorruptArchive).
CheckpointState load_checkpoint(const std::string& path, Model& model,
                                AdamW& opt);

}  // namespace vidlang
