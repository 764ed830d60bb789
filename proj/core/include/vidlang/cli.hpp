// Copyright 2026 vidlang authors
// Command-line entry point: subcommands for corpus curation, synthetic data
// generation, pre-training, zero-shot evaluation, and the frame-count
// ablation. Every run writes a run_log.json (config snapshot, seed,
// version, metrics) next to its outputs.
//
// Licensed under the Apache License, Version 2.0

#pragma once

#include <string>
#include <vector>

namespace vidlang {

inline constexpr const char* kVersion = "0.1.0";

// Dispatches one invocation:
//   pipeline build --input <dir> --out <manifest> [--config <file>]
//                  [--stub-clients] [--caption-endpoint host:port[/path]]
//   synth build    --phases K --clips N --out <dir> [...]
//   train          --manifest <file> --out <dir> [--config <file>] [flags]
//   eval zeroshot  --checkpoint <file> --manifest <file> --prompts <file>
//                  --frames k --out <dir>
//   eval ablate    --checkpoint <file> --manifest <file> --prompts <file>
//                  --frames 1,4,8,16 --out <dir>
// Returns 0 on success, 1 with a one-line diagnostic on runtime errors, and
// 2 with usage on unknown flags or subcommands. `args` excludes argv[0].
int run_command(const std::vector<std::string>& args);

// main() adapter.
int run_command(int argc, char** argv);

}  // namespace vidlang
