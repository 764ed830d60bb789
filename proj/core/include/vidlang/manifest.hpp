// Copyright 2026 vidlang authors
// Clip manifest: the line-delimited record file listing curated clip-caption
// pairs, filter verdicts, and labels. One stats record first, then one
// record per clip span (kept or dropped). Writing is deterministic, so
// identical inputs produce byte-identical manifests.
//
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace vidlang {

// Curation thresholds. The linguistic criteria (unique-word floor,
// repetition ratio, type-token ratio) are configurable and recorded in the
// manifest stats so every manifest documents how it was filtered.
struct FilterConfig {
  int64_t min_unique = 10;
  double max_rep_ratio = 0.5;
  double min_ttr = 0.2;
  int64_t clip_seconds = 45;
  int64_t min_tail_seconds = 30;
};

struct ManifestEntry {
  std::string clip_id;
  std::string source_id;
  double start = 0.0;
  double end = 0.0;
  std::string transcript;
  std::string caption;
  std::string status;       // "kept" | "dropped"
  std::string reason;       // drop reason; empty when kept
  std::string phase_label;  // optional ground-truth phase
  std::string split;        // optional: "train" | "val" | "test"

  bool kept() const { return status == "kept"; }
};

struct ManifestStats {
  int64_t kept = 0;
  std::map<std::string, int64_t> dropped;  // reason -> count
  double kept_hours = 0.0;                 // kept * clip_seconds / 3600
  std::string frames_root;                 // relative to the manifest file
  std::string caption_client;
  FilterConfig filters;
};

struct Manifest {
  ManifestStats stats;
  std::vector<ManifestEntry> entries;

  std::vector<ManifestEntry> kept_entries() const;
  // Kept entries in the given split ("" matches entries with no split).
  std::vector<ManifestEntry> split_entries(const std::string& split) const;
};

void write_manifest(const std::string& path, const Manifest& manifest);

// Throws Error(IoError) when unreadable and Error(InvalidInput) on malformed
// records or a missing leading stats record.
Manifest read_manifest(const std::string& path);

}  // namespace vidlang
