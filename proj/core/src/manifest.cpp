// Copyright 2026 vidlang authors
// Manifest persistence as line-delimited JSON records.
//
// Licensed under the Apache License, Version 2.0

#include "vidlang/manifest.hpp"

#include <fstream>
#include <string>

#include "json.hpp"
#include "vidlang/errors.hpp"

namespace vidlang {

namespace {

using nlohmann::json;

json stats_record(const ManifestStats& s) {
  return json{
      {"record", "stats"},
      {"kept", s.kept},
      {"dropped", s.dropped},
      {"kept_hours", s.kept_hours},
      {"frames_root", s.frames_root},
      {"caption_client", s.caption_client},
      {"filters",
       {{"min_unique", s.filters.min_unique},
        {"max_rep_ratio", s.filters.max_rep_ratio},
        {"min_ttr", s.filters.min_ttr},
        {"clip_seconds", s.filters.clip_seconds},
        {"min_tail_seconds", s.filters.min_tail_seconds}}},
  };
}

ManifestStats parse_stats(const json& j) {
  ManifestStats s;
  s.kept = j.at("kept").get<int64_t>();
  s.dropped = j.at("dropped").get<std::map<std::string, int64_t>>();
  s.kept_hours = j.at("kept_hours").get<double>();
  s.frames_root = j.at("frames_root").get<std::string>();
  s.caption_client = j.at("caption_client").get<std::string>();
  const json& f = j.at("filters");
  s.filters.min_unique = f.at("min_unique").get<int64_t>();
  s.filters.max_rep_ratio = f.at("max_rep_ratio").get<double>();
  s.filters.min_ttr = f.at("min_ttr").get<double>();
  s.filters.clip_seconds = f.at("clip_seconds").get<int64_t>();
  s.filters.min_tail_seconds = f.at("min_tail_seconds").get<int64_t>();
  return s;
}

json clip_record(const ManifestEntry& e) {
  return json{
      {"record", "clip"},       {"clip_id", e.clip_id},
      {"source_id", e.source_id}, {"start", e.start},
      {"end", e.end},           {"transcript", e.transcript},
      {"caption", e.caption},   {"status", e.status},
      {"reason", e.reason},     {"phase_label", e.phase_label},
      {"split", e.split},
  };
}

ManifestEntry parse_clip(const json& j) {
  ManifestEntry e;
  e.clip_id = j.at("clip_id").get<std::string>();
  e.source_id = j.at("source_id").get<std::string>();
  e.start = j.at("start").get<double>();
  e.end = j.at("end").get<double>();
  e.transcript = j.at("transcript").get<std::string>();
  e.caption = j.at("caption").get<std::string>();
  e.status = j.at("status").get<std::string>();
  e.reason = j.at("reason").get<std::string>();
  e.phase_label = j.at("phase_label").get<std::string>();
  e.split = j.at("split").get<std::string>();
  if (e.status != "kept" && e.status != "dropped") {
    throw Error(ErrorCode::InvalidInput, "bad clip status " + e.status);
  }
  return e;
}

}  // namespace

std::vector<ManifestEntry> Manifest::kept_entries() const {
  std::vector<ManifestEntry> out;
  for (const auto& e : entries) {
    if (e.kept()) out.push_back(e);
  }
  return out;
}

std::vector<ManifestEntry> Manifest::split_entries(const std::string& split) const {
  std::vector<ManifestEntry> out;
  for (const auto& e : entries) {
    if (e.kept() && e.split == split) out.push_back(e);
  }
  return out;
}

void write_manifest(const std::string& path, const Manifest& manifest) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path + " for writing");
  out << stats_record(manifest.stats).dump() << "\n";
  for (const auto& e : manifest.entries) out << clip_record(e).dump() << "\n";
  if (!out) throw Error(ErrorCode::IoError, "short write to " + path);
}

Manifest read_manifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);

  Manifest m;
  std::string line;
  bool saw_stats = false;
  int64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      throw Error(ErrorCode::InvalidInput,
                  path + ":" + std::to_string(lineno) + ": malformed record");
    }
    try {
      const std::string record = j.at("record").get<std::string>();
      if (record == "stats") {
        if (saw_stats) {
          throw Error(ErrorCode::InvalidInput, "duplicate stats record");
        }
        m.stats = parse_stats(j);
        saw_stats = true;
      } else if (record == "clip") {
        if (!saw_stats) {
          throw Error(ErrorCode::InvalidInput,
                      "manifest must start with a stats record");
        }
        m.entries.push_back(parse_clip(j));
      } else {
        throw Error(ErrorCode::InvalidInput, "unknown record type " + record);
      }
    } catch (const json::exception& e) {
      throw Error(ErrorCode::InvalidInput,
                  path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (!saw_stats) {
    throw Error(ErrorCode::InvalidInput, path + " has no stats record");
  }
  return m;
}

}  // namespace vidlang
