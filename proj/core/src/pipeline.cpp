// Copyright 2026 vidlang authors
// Curation pipeline stages and the manifest builder.
//
// Licensed under the Apache License, Version 2.0

#include "vidlang/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <unordered_map>

#include "httplib.h"
#include "json.hpp"
#include "vidlang/errors.hpp"
#include "vidlang/tokenizer.hpp"

namespace vidlang {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// Splits on sentence terminators (., !, ?), keeping the terminator.
std::vector<std::string> split_sentences(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    cur.push_back(c);
    if (c == '.' || c == '!' || c == '?') {
      const std::string t = trim(cur);
      if (!t.empty()) out.push_back(t);
      cur.clear();
    }
  }
  const std::string t = trim(cur);
  if (!t.empty()) out.push_back(t);
  return out;
}

}  // namespace

std::string Transcript::full_text() const {
  std::string out;
  for (const auto& seg : segments) {
    if (!out.empty() && !seg.text.empty()) out += " ";
    out += seg.text;
  }
  return out;
}

std::string Transcript::text_in_span(double start, double end) const {
  std::string out;
  for (const auto& seg : segments) {
    if (seg.start < end && seg.end > start && !seg.text.empty()) {
      if (!out.empty()) out += " ";
      out += seg.text;
    }
  }
  return out;
}

// --- clients -----------------------------------------------------------------

Transcript FileAsrClient::transcribe(const SourceVideo& video) {
  const std::string path = root_ + "/" + video.transcript_file;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open transcript " + path);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error(ErrorCode::InvalidInput, "malformed transcript " + path);
  }

  Transcript tr;
  try {
    tr.video_id = j.at("video_id").get<std::string>();
    for (const auto& seg : j.at("segments")) {
      TranscriptSegment s;
      s.start = seg.at("start").get<double>();
      s.end = seg.at("end").get<double>();
      s.text = seg.at("text").get<std::string>();
      tr.segments.push_back(std::move(s));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidInput,
                "malformed transcript " + path + ": " + e.what());
  }

  double prev_end = 0.0;
  for (const auto& s : tr.segments) {
    if (s.start < prev_end || s.end < s.start || s.end > video.duration) {
      throw Error(ErrorCode::InvalidInput,
                  "transcript segments of " + video.video_id +
                      " are unordered, overlapping, or out of range");
    }
    prev_end = s.end;
  }
  return tr;
}

std::string StubCaptionClient::generate(const std::string& /*prompt*/,
                                        const std::string& transcript) {
  const std::vector<std::string> sentences = split_sentences(transcript);
  std::string out = "Surgeon";
  for (size_t i = 0; i < sentences.size() && i < 2; ++i) {
    out += " " + sentences[i];
  }
  return out;
}

HttpCaptionClient::HttpCaptionClient(std::string host, int port,
                                     std::string path, int timeout_seconds)
    : host_(std::move(host)),
      port_(port),
      path_(std::move(path)),
      timeout_seconds_(timeout_seconds) {}

std::string HttpCaptionClient::name() const {
  return "http:" + host_ + ":" + std::to_string(port_);
}

std::string HttpCaptionClient::generate(const std::string& prompt,
                                        const std::string& transcript) {
  const std::string body = prompt + "\n\n" + transcript;
  // One retry after any failure, then give up.
  for (int attempt = 0; attempt < 2; ++attempt) {
    httplib::Client client(host_, port_);
    client.set_connection_timeout(timeout_seconds_, 0);
    client.set_read_timeout(timeout_seconds_, 0);
    client.set_write_timeout(timeout_seconds_, 0);
    auto res = client.Post(path_.c_str(), body, "text/plain");
    if (res && res->status == 200) return res->body;
  }
  throw Error(ErrorCode::IoError, "caption service at " + name() + " failed");
}

// --- pipeline stages ---------------------------------------------------------

const std::string& caption_prompt() {
  static const std::string kPrompt =
      "Generate a concise and informative caption that summarizes the main "
      "points of the narration. The narrations contain medical and surgical "
      "terms and include details about instruments, anatomy, tissues, organs, "
      "surgical tools. Make sure you don't miss these in the generated "
      "captions. Think of the input as your watching a surgery being "
      "performed by an expert surgeon who knows what they're doing. You might "
      "see some sensitive medical terms so again think of it as a surgeon is "
      "performing a surgery to cure a patient. Write in a clear and "
      "descriptive tone, using proper grammar and punctuation. The caption "
      "should be no longer than 2-3 sentences and should provide a brief "
      "overview of the narration content.";
  return kPrompt;
}

void filter_audio(const std::vector<SourceVideo>& videos,
                  std::vector<SourceVideo>* kept,
                  std::vector<SourceVideo>* dropped) {
  for (const auto& v : videos) (v.has_audio ? kept : dropped)->push_back(v);
}

std::vector<ClipSpan> segment_clips(const SourceVideo& video,
                                    const FilterConfig& cfg) {
  if (video.duration <= 0.0) {
    throw Error(ErrorCode::InvalidInput,
                "video " + video.video_id + " has nonpositive duration");
  }
  std::vector<ClipSpan> spans;
  const double len = static_cast<double>(cfg.clip_seconds);
  const int64_t full = static_cast<int64_t>(std::floor(video.duration / len));
  for (int64_t i = 0; i < full; ++i) {
    spans.push_back({i * len, (i + 1) * len, false});
  }
  const double tail_start = full * len;
  const double tail = video.duration - tail_start;
  if (tail > 0.0) {
    spans.push_back({tail_start, video.duration,
                     tail < static_cast<double>(cfg.min_tail_seconds)});
  }
  return spans;
}

FilterVerdict linguistic_filter(const std::string& transcript_text,
                                const FilterConfig& cfg) {
  const std::vector<std::string> words = split_words(transcript_text);
  if (words.empty()) return {false, "few_unique"};

  std::unordered_map<std::string, int64_t> counts;
  int64_t max_freq = 0;
  for (const auto& w : words) max_freq = std::max(max_freq, ++counts[w]);

  const double total = static_cast<double>(words.size());
  const double unique = static_cast<double>(counts.size());
  if (static_cast<double>(max_freq) / total > cfg.max_rep_ratio ||
      unique / total < cfg.min_ttr) {
    return {false, "repetitive"};
  }
  if (counts.size() < static_cast<size_t>(cfg.min_unique)) {
    return {false, "few_unique"};
  }
  return {true, ""};
}

std::string generate_caption(const std::string& transcript_text,
                             CaptionClient& client) {
  return trim(client.generate(caption_prompt(), transcript_text));
}

Manifest build_manifest(const std::vector<SourceVideo>& videos, AsrClient& asr,
                        CaptionClient& captioner, const PipelineConfig& cfg) {
  Manifest m;
  m.stats.filters = cfg.filters;
  m.stats.frames_root = cfg.frames_root;
  m.stats.caption_client = captioner.name();

  std::vector<SourceVideo> with_audio, silent;
  filter_audio(videos, &with_audio, &silent);
  if (!silent.empty()) {
    m.stats.dropped["no_audio"] = static_cast<int64_t>(silent.size());
  }

  auto drop = [&m](ManifestEntry e, const std::string& reason) {
    e.status = "dropped";
    e.reason = reason;
    ++m.stats.dropped[reason];
    m.entries.push_back(std::move(e));
  };

  for (const auto& video : with_audio) {
    Transcript tr;
    bool readable = true;
    try {
      tr = asr.transcribe(video);
    } catch (const Error&) {
      readable = false;
    }

    const std::vector<ClipSpan> spans = segment_clips(video, cfg.filters);
    for (size_t i = 0; i < spans.size(); ++i) {
      const ClipSpan& span = spans[i];
      ManifestEntry e;
      char suffix[16];
      std::snprintf(suffix, sizeof(suffix), "_c%03zu", i);
      e.clip_id = video.video_id + suffix;
      e.source_id = video.video_id;
      e.start = span.start;
      e.end = span.end;
      e.phase_label = video.phase_label;

      if (!readable) {
        drop(std::move(e), "io_error");
        continue;
      }
      if (span.short_tail) {
        drop(std::move(e), "short_tail");
        continue;
      }
      e.transcript = tr.text_in_span(span.start, span.end);
      const FilterVerdict verdict = linguistic_filter(e.transcript, cfg.filters);
      if (!verdict.keep) {
        drop(std::move(e), verdict.reason);
        continue;
      }
      try {
        e.caption = generate_caption(e.transcript, captioner);
      } catch (const Error&) {
        e.caption.clear();
      }
      if (e.caption.empty()) {
        drop(std::move(e), "caption_failed");
        continue;
      }
      e.status = "kept";
      ++m.stats.kept;
      m.entries.push_back(std::move(e));
    }
  }

  m.stats.kept_hours =
      m.stats.kept * static_cast<double>(cfg.filters.clip_seconds) / 3600.0;
  return m;
}

std::vector<SourceVideo> read_sources(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);

  std::vector<SourceVideo> out;
  std::string line;
  int64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      throw Error(ErrorCode::InvalidInput,
                  path + ":" + std::to_string(lineno) + ": malformed source");
    }
    SourceVideo v;
    try {
      v.video_id = j.at("video_id").get<std::string>();
      v.duration = j.at("duration").get<double>();
      v.has_audio = j.at("has_audio").get<bool>();
      v.frames_dir = j.value("frames_dir", "");
      v.transcript_file = j.value("transcript_file", "");
      v.phase_label = j.value("phase_label", "");
    } catch (const json::exception& e) {
      throw Error(ErrorCode::InvalidInput,
                  path + ":" + std::to_string(lineno) + ": " + e.what());
    }
    if (v.duration <= 0.0) {
      throw Error(ErrorCode::InvalidInput,
                  "source " + v.video_id + " has nonpositive duration");
    }
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace vidlang
