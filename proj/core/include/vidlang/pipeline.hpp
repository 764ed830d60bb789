// Copyright 2026 vidlang authors
// Corpus curation pipeline: audio filtering, pluggable transcription,
// 45-second segmentation, linguistic filtering, pluggable caption
// generation, and manifest assembly. Clients are interfaces with
// deterministic stubs so the pipeline is testable offline.
//
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "vidlang/manifest.hpp"

namespace vidlang {

struct SourceVideo {
  std::string video_id;
  double duration = 0.0;  // seconds; must be > 0
  bool has_audio = false;
  std::string frames_dir;       // frame image directory, relative to the root
  std::string transcript_file;  // transcript reference, relative to the root
  std::string phase_label;      // optional whole-video phase annotation
};

struct TranscriptSegment {
  double start = 0.0;
  double end = 0.0;
  std::string text;
};

// Invariants: segments time-ordered, non-overlapping, within [0, duration].
struct Transcript {
  std::string video_id;
  std::vector<TranscriptSegment> segments;

  std::string full_text() const;
  // Concatenates segments overlapping [start, end), space-joined.
  std::string text_in_span(double start, double end) const;
};

// --- pluggable clients ------------------------------------------------------

class AsrClient {
 public:
  virtual ~AsrClient() = default;
  virtual Transcript transcribe(const SourceVideo& video) = 0;
  virtual std::string name() const = 0;
};

class CaptionClient {
 public:
  virtual ~CaptionClient() = default;
  // prompt and transcript travel separately so adapters can frame them as
  // their transport requires; the payload convention is prompt + "\n\n" +
  // transcript.
  virtual std::string generate(const std::string& prompt,
                               const std::string& transcript) = 0;
  virtual std::string name() const = 0;
};

// Deterministic stub: reads the transcript file referenced by the source
// (JSON: {"video_id", "segments": [{"start", "end", "text"}]}), validating
// the Transcript invariants.
class FileAsrClient : public AsrClient {
 public:
  explicit FileAsrClient(std::string input_root) : root_(std::move(input_root)) {}
  Transcript transcribe(const SourceVideo& video) override;
  std::string name() const override { return "stub-asr"; }

 private:
  std::string root_;
};

// Deterministic stub: caption = "Surgeon " + first two sentences of the
// transcript.
class StubCaptionClient : public CaptionClient {
 public:
  std::string generate(const std::string& prompt,
                       const std::string& transcript) override;
  std::string name() const override { return "stub"; }
};

// HTTP adapter: POSTs prompt + "\n\n" + transcript as a text/plain body and
// returns the response body; retries once after a failure, then errors.
class HttpCaptionClient : public CaptionClient {
 public:
  HttpCaptionClient(std::string host, int port, std::string path = "/caption",
                    int timeout_seconds = 10);
  std::string generate(const std::string& prompt,
                       const std::string& transcript) override;
  std::string name() const override;

 private:
  std::string host_;
  int port_;
  std::string path_;
  int timeout_seconds_;
};

// --- pipeline stages --------------------------------------------------------

// The caption-generation instruction sent (verbatim) ahead of every
// transcript. Shipped editable at assets/caption_prompt.txt; this constant
// is the built-in default and matches that file.
const std::string& caption_prompt();

// Partitions by has_audio. Videos without audio are dropped with reason
// "no_audio" (counted in stats; they produce no clip records).
void filter_audio(const std::vector<SourceVideo>& videos,
                  std::vector<SourceVideo>* kept,
                  std::vector<SourceVideo>* dropped);

struct ClipSpan {
  double start = 0.0;
  double end = 0.0;
  bool short_tail = false;  // tail shorter than min_tail_seconds
};

// Tiles [0, duration) with clip_seconds spans; the final partial span is
// kept iff it is at least min_tail_seconds long, otherwise it is marked as a
// short tail (recorded as dropped downstream). Spans are disjoint, ordered,
// and cover [0, last end).
std::vector<ClipSpan> segment_clips(const SourceVideo& video,
                                    const FilterConfig& cfg);

struct FilterVerdict {
  bool keep = false;
  std::string reason;  // "few_unique" | "repetitive" when dropped
};

// Lowercased, punctuation-stripped whitespace words. Drops:
//   repetitive  — max single-word frequency / total > max_rep_ratio, or
//                 type-token ratio < min_ttr;
//   few_unique  — no words at all, or unique words < min_unique.
FilterVerdict linguistic_filter(const std::string& transcript_text,
                                const FilterConfig& cfg);

// Sends caption_prompt() + transcript to the client and returns the trimmed
// caption. Client failures propagate (the manifest builder records them as
// dropped with reason "caption_failed").
std::string generate_caption(const std::string& transcript_text,
                             CaptionClient& client);

struct PipelineConfig {
  FilterConfig filters;
  std::string frames_root = "frames";  // recorded in manifest stats
};

// Runs the full pipeline over the sources, in order:
// filter_audio -> transcribe -> segment_clips -> linguistic_filter ->
// generate_caption, emitting one record per clip span (kept or dropped) and
// the stats block. Unreadable transcripts mark that video's spans
// dropped(io_error); a failing caption client marks the span
// dropped(caption_failed); neither aborts the batch.
Manifest build_manifest(const std::vector<SourceVideo>& videos, AsrClient& asr,
                        CaptionClient& captioner, const PipelineConfig& cfg);

// Reads sources from a line-delimited JSON file ({"video_id", "duration",
// "has_audio", "frames_dir", "transcript_file", "phase_label"?} per line).
std::vector<SourceVideo> read_sources(const std::string& path);

}  // namespace vidlang
