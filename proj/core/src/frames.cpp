// Copyright 2026 vidlang authors
// PPM frame I/O and midpoint frame sampling.
//
// Licensed under the Apache License, Version 2.0

#include "vidlang/frames.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "vidlang/errors.hpp"

namespace vidlang {

std::vector<int64_t> sample_frames(int64_t total, int64_t k) {
  if (k < 1) throw Error(ErrorCode::BadConfig, "frame count must be >= 1");
  if (k > total) {
    throw Error(ErrorCode::NotEnoughFrames,
                "requested " + std::to_string(k) + " frames from " +
                    std::to_string(total));
  }
  std::vector<int64_t> idx(static_cast<size_t>(k));
  // floor((i + 0.5) * total / k) in exact integer arithmetic.
  for (int64_t i = 0; i < k; ++i) idx[size_t(i)] = (2 * i + 1) * total / (2 * k);
  return idx;
}

std::string frame_filename(int64_t second) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "f%05lld.ppm", static_cast<long long>(second));
  return buf;
}

void write_ppm(const std::string& path, const Tensor& frame) {
  if (frame.ndim() != 3 || frame.dim(2) != 3 || frame.dim(0) < 1 ||
      frame.dim(1) < 1) {
    throw Error(ErrorCode::InvalidInput, "frame must be [H, W, 3]");
  }
  const int64_t h = frame.dim(0), w = frame.dim(1);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path + " for writing");
  out << "P6\n" << w << " " << h << "\n255\n";
  std::string bytes(static_cast<size_t>(h * w * 3), '\0');
  for (int64_t i = 0; i < frame.numel(); ++i) {
    const double q = std::round(std::clamp(frame[i], 0.0, 1.0) * 255.0);
    bytes[size_t(i)] = static_cast<char>(static_cast<unsigned char>(q));
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::IoError, "short write to " + path);
}

namespace {

// Reads the next whitespace-delimited PPM header token, skipping comments.
std::string next_token(std::istream& in) {
  std::string tok;
  int c = in.get();
  while (c != EOF && (std::isspace(c) || c == '#')) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = in.get();
    }
    c = in.get();
  }
  while (c != EOF && !std::isspace(c)) {
    tok.push_back(static_cast<char>(c));
    c = in.get();
  }
  return tok;
}

}  // namespace

Tensor read_ppm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  if (next_token(in) != "P6") {
    throw Error(ErrorCode::InvalidInput, path + " is not a binary PPM");
  }
  int64_t w = 0, h = 0, maxval = 0;
  try {
    w = std::stoll(next_token(in));
    h = std::stoll(next_token(in));
    maxval = std::stoll(next_token(in));
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidInput, "bad PPM header in " + path);
  }
  if (w < 1 || h < 1 || maxval != 255) {
    throw Error(ErrorCode::InvalidInput, "unsupported PPM header in " + path);
  }
  std::string bytes(static_cast<size_t>(h * w * 3), '\0');
  in.read(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (in.gcount() != static_cast<std::streamsize>(bytes.size())) {
    throw Error(ErrorCode::InvalidInput, "truncated PPM payload in " + path);
  }
  Tensor frame({h, w, 3});
  for (int64_t i = 0; i < frame.numel(); ++i) {
    frame[i] = static_cast<unsigned char>(bytes[size_t(i)]) / 255.0;
  }
  return frame;
}

Tensor load_clip_frames(const std::string& frames_root,
                        const std::string& source_id, double start, double end,
                        int64_t k) {
  const int64_t total = static_cast<int64_t>(std::floor(end - start));
  if (total < 1) {
    throw Error(ErrorCode::NotEnoughFrames,
                "clip span [" + std::to_string(start) + ", " +
                    std::to_string(end) + ") holds no whole second");
  }
  const std::vector<int64_t> offsets = sample_frames(total, k);
  const int64_t base = static_cast<int64_t>(std::floor(start));
  const std::string dir = frames_root + "/" + source_id + "/";

  Tensor stacked;
  int64_t h = 0, w = 0;
  for (int64_t i = 0; i < k; ++i) {
    const Tensor frame = read_ppm(dir + frame_filename(base + offsets[size_t(i)]));
    if (i == 0) {
      h = frame.dim(0);
      w = frame.dim(1);
      stacked = Tensor({k, h, w, 3});
    } else if (frame.dim(0) != h || frame.dim(1) != w) {
      throw Error(ErrorCode::InvalidInput,
                  "frame dimensions differ within clip of " + source_id);
    }
    const int64_t stride = h * w * 3;
    for (int64_t j = 0; j < stride; ++j) stacked[i * stride + j] = frame[j];
  }
  return stacked;
}

}  // namespace vidlang
