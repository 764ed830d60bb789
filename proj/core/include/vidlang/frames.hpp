// Copyright 2026 vidlang authors
// Frame store: clips reference directories of 1 frame/second PPM images, so
// a 45-second clip exposes 45 frames and every sampling count in [1, 45] is
// exactly representable. Also the uniform-midpoint frame sampler.
//
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vidlang/tensor.hpp"

namespace vidlang {

// Uniform midpoint sampling: idx_i = floor((i + 0.5) * total / k) for
// i = 0..k-1. Strictly increasing, in [0, total); k == total is the
// identity. Throws Error(BadConfig) when k < 1 and Error(NotEnoughFrames)
// when k > total.
std::vector<int64_t> sample_frames(int64_t total, int64_t k);

// Canonical frame file name for the given second: "f00007.ppm".
std::string frame_filename(int64_t second);

// Binary PPM (P6, maxval 255). frame is [H, W, 3] with values in [0, 1];
// writing quantizes with round-to-nearest, reading maps bytes back to
// v/255, so write-then-read is a fixed point.
void write_ppm(const std::string& path, const Tensor& frame);
Tensor read_ppm(const std::string& path);

// Loads k midpoint-sampled frames for the clip span [start, end) from
// frames_root/source_id/f%05d.ppm, where the file index is the absolute
// second floor(start) + sampled offset. Returns [k, H, W, 3]; all frames
// must agree on dimensions.
Tensor load_clip_frames(const std::string& frames_root,
                        const std::string& source_id, double start, double end,
                        int64_t k);

}  // namespace vidlang
