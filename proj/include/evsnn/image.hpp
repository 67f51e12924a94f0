// Copyright 2026 The evsnn authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "evsnn/event.hpp"

namespace evsnn {

/// Grayscale video frame. Values are luminance in [0,1], row-major.
struct IntensityFrame {
  int width = 0;
  int height = 0;
  std::uint64_t t = 0;  ///< capture timestamp, microseconds
  std::vector<float> values;

  float at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
  float& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
};

/// Loads a PGM (P2/P5) or PPM (P3/P6) file. Color input collapses to luma
/// with BT.601 weights (0.299, 0.587, 0.114). Sample values scale to [0,1]
/// by the file's maxval. The timestamp is left 0; callers set it from the
/// manifest.
IntensityFrame read_intensity_frame(const std::string& path);

/// Writes a binary PGM (P5, maxval 255) for debugging.
void write_intensity_pgm(const std::string& path, const IntensityFrame& frame);

/// Box-filter downsample to the target geometry. Source rows and columns are
/// partitioned into contiguous integer boxes (box edges at
/// floor(i*src/target)); each output value is the mean of its box.
IntensityFrame downsample(const IntensityFrame& frame, SensorGeometry target);

}  // namespace evsnn

