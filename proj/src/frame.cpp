// Copyright 2026 The evsnn authors
// SPDX-License-Identifier: Apache-2.0

#include "evsnn/frame.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "evsnn/errors.hpp"

namespace evsnn {

std::size_t TimestampFrame::populated_count() const {
  return static_cast<std::size_t>(
      std::count_if(cells_.begin(), cells_.end(), [](float v) { return v >= 0.0f; }));
}

TimestampFrame integrate_frame(std::span<const Event> events, SensorGeometry geometry,
                               std::uint64_t window_start, std::uint64_t window_length) {
  if (geometry.width <= 0 || geometry.height <= 0) {
    throw ValidationError("frame geometry must be positive");
  }
  if (window_length == 0) throw ConfigError("integration window length must be positive");

  TimestampFrame frame(geometry, window_start, window_length);
  const std::uint64_t window_end = window_start + window_length;
  for (const Event& e : events) {
    if (e.t < window_start) continue;
    if (e.t >= window_end) break;  // events arrive timestamp-ordered
    if (!geometry.contains(e.x, e.y)) {
      throw ValidationError("event at (" + std::to_string(e.x) + "," + std::to_string(e.y) +
                            ") outside sensor geometry");
    }
    float normalized = static_cast<float>(static_cast<double>(e.t - window_start) /
                                          static_cast<double>(window_length));
    frame.set_if_empty(e.x, e.y, normalized);
  }
  return frame;
}

double active_pixel_fraction(const TimestampFrame& frame) {
  return static_cast<double>(frame.populated_count()) /
         static_cast<double>(frame.geometry().pixel_count());
}

void write_frame_pgm(const TimestampFrame& frame, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "P5\n" << frame.geometry().width << " " << frame.geometry().height << "\n255\n";
  for (float v : frame.cells()) {
    int gray = v < 0.0f ? 0 : 1 + static_cast<int>(std::lround(254.0 * v));
    out.put(static_cast<char>(gray));
  }
  if (!out) throw IoError("short write to '" + path + "'");
}

}  // namespace evsnn
