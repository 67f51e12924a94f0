// Copyright 2026 The evsnn authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "evsnn/event.hpp"
#include "evsnn/window.hpp"

namespace evsnn {

/// A timestamp-embedded frame: each populated cell holds the normalized
/// arrival time (t - window_start) / window_length of the EARLIEST event
/// that hit the pixel inside the window; polarity is collapsed into the
/// single channel. Populated values lie in [0, 1).
class TimestampFrame {
 public:
  static constexpr float kAbsent = -1.0f;

  TimestampFrame() = default;
  TimestampFrame(SensorGeometry geometry, std::uint64_t window_start,
                 std::uint64_t window_length)
      : geometry_(geometry),
        window_start_(window_start),
        window_length_(window_length),
        cells_(geometry.pixel_count(), kAbsent) {}

  const SensorGeometry& geometry() const { return geometry_; }
  std::uint64_t window_start() const { return window_start_; }
  std::uint64_t window_length() const { return window_length_; }

  bool has(int x, int y) const { return cells_[index(x, y)] >= 0.0f; }
  float at(int x, int y) const { return cells_[index(x, y)]; }

  /// Writes a cell only if still empty, preserving the earliest-wins policy
  /// when events are applied in timestamp order.
  void set_if_empty(int x, int y, float value) {
    float& cell = cells_[index(x, y)];
    if (cell < 0.0f) cell = value;
  }
  void set(int x, int y, float value) { cells_[index(x, y)] = value; }

  std::size_t populated_count() const;
  std::span<const float> cells() const { return cells_; }

  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * geometry_.width + x;
  }

  friend bool operator==(const TimestampFrame&, const TimestampFrame&) = default;

 private:
  SensorGeometry geometry_;
  std::uint64_t window_start_ = 0;
  std::uint64_t window_length_ = 0;
  std::vector<float> cells_;
};

/// Integrates the events falling in [window_start, window_start + window_length)
/// into a frame. Events must be timestamp-ordered; the earliest event per
/// pixel wins. Throws ConfigError if window_length is zero.
TimestampFrame integrate_frame(std::span<const Event> events, SensorGeometry geometry,
                               std::uint64_t window_start, std::uint64_t window_length);

/// Populated cells divided by total pixels.
double active_pixel_fraction(const TimestampFrame& frame);

/// Debug dump: binary PGM where absent = 0 and populated cells map to
/// 1 + round(254 * value).
void write_frame_pgm(const TimestampFrame& frame, const std::string& path);

}  // namespace evsnn
