// Copyright 2026 The evsnn authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

namespace evsnn {

/// Sign of the intensity change reported by one address-event.
enum class Polarity : std::uint8_t { kOff = 0, kOn = 1 };

/// One address-event: the atomic sensor datum. Timestamps are microseconds
/// and non-decreasing within a stream; ties are allowed.
struct Event {
  std::uint16_t x = 0;  ///< column, 0-based
  std::uint16_t y = 0;  ///< row, 0-based
  std::uint64_t t = 0;  ///< microseconds
  Polarity p = Polarity::kOn;

  friend bool operator==(const Event&, const Event&) = default;
};

/// Sensor pixel array dimensions. Default matches a DVS240.
struct SensorGeometry {
  int width = 240;
  int height = 180;

  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }
  bool contains(int x, int y) const {
    return x >= 0 && x < width && y >= 0 && y < height;
  }
  friend bool operator==(const SensorGeometry&, const SensorGeometry&) = default;
};

/// A parsed stream: geometry from the file header plus its events in
/// timestamp order.
struct EventStream {
  SensorGeometry geometry;
  std::vector<Event> events;
};

}  // namespace evsnn
