// Copyright 2026 The evsnn authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

namespace evsnn {

/// One integration window: events with window_start <= t < window_start + length
/// belong to it (half-open, so zero-overlap schedules partition the stream).
struct Window {
  std::uint64_t start = 0;   ///< microseconds
  std::uint64_t length = 0;  ///< microseconds

  friend bool operator==(const Window&, const Window&) = default;
};

/// The integration-time grid: every (length, overlap) pair is one window
/// family whose stride is length * (1 - overlap).
struct WindowSchedule {
  std::vector<std::uint64_t> lengths_us;  ///< e.g. 10 ms .. 200 ms
  std::vector<double> overlaps;           ///< each in [0, 1)
};

/// Enumerates all windows of all families over [t_min, t_max]: starts at
/// t_min and advances by the family stride while start < t_max. Families are
/// emitted in schedule order (lengths outer, overlaps inner).
///
/// Throws ConfigError if an overlap is outside [0,1), a length is zero, or a
/// stride rounds to zero; ValidationError if t_max < t_min.
std::vector<Window> enumerate_windows(std::uint64_t t_min, std::uint64_t t_max,
                                      const WindowSchedule& schedule);

/// Stride of one family in microseconds: round(length * (1 - overlap)).
/// Same error conditions as enumerate_windows.
std::uint64_t window_stride_us(std::uint64_t length_us, double overlap);

}  // namespace evsnn
