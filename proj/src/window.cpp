// Copyright 2026 The evsnn authors
// SPDX-License-Identifier: Apache-2.0

#include "evsnn/window.hpp"

#include <cmath>

#include "evsnn/errors.hpp"

namespace evsnn {

std::uint64_t window_stride_us(std::uint64_t length_us, double overlap) {
  if (length_us == 0) throw ConfigError("window length must be positive");
  if (!(overlap >= 0.0) || !(overlap < 1.0)) {
    throw ConfigError("window overlap must lie in [0, 1)");
  }
  auto stride = static_cast<std::uint64_t>(
      std::llround(static_cast<double>(length_us) * (1.0 - overlap)));
  if (stride == 0) {
    throw ConfigError("window stride rounds to zero (length too short for overlap)");
  }
  return stride;
}

std::vector<Window> enumerate_windows(std::uint64_t t_min, std::uint64_t t_max,
                                      const WindowSchedule& schedule) {
  if (t_max < t_min) throw ValidationError("window range end precedes start");
  std::vector<Window> out;
  for (std::uint64_t length : schedule.lengths_us) {
    for (double overlap : schedule.overlaps) {
      std::uint64_t stride = window_stride_us(length, overlap);
      for (std::uint64_t start = t_min; start < t_max; start += stride) {
        out.push_back(Window{start, length});
      }
    }
  }
  return out;
}

}  // namespace evsnn
