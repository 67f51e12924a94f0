// Copyright 2026 The evsnn authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "evsnn/event.hpp"
#include "evsnn/image.hpp"

namespace evsnn {

/// DVS emulation parameters.
struct SimConfig {
  double log_threshold = 0.3;  ///< contrast threshold C on the log-intensity scale
  double eps = 1e-3;           ///< regularizer added before taking logs
  SensorGeometry target_geometry{};
  int max_events_per_pixel_per_interval = 10;
  double edge_keep_fraction = 1.0;  ///< (0,1]; 1 disables sparsification

  void validate() const;
};

/// Emulates a DVS sensor over a frame sequence. Each pixel tracks a
/// reference log-intensity level, initialized from the first frame. For each
/// consecutive pair, d = log(I_next + eps) - ref; k = min(floor(|d|/C), cap)
/// events of polarity sign(d) are emitted with timestamps linearly spaced in
/// (t1, t2], and the reference advances by k*C*sign(d). Output is globally
/// sorted by timestamp (stable, so per-pixel order survives ties).
/// Frames must share the target geometry; callers downsample first.
std::vector<Event> simulate_events(std::span<const IntensityFrame> frames,
                                   const SimConfig& cfg);

/// Keeps an event iff the Sobel gradient magnitude of its source frame (the
/// later frame of the interval that produced it) at (x,y) is >= that frame's
/// edge_keep_fraction quantile threshold. Ties at the threshold are kept, so
/// a flat frame passes everything through. Order is preserved.
std::vector<Event> sparsify_edges(std::span<const Event> events,
                                  std::span<const IntensityFrame> frames,
                                  const SimConfig& cfg);

/// One manifest row: a frame image and its capture time.
struct ManifestEntry {
  std::string filename;
  std::uint64_t t_us = 0;
};

/// Parses `frames.txt` lines of the form `<filename> <t_us>`. Blank lines
/// and `#` comments are skipped. Timestamps must be strictly increasing.
std::vector<ManifestEntry> parse_manifest(const std::string& text);

/// Loads every manifest frame from `dir`, stamps timestamps, converts color
/// to luma, and downsamples to cfg.target_geometry.
std::vector<IntensityFrame> load_frame_sequence(const std::string& dir,
                                                const SimConfig& cfg);

}  // namespace evsnn

