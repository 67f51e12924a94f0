// Copyright 2026 The evsnn authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "evsnn/detect.hpp"
#include "evsnn/event.hpp"

namespace evsnn {

/// Seeded generator for the desk-scale labeled corpus: UAV-like rigid
/// multi-rotor silhouettes vs single-cluster distractors.
struct SyntheticConfig {
  SensorGeometry geometry{};
  int uav_frames = 500;
  int distractor_frames = 500;
  std::uint64_t seed = 1;

  /// UAV silhouette: a body disc with four rotor discs at the corners of an
  /// X. Diameters and offset in pixels.
  double body_diameter = 11.0;
  double rotor_diameter = 9.0;
  double rotor_offset = 22.0;

  /// Distractor scale bounds (single disc; line length; flapper span).
  double distractor_min_diameter = 8.0;
  double distractor_max_diameter = 10.0;
  double line_length = 24.0;
  double line_thickness = 1.6;

  /// Fraction of silhouette pixels dropped per frame (sensor sparseness).
  double pixel_dropout = 0.12;

  /// Nominal integration window stamped on generated frames, microseconds.
  std::uint64_t window_length_us = 10000;

  void validate() const;
};

/// Labels: true = UAV present. Frames interleave classes deterministically;
/// per-frame RNG streams derive from (seed, frame index) so any prefix of
/// the corpus is stable under count changes.
std::vector<LabeledFrame> generate_synthetic_corpus(const SyntheticConfig& cfg);

}  // namespace evsnn

