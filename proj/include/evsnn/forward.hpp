// Copyright 2026 The evsnn authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "evsnn/frame.hpp"
#include "evsnn/network.hpp"

namespace evsnn {

/// One spike inside a frame's forward pass. `rank` is the normalized input
/// time at which the neuron fired; smaller fires earlier. Within a pass
/// spikes are totally ordered by (rank, row, col, map).
struct SpikeRecord {
  int layer = 0;
  int map = 0;
  int row = 0;
  int col = 0;
  float rank = 0.0f;

  bool operator==(const SpikeRecord&) const = default;
};

/// Sorts by (rank, row, col, map); the deterministic processing order.
bool spike_order(const SpikeRecord& a, const SpikeRecord& b);

/// Pre-emptive neuron thresholding for the first conv layer.
struct PentState {
  bool enabled = true;
  double scale_exponent = 1.0;  ///< gamma; 0 disables scaling
  /// Max tolerated input events per frame. 0 means "derive as
  /// saturation_fraction of the frame's pixel count" at use time.
  std::uint64_t saturation_cap = 0;
  double saturation_fraction = 0.01;

  /// The cap actually used for a frame of `frame_pixels` pixels.
  std::uint64_t effective_cap(std::uint64_t frame_pixels) const;
};

/// theta_eff = theta0 when count <= S, else theta0 * (count/S)^gamma.
double pent_threshold(std::uint64_t input_event_count, std::uint64_t frame_pixels,
                      double base_threshold, const PentState& pent);

/// Conv layer forward pass, event-driven: input spikes accumulate into
/// post-synaptic potentials in rank order; a neuron emits once when its
/// potential first reaches theta_eff and is then frozen for the frame.
/// Output spikes carry the rank of the input that caused the crossing.
/// `inhibition` enforces WTA on-line (training); inference leaves it off.
/// `potentials`, when non-null, receives the end-of-frame potential
/// snapshot (frozen neurons hold their value at firing time), indexed
/// (map * out_height + row) * out_width + col.
std::vector<SpikeRecord> conv_forward(const std::vector<SpikeRecord>& input_spikes,
                                      int in_width, int in_height,
                                      const WeightTensor& weights, int stride,
                                      double threshold, bool inhibition,
                                      std::vector<double>* potentials = nullptr);

/// Pooling: per non-overlapping filter_size window per map, emits the
/// earliest-rank input spike iff the window collected >= threshold spikes.
/// Partial windows at the right/bottom border are dropped.
std::vector<SpikeRecord> pool_forward(const std::vector<SpikeRecord>& input_spikes,
                                      int in_width, int in_height,
                                      const LayerConfig& cfg);

/// Converts a frame's populated cells into rank-ordered layer-0 spikes
/// (map 0, rank = the stored normalized timestamp).
std::vector<SpikeRecord> frame_spikes(const TimestampFrame& frame);

/// Full inference pass: layer0 spikes -> conv/pool chain. PENT, when
/// enabled, scales the first conv threshold from the frame's populated
/// count before propagation. Registered spike outputs for every layer are
/// returned, index 0 being the input spikes.
std::vector<std::vector<SpikeRecord>> forward(const TimestampFrame& frame,
                                              const Network& net, const PentState& pent);

}  // namespace evsnn

