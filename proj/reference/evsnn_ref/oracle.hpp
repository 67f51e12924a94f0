// Copyright 2026 The evsnn authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "evsnn/detect.hpp"
#include "evsnn/forward.hpp"
#include "evsnn/image.hpp"
#include "evsnn/network.hpp"
#include "evsnn/sim.hpp"
#include "evsnn/wta.hpp"

/// Independent serial re-implementations used as test oracles and as the
/// baseline side of the benchmark target. Everything here favors the most
/// literal formulation over speed: per-neuron scans, scalar math, no
/// event-driven bookkeeping. Agreement with the optimized library code is
/// asserted by the test suite, not assumed.
namespace evsnn::ref {

/// Dense rank-ordered conv pass. Every output neuron independently walks
/// the global rank sequence, accumulates the weights of its covering input
/// spikes group by group, and fires at the first rank where the running sum
/// reaches the threshold. Accumulation order per neuron matches the
/// event-driven engine's (rank, row, col, map) order so sums are
/// bit-identical.
std::vector<SpikeRecord> dense_conv_forward(std::span<const SpikeRecord> input_spikes,
                                            int in_width, int in_height,
                                            const WeightTensor& weights, int stride,
                                            double threshold);

/// Per-window pooling oracle: gathers each window's spikes outright and
/// takes the (rank, row, col, map) minimum.
std::vector<SpikeRecord> window_min_pool(std::span<const SpikeRecord> input_spikes,
                                         int in_width, int in_height,
                                         const LayerConfig& cfg);

/// Exhaustive WTA validity check over a proposed outcome:
///   - winners + suppressed is exactly the candidate multiset
///   - no map holds two winners
///   - no two winners lie within Chebyshev distance < kernel_size
///   - every suppressed spike is vetoed by a winner that precedes it in
///     (rank, row, col, map) order
/// Returns true iff all hold.
bool wta_outcome_valid(std::span<const SpikeRecord> candidates, const WtaOutcome& outcome,
                       int kernel_size);

/// Scalar Gabor response at integer offset (x, y) for one orientation,
/// before any normalization.
double gabor_value(double theta_deg, int x, int y, double wavelength, double sigma,
                   double aspect);

/// Per-pixel scalar DVS emulation for one pixel's intensity series; returns
/// the emitted event count. Tracks the same reference-level model with
/// plain scalar math.
std::uint64_t pixel_event_count(std::span<const double> intensities, double log_threshold,
                                double eps, int cap);

/// Total event count over a frame sequence via pixel_event_count.
std::uint64_t sequence_event_count(std::span<const IntensityFrame> frames,
                                   const SimConfig& cfg);

/// Replays events as +/-C steps from the initial log-intensity frame and
/// checks each pixel's reconstructed level lies within one threshold C of
/// the final log intensity. Valid only when the per-interval event cap
/// never binds.
bool reference_levels_consistent(std::span<const Event> events,
                                 std::span<const IntensityFrame> frames,
                                 const SimConfig& cfg);

/// Plain serial evaluation loop: forward + detect per frame, no thread
/// pool. The parallel evaluate() must match it exactly.
ConfusionMatrix serial_evaluate(const Network& net, std::span<const LabeledFrame> frames,
                                const PentState& pent);

}  // namespace evsnn::ref
