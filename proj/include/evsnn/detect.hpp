// Copyright 2026 The evsnn authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "evsnn/forward.hpp"
#include "evsnn/frame.hpp"
#include "evsnn/network.hpp"

namespace evsnn {

/// Presence decision from the final conv layer.
struct Detection {
  bool present = false;
  /// (map, row, col) of firing final-layer neurons, in rank order.
  std::vector<SpikeRecord> locations;
  std::size_t spike_count = 0;
};

struct LabeledFrame {
  TimestampFrame frame;
  bool uav_present = false;
};

struct ConfusionMatrix {
  std::uint64_t tp = 0;
  std::uint64_t fn = 0;
  std::uint64_t fp = 0;
  std::uint64_t tn = 0;

  std::uint64_t total() const { return tp + fn + fp + tn; }
  double accuracy() const;
};

/// Seeded additive noise: `pixel_fraction` of sensor pixels get one
/// spurious event per frame.
struct NoiseSpec {
  double pixel_fraction = 0.0;
  std::uint64_t seed = 0;
};

/// present iff the final layer fired at least once.
Detection detect(const std::vector<SpikeRecord>& final_layer_spikes);

/// Runs detect over every labeled frame and tallies the confusion matrix.
/// `jobs` frames run concurrently against the shared read-only network;
/// results land in per-frame slots so any jobs value gives identical output.
ConfusionMatrix evaluate(const Network& net, const std::vector<LabeledFrame>& frames,
                         const PentState& pent, int jobs = 1);

/// Populates floor(fraction * pixel_count) distinct currently-empty cells
/// with uniform [0,1) timestamps. The RNG stream derives from
/// (spec.seed, frame_idx) so parallel sweeps reproduce serial ones. Signal
/// cells are never touched; if fewer empty cells remain, all are filled.
TimestampFrame inject_noise(const TimestampFrame& frame, const NoiseSpec& spec,
                            std::uint64_t frame_idx);

/// 10*log10(signal/noise). noise=0 maps to +infinity, signal=0 to
/// -infinity; both zero is an error.
double snr_db(std::uint64_t signal_event_count, std::uint64_t noise_event_count);

struct SweepRow {
  double fraction = 0.0;
  double mean_snr_db = 0.0;
  ConfusionMatrix confusion;
};

/// For each fraction (ascending order required): inject fresh-seeded noise
/// into every frame, evaluate, record mean per-frame SNR and the tallies.
std::vector<SweepRow> noise_sweep(const Network& net,
                                  const std::vector<LabeledFrame>& frames,
                                  const std::vector<double>& fractions,
                                  const PentState& pent, std::uint64_t seed,
                                  int jobs = 1);

/// Sweep rows as CSV with header `fraction,mean_snr_db,tp,fn,fp,tn,accuracy`.
std::string format_sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace evsnn

