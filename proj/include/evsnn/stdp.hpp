// Copyright 2026 The evsnn authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "evsnn/forward.hpp"
#include "evsnn/network.hpp"
#include "evsnn/wta.hpp"

namespace evsnn {

/// Simplified multiplicative STDP. Timing magnitude is ignored; only the
/// fired-at-or-before-the-winner order decides the sign.
struct StdpParams {
  double a_plus = 0.004;
  double a_minus = 0.003;
  double convergence_eps = 0.01;

  void validate() const;
};

/// Per-layer presentation budgets.
struct TrainSchedule {
  std::uint64_t frames_layer1 = 3000;
  std::uint64_t frames_layer2 = 20000;
  std::uint64_t frames_layer3 = 20000;

  std::uint64_t budget_for_conv(int conv_ordinal) const;
};

/// One multiplicative update on the winner's receptive field: afferents in
/// `presyn_fired` (true = spiked at rank <= winner's rank) move up by
/// a_plus*w*(1-w), the rest move down by a_minus*w*(1-w). The mask is
/// indexed (in_map * k + row) * k + col over the winner's receptive field.
void stdp_update(WeightTensor& weights, const SpikeRecord& winner,
                 const std::vector<bool>& presyn_fired, const StdpParams& params);

/// C = mean of w*(1-w) over the tensor; 0 when fully bimodal, 0.25 max.
double convergence_metric(const WeightTensor& weights);

/// One line per presented frame.
struct TrainLogEntry {
  std::uint64_t frame_idx = 0;
  int layer = 0;
  int winners = 0;
  double convergence = 0.0;
};

struct TrainLog {
  std::vector<TrainLogEntry> entries;
  std::uint64_t presentations = 0;
  double final_convergence = 0.0;
  bool converged = false;
};

/// Trains one conv layer in place. For each presented frame: forward pass
/// through the fixed layers below, candidate spikes at `layer_index` with
/// on-line inhibition, WTA arbitration, one stdp_update per winner. Stops
/// at the budget or when C < params.convergence_eps. The frame source is
/// cycled when the budget exceeds the corpus. Strictly sequential; the
/// caller must not mutate the network concurrently.
TrainLog train_layer(Network& net, int layer_index,
                     const std::function<const TimestampFrame&(std::uint64_t)>& frame_at,
                     std::uint64_t corpus_size, const StdpParams& params,
                     std::uint64_t budget, const PentState& pent);

/// Formats a log as `frame_idx,layer,winners,convergence_C` lines.
std::string format_train_log(const TrainLog& log);

}  // namespace evsnn

