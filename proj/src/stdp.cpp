// Copyright 2026 The evsnn authors
// SPDX-License-Identifier: Apache-2.0

#include "evsnn/stdp.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "evsnn/errors.hpp"

namespace evsnn {

void StdpParams::validate() const {
  if (!(a_plus > 0.0) || a_plus >= 1.0) throw ConfigError("stdp a_plus must lie in (0,1)");
  if (!(a_minus > 0.0) || a_minus >= 1.0) {
    throw ConfigError("stdp a_minus must lie in (0,1)");
  }
  if (!(convergence_eps >= 0.0)) throw ConfigError("stdp convergence_eps must be >= 0");
}

std::uint64_t TrainSchedule::budget_for_conv(int conv_ordinal) const {
  if (conv_ordinal <= 1) return frames_layer1;
  if (conv_ordinal == 2) return frames_layer2;
  return frames_layer3;
}

void stdp_update(WeightTensor& weights, const SpikeRecord& winner,
                 const std::vector<bool>& presyn_fired, const StdpParams& params) {
  params.validate();
  const int k = weights.k;
  const std::size_t field = static_cast<std::size_t>(weights.in_maps) * k * k;
  if (presyn_fired.size() != field) {
    throw ValidationError("presynaptic mask size does not match the receptive field");
  }
  if (winner.map < 0 || winner.map >= weights.out_maps) {
    throw ValidationError("winner map out of range");
  }
  // w +- a*w*(1-w) stays inside [0,1]: both endpoints are fixed points and
  // the step never overshoots for a < 1.
  for (int in = 0; in < weights.in_maps; ++in) {
    for (int r = 0; r < k; ++r) {
      for (int c = 0; c < k; ++c) {
        std::size_t mi = (static_cast<std::size_t>(in) * k + r) * k + c;
        float& slot = weights.at(winner.map, in, r, c);
        double w = slot;
        double delta = (presyn_fired[mi] ? params.a_plus : -params.a_minus) * w * (1.0 - w);
        slot = static_cast<float>(w + delta);
      }
    }
  }
}

double convergence_metric(const WeightTensor& weights) {
  if (weights.values.empty()) return 0.0;
  double sum = 0.0;
  for (float w : weights.values) sum += static_cast<double>(w) * (1.0 - w);
  return sum / static_cast<double>(weights.values.size());
}

TrainLog train_layer(Network& net, int layer_index,
                     const std::function<const TimestampFrame&(std::uint64_t)>& frame_at,
                     std::uint64_t corpus_size, const StdpParams& params,
                     std::uint64_t budget, const PentState& pent) {
  params.validate();
  if (layer_index < 0 || static_cast<std::size_t>(layer_index) >= net.layers.size()) {
    throw ValidationError("train layer index out of range");
  }
  Layer& trained = net.layers[static_cast<std::size_t>(layer_index)];
  if (trained.config.kind != LayerKind::kConv) {
    throw ValidationError("only conv layers are trainable");
  }
  if (trained.weights.values.empty()) throw StateError("trained layer has no weights");
  if (corpus_size == 0 && budget > 0) throw ValidationError("empty frame source");

  TrainLog log;
  log.final_convergence = convergence_metric(trained.weights);
  log.converged = log.final_convergence < params.convergence_eps;

  for (std::uint64_t p = 0; p < budget && !log.converged; ++p) {
    const TimestampFrame& frame = frame_at(p % corpus_size);

    // Inference-mode pass below the trained layer; the trained layer's own
    // candidates come from a plain thresholded pass, then WTA arbitration.
    std::vector<SpikeRecord> spikes = frame_spikes(frame);
    int w = frame.geometry().width;
    int h = frame.geometry().height;
    for (int i = 0; i < layer_index; ++i) {
      const Layer& layer = net.layers[static_cast<std::size_t>(i)];
      if (layer.config.kind == LayerKind::kConv) {
        double theta = layer.config.threshold;
        if (i == 0 && pent.enabled) {
          theta = pent_threshold(spikes.size(),
                                 static_cast<std::uint64_t>(frame.geometry().pixel_count()),
                                 theta, pent);
        }
        spikes = conv_forward(spikes, w, h, layer.weights, layer.config.stride, theta,
                              /*inhibition=*/false);
      } else {
        spikes = pool_forward(spikes, w, h, layer.config);
      }
      w = layer.out_width;
      h = layer.out_height;
    }

    // Rank lookup grid for the trained layer's afferents.
    const int in_maps = trained.weights.in_maps;
    constexpr float kNoSpike = std::numeric_limits<float>::infinity();
    std::vector<float> rank_at(static_cast<std::size_t>(in_maps) * w * h, kNoSpike);
    for (const SpikeRecord& s : spikes) {
      rank_at[(static_cast<std::size_t>(s.map) * h + s.row) * w + s.col] = s.rank;
    }

    double theta = trained.config.threshold;
    if (layer_index == 0 && pent.enabled) {
      theta = pent_threshold(spikes.size(),
                             static_cast<std::uint64_t>(frame.geometry().pixel_count()),
                             theta, pent);
    }
    std::vector<SpikeRecord> candidates =
        conv_forward(spikes, w, h, trained.weights, trained.config.stride, theta,
                     /*inhibition=*/false);
    WtaOutcome outcome =
        wta_select(candidates, trained.config.filter_size, trained.config.num_maps);

    const int k = trained.config.filter_size;
    const int stride = trained.config.stride;
    std::vector<bool> mask(static_cast<std::size_t>(in_maps) * k * k);
    for (const SpikeRecord& winner : outcome.winners) {
      for (int in = 0; in < in_maps; ++in) {
        for (int r = 0; r < k; ++r) {
          for (int c = 0; c < k; ++c) {
            float rank = rank_at[(static_cast<std::size_t>(in) * h + winner.row * stride + r) *
                                     w +
                                 winner.col * stride + c];
            mask[(static_cast<std::size_t>(in) * k + r) * k + c] = rank <= winner.rank;
          }
        }
      }
      stdp_update(trained.weights, winner, mask, params);
    }

    double convergence = convergence_metric(trained.weights);
    log.entries.push_back(TrainLogEntry{p, layer_index, static_cast<int>(outcome.winners.size()),
                                        convergence});
    log.presentations = p + 1;
    log.final_convergence = convergence;
    log.converged = convergence < params.convergence_eps;
  }
  return log;
}

std::string format_train_log(const TrainLog& log) {
  std::string out;
  char buf[64];
  for (const TrainLogEntry& e : log.entries) {
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, e.convergence);
    out += std::to_string(e.frame_idx) + "," + std::to_string(e.layer) + "," +
           std::to_string(e.winners) + "," + std::string(buf, ptr) + "\n";
  }
  return out;
}

}  // namespace evsnn
