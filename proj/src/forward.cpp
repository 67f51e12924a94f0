// Copyright 2026 The evsnn authors
// SPDX-License-Identifier: Apache-2.0

#include "evsnn/forward.hpp"

#include <algorithm>
#include <cmath>

#include "evsnn/errors.hpp"
#include "evsnn/wta.hpp"

namespace evsnn {

bool spike_order(const SpikeRecord& a, const SpikeRecord& b) {
  if (a.rank != b.rank) return a.rank < b.rank;
  if (a.row != b.row) return a.row < b.row;
  if (a.col != b.col) return a.col < b.col;
  return a.map < b.map;
}

std::uint64_t PentState::effective_cap(std::uint64_t frame_pixels) const {
  std::uint64_t cap = saturation_cap;
  if (cap == 0) {
    cap = static_cast<std::uint64_t>(
        std::llround(saturation_fraction * static_cast<double>(frame_pixels)));
  }
  if (cap == 0) throw ConfigError("pent saturation cap resolves to zero");
  return cap;
}

double pent_threshold(std::uint64_t input_event_count, std::uint64_t frame_pixels,
                      double base_threshold, const PentState& pent) {
  std::uint64_t cap = pent.effective_cap(frame_pixels);
  if (input_event_count <= cap) return base_threshold;
  double ratio = static_cast<double>(input_event_count) / static_cast<double>(cap);
  return base_threshold * std::pow(ratio, pent.scale_exponent);
}

namespace {

struct ConvState {
  int out_maps;
  int out_width;
  int out_height;
  std::vector<double> potential;
  std::vector<std::uint8_t> frozen;    // crossed this frame (fired or vetoed)
  std::vector<std::uint32_t> touched_epoch;
  std::uint32_t epoch = 0;

  std::size_t cell(int map, int row, int col) const {
    return (static_cast<std::size_t>(map) * out_height + row) * out_width + col;
  }
};

}  // namespace

std::vector<SpikeRecord> conv_forward(const std::vector<SpikeRecord>& input_spikes,
                                      int in_width, int in_height,
                                      const WeightTensor& weights, int stride,
                                      double threshold, bool inhibition,
                                      std::vector<double>* potentials) {
  if (weights.values.empty()) throw StateError("conv layer has no weights");
  if (stride <= 0) throw ValidationError("conv stride must be positive");
  const int k = weights.k;
  const int ow = in_width >= k ? (in_width - k) / stride + 1 : 0;
  const int oh = in_height >= k ? (in_height - k) / stride + 1 : 0;
  if (ow <= 0 || oh <= 0) throw ValidationError("conv input smaller than its kernel");

  ConvState st;
  st.out_maps = weights.out_maps;
  st.out_width = ow;
  st.out_height = oh;
  std::size_t n = static_cast<std::size_t>(st.out_maps) * oh * ow;
  st.potential.assign(n, 0.0);
  st.frozen.assign(n, 0);
  st.touched_epoch.assign(n, 0);

  std::vector<SpikeRecord> output;
  std::vector<SpikeRecord> winners;  // inhibition bookkeeping
  std::vector<std::size_t> touched;

  // Spikes sharing a rank arrive together: the whole group accumulates,
  // then crossings flush in (row, col, map) order. Weights are
  // non-negative, so flushing at group end fires the same set as checking
  // mid-group.
  std::size_t i = 0;
  while (i < input_spikes.size()) {
    float rank = input_spikes[i].rank;
    ++st.epoch;
    touched.clear();
    for (; i < input_spikes.size() && input_spikes[i].rank == rank; ++i) {
      const SpikeRecord& s = input_spikes[i];
      if (s.map < 0 || s.map >= weights.in_maps || s.row < 0 || s.row >= in_height ||
          s.col < 0 || s.col >= in_width) {
        throw ValidationError("input spike outside the layer's input shape");
      }
      // Output windows covering (row, col): orow in
      // [ceil((row-k+1)/stride), floor(row/stride)] intersected with range.
      int r_lo = s.row - k + 1;
      int orow_lo = r_lo > 0 ? (r_lo + stride - 1) / stride : 0;
      int orow_hi = std::min(s.row / stride, oh - 1);
      int c_lo = s.col - k + 1;
      int ocol_lo = c_lo > 0 ? (c_lo + stride - 1) / stride : 0;
      int ocol_hi = std::min(s.col / stride, ow - 1);
      for (int m = 0; m < st.out_maps; ++m) {
        for (int orow = orow_lo; orow <= orow_hi; ++orow) {
          for (int ocol = ocol_lo; ocol <= ocol_hi; ++ocol) {
            std::size_t cell = st.cell(m, orow, ocol);
            if (st.frozen[cell]) continue;
            st.potential[cell] +=
                weights.at(m, s.map, s.row - orow * stride, s.col - ocol * stride);
            if (st.touched_epoch[cell] != st.epoch) {
              st.touched_epoch[cell] = st.epoch;
              touched.push_back(cell);
            }
          }
        }
      }
    }

    // Flush this rank group's crossings.
    std::vector<SpikeRecord> crossings;
    for (std::size_t cell : touched) {
      if (!st.frozen[cell] && st.potential[cell] >= threshold) {
        int m = static_cast<int>(cell / (static_cast<std::size_t>(oh) * ow));
        int rem = static_cast<int>(cell % (static_cast<std::size_t>(oh) * ow));
        crossings.push_back(SpikeRecord{0, m, rem / ow, rem % ow, rank});
      }
    }
    std::sort(crossings.begin(), crossings.end(), spike_order);
    for (const SpikeRecord& c : crossings) {
      std::size_t cell = st.cell(c.map, c.row, c.col);
      st.frozen[cell] = 1;
      if (inhibition) {
        if (wta_admissible(winners, c, k)) {
          winners.push_back(c);
          output.push_back(c);
        }
      } else {
        output.push_back(c);
      }
    }
  }

  if (potentials) *potentials = std::move(st.potential);
  return output;
}

std::vector<SpikeRecord> pool_forward(const std::vector<SpikeRecord>& input_spikes,
                                      int in_width, int in_height,
                                      const LayerConfig& cfg) {
  cfg.validate();
  if (cfg.kind != LayerKind::kPool) throw ValidationError("pool_forward needs a pool layer");
  const int k = cfg.filter_size;
  const int ow = in_width / k;
  const int oh = in_height / k;
  if (ow <= 0 || oh <= 0) throw ValidationError("pool input smaller than its window");

  struct Slot {
    int count = 0;
    SpikeRecord earliest;
  };
  std::vector<Slot> slots(static_cast<std::size_t>(cfg.num_maps) * oh * ow);

  for (const SpikeRecord& s : input_spikes) {
    if (s.map < 0 || s.map >= cfg.num_maps || s.row < 0 || s.row >= in_height ||
        s.col < 0 || s.col >= in_width) {
      throw ValidationError("input spike outside the layer's input shape");
    }
    int orow = s.row / k;
    int ocol = s.col / k;
    if (orow >= oh || ocol >= ow) continue;  // partial border window, dropped
    Slot& slot = slots[(static_cast<std::size_t>(s.map) * oh + orow) * ow + ocol];
    if (slot.count == 0 || spike_order(s, slot.earliest)) slot.earliest = s;
    ++slot.count;
  }

  std::vector<SpikeRecord> output;
  for (int m = 0; m < cfg.num_maps; ++m) {
    for (int orow = 0; orow < oh; ++orow) {
      for (int ocol = 0; ocol < ow; ++ocol) {
        const Slot& slot = slots[(static_cast<std::size_t>(m) * oh + orow) * ow + ocol];
        if (slot.count >= cfg.threshold) {
          output.push_back(SpikeRecord{0, m, orow, ocol, slot.earliest.rank});
        }
      }
    }
  }
  std::sort(output.begin(), output.end(), spike_order);
  return output;
}

std::vector<SpikeRecord> frame_spikes(const TimestampFrame& frame) {
  std::vector<SpikeRecord> spikes;
  const SensorGeometry geom = frame.geometry();
  for (int y = 0; y < geom.height; ++y) {
    for (int x = 0; x < geom.width; ++x) {
      float v = frame.at(x, y);
      if (v != TimestampFrame::kAbsent) {
        spikes.push_back(SpikeRecord{0, 0, y, x, v});
      }
    }
  }
  std::stable_sort(spikes.begin(), spikes.end(),
                   [](const SpikeRecord& a, const SpikeRecord& b) { return a.rank < b.rank; });
  return spikes;
}

std::vector<std::vector<SpikeRecord>> forward(const TimestampFrame& frame,
                                              const Network& net, const PentState& pent) {
  if (net.layers.empty()) throw StateError("network has no layers");
  if (net.layers.back().out_width <= 0) {
    throw StateError("network geometry is unbound; call bind_geometry first");
  }
  const SensorGeometry geom = frame.geometry();
  if (geom.width != net.input_geometry.width || geom.height != net.input_geometry.height) {
    throw ValidationError("frame geometry does not match the network input");
  }

  std::vector<std::vector<SpikeRecord>> per_layer;
  per_layer.reserve(net.layers.size() + 1);
  per_layer.push_back(frame_spikes(frame));

  int w = geom.width;
  int h = geom.height;
  for (std::size_t i = 0; i < net.layers.size(); ++i) {
    const Layer& layer = net.layers[i];
    const std::vector<SpikeRecord>& in = per_layer.back();
    std::vector<SpikeRecord> out;
    if (layer.config.kind == LayerKind::kConv) {
      double theta = layer.config.threshold;
      if (i == 0 && pent.enabled) {
        theta = pent_threshold(per_layer[0].size(),
                               static_cast<std::uint64_t>(geom.pixel_count()), theta, pent);
      }
      out = conv_forward(in, w, h, layer.weights, layer.config.stride, theta,
                         /*inhibition=*/false);
    } else {
      out = pool_forward(in, w, h, layer.config);
    }
    for (SpikeRecord& s : out) s.layer = static_cast<int>(i) + 1;
    w = layer.out_width;
    h = layer.out_height;
    per_layer.push_back(std::move(out));
  }
  return per_layer;
}

}  // namespace evsnn
