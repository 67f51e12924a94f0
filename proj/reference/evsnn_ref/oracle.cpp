// Copyright 2026 The evsnn authors
// SPDX-License-Identifier: Apache-2.0

#include "evsnn_ref/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "evsnn/errors.hpp"

namespace evsnn::ref {

std::vector<SpikeRecord> dense_conv_forward(std::span<const SpikeRecord> input_spikes,
                                            int in_width, int in_height,
                                            const WeightTensor& weights, int stride,
                                            double threshold) {
  const int k = weights.k;
  const int ow = (in_width - k) / stride + 1;
  const int oh = (in_height - k) / stride + 1;

  std::vector<SpikeRecord> output;
  for (int m = 0; m < weights.out_maps; ++m) {
    for (int orow = 0; orow < oh; ++orow) {
      for (int ocol = 0; ocol < ow; ++ocol) {
        double potential = 0.0;
        bool fired = false;
        std::size_t i = 0;
        while (i < input_spikes.size() && !fired) {
          float rank = input_spikes[i].rank;
          for (; i < input_spikes.size() && input_spikes[i].rank == rank; ++i) {
            const SpikeRecord& s = input_spikes[i];
            int r = s.row - orow * stride;
            int c = s.col - ocol * stride;
            if (r < 0 || r >= k || c < 0 || c >= k) continue;
            potential += weights.at(m, s.map, r, c);
          }
          if (potential >= threshold) {
            output.push_back(SpikeRecord{0, m, orow, ocol, rank});
            fired = true;
          }
        }
      }
    }
  }
  std::sort(output.begin(), output.end(), spike_order);
  return output;
}

std::vector<SpikeRecord> window_min_pool(std::span<const SpikeRecord> input_spikes,
                                         int in_width, int in_height,
                                         const LayerConfig& cfg) {
  const int kWin = cfg.filter_size;
  const int ow = in_width / kWin;
  const int oh = in_height / kWin;

  std::vector<SpikeRecord> output;
  for (int m = 0; m < cfg.num_maps; ++m) {
    for (int orow = 0; orow < oh; ++orow) {
      for (int ocol = 0; ocol < ow; ++ocol) {
        std::vector<SpikeRecord> in_window;
        for (const SpikeRecord& s : input_spikes) {
          if (s.map == m && s.row / kWin == orow && s.col / kWin == ocol) {
            in_window.push_back(s);
          }
        }
        if (in_window.size() < static_cast<std::size_t>(cfg.threshold)) continue;
        const SpikeRecord earliest =
            *std::min_element(in_window.begin(), in_window.end(), spike_order);
        output.push_back(SpikeRecord{0, m, orow, ocol, earliest.rank});
      }
    }
  }
  std::sort(output.begin(), output.end(), spike_order);
  return output;
}

namespace {

bool same_spike(const SpikeRecord& a, const SpikeRecord& b) {
  return a.map == b.map && a.row == b.row && a.col == b.col && a.rank == b.rank;
}

bool vetoes(const SpikeRecord& winner, const SpikeRecord& s, int kernel_size) {
  if (winner.map == s.map) return true;
  int cheb = std::max(std::abs(winner.row - s.row), std::abs(winner.col - s.col));
  return cheb < kernel_size;
}

}  // namespace

bool wta_outcome_valid(std::span<const SpikeRecord> candidates, const WtaOutcome& outcome,
                       int kernel_size) {
  // Partition check: winners + suppressed must reproduce the candidates,
  // order preserved within each part and jointly covering the input.
  std::vector<SpikeRecord> merged;
  merged.reserve(candidates.size());
  std::size_t wi = 0;
  std::size_t si = 0;
  for (const SpikeRecord& c : candidates) {
    if (wi < outcome.winners.size() && same_spike(outcome.winners[wi], c)) {
      ++wi;
    } else if (si < outcome.suppressed.size() && same_spike(outcome.suppressed[si], c)) {
      ++si;
    } else {
      return false;
    }
  }
  if (wi != outcome.winners.size() || si != outcome.suppressed.size()) return false;

  for (std::size_t a = 0; a < outcome.winners.size(); ++a) {
    for (std::size_t b = a + 1; b < outcome.winners.size(); ++b) {
      const SpikeRecord& wa = outcome.winners[a];
      const SpikeRecord& wb = outcome.winners[b];
      if (wa.map == wb.map) return false;
      int cheb = std::max(std::abs(wa.row - wb.row), std::abs(wa.col - wb.col));
      if (cheb < kernel_size) return false;
    }
  }

  // Every suppressed spike needs a veto from a winner that precedes it;
  // otherwise the greedy scan would have admitted it.
  for (const SpikeRecord& s : outcome.suppressed) {
    bool vetoed = false;
    for (const SpikeRecord& w : outcome.winners) {
      if (!spike_order(w, s)) continue;
      if (vetoes(w, s, kernel_size)) {
        vetoed = true;
        break;
      }
    }
    if (!vetoed) return false;
  }
  return true;
}

double gabor_value(double theta_deg, int x, int y, double wavelength, double sigma,
                   double aspect) {
  double theta = theta_deg * std::numbers::pi / 180.0;
  double xp = x * std::cos(theta) + y * std::sin(theta);
  double yp = -x * std::sin(theta) + y * std::cos(theta);
  return std::cos(2.0 * std::numbers::pi * xp / wavelength) *
         std::exp(-(xp * xp + aspect * aspect * yp * yp) / (2.0 * sigma * sigma));
}

std::uint64_t pixel_event_count(std::span<const double> intensities, double log_threshold,
                                double eps, int cap) {
  std::uint64_t total = 0;
  double level = std::log(intensities.front() + eps);
  for (std::size_t i = 1; i < intensities.size(); ++i) {
    double d = std::log(intensities[i] + eps) - level;
    int k = static_cast<int>(std::floor(std::abs(d) / log_threshold + 1e-9));
    k = std::min(k, cap);
    total += static_cast<std::uint64_t>(k);
    level += k * log_threshold * (d < 0 ? -1.0 : 1.0);
  }
  return total;
}

std::uint64_t sequence_event_count(std::span<const IntensityFrame> frames,
                                   const SimConfig& cfg) {
  std::uint64_t total = 0;
  const int w = cfg.target_geometry.width;
  const int h = cfg.target_geometry.height;
  std::vector<double> series(frames.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (std::size_t f = 0; f < frames.size(); ++f) {
        series[f] = frames[f].at(x, y);
      }
      total += pixel_event_count(series, cfg.log_threshold, cfg.eps,
                                 cfg.max_events_per_pixel_per_interval);
    }
  }
  return total;
}

bool reference_levels_consistent(std::span<const Event> events,
                                 std::span<const IntensityFrame> frames,
                                 const SimConfig& cfg) {
  const int w = cfg.target_geometry.width;
  const int h = cfg.target_geometry.height;
  std::vector<double> level(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      level[static_cast<std::size_t>(y) * w + x] = std::log(frames.front().at(x, y) + cfg.eps);
    }
  }
  for (const Event& e : events) {
    double step = e.p == Polarity::kOn ? cfg.log_threshold : -cfg.log_threshold;
    level[static_cast<std::size_t>(e.y) * w + e.x] += step;
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double final_log = std::log(frames.back().at(x, y) + cfg.eps);
      double gap = std::abs(level[static_cast<std::size_t>(y) * w + x] - final_log);
      if (gap >= cfg.log_threshold + 1e-9) return false;
    }
  }
  return true;
}

ConfusionMatrix serial_evaluate(const Network& net, std::span<const LabeledFrame> frames,
                                const PentState& pent) {
  ConfusionMatrix cm;
  for (const LabeledFrame& lf : frames) {
    auto layers = forward(lf.frame, net, pent);
    Detection det = detect(layers.back());
    if (lf.uav_present) {
      det.present ? ++cm.tp : ++cm.fn;
    } else {
      det.present ? ++cm.fp : ++cm.tn;
    }
  }
  return cm;
}

}  // namespace evsnn::ref
