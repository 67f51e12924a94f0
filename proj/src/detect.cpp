// Copyright 2026 The evsnn authors
// SPDX-License-Identifier: Apache-2.0

#include "evsnn/detect.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "evsnn/errors.hpp"
#include "evsnn/parallel.hpp"
#include "evsnn/rng.hpp"

namespace evsnn {

double ConfusionMatrix::accuracy() const {
  std::uint64_t n = total();
  if (n == 0) throw ValidationError("confusion matrix is empty");
  return static_cast<double>(tp + tn) / static_cast<double>(n);
}

Detection detect(const std::vector<SpikeRecord>& final_layer_spikes) {
  Detection d;
  d.locations = final_layer_spikes;
  d.spike_count = final_layer_spikes.size();
  d.present = d.spike_count >= 1;
  return d;
}

ConfusionMatrix evaluate(const Network& net, const std::vector<LabeledFrame>& frames,
                         const PentState& pent, int jobs) {
  if (frames.empty()) throw ValidationError("evaluation corpus is empty");
  std::vector<std::uint8_t> present(frames.size());
  parallel_for(frames.size(), jobs, [&](std::size_t i) {
    auto layers = forward(frames[i].frame, net, pent);
    present[i] = detect(layers.back()).present ? 1 : 0;
  });

  ConfusionMatrix cm;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (frames[i].uav_present) {
      present[i] ? ++cm.tp : ++cm.fn;
    } else {
      present[i] ? ++cm.fp : ++cm.tn;
    }
  }
  return cm;
}

TimestampFrame inject_noise(const TimestampFrame& frame, const NoiseSpec& spec,
                            std::uint64_t frame_idx) {
  if (!(spec.pixel_fraction >= 0.0) || spec.pixel_fraction > 1.0) {
    throw ValidationError("noise pixel_fraction must lie in [0,1]");
  }
  TimestampFrame out = frame;
  const std::uint64_t pixels = static_cast<std::uint64_t>(frame.geometry().pixel_count());
  std::uint64_t want =
      static_cast<std::uint64_t>(std::floor(spec.pixel_fraction * static_cast<double>(pixels)));
  if (want == 0) return out;

  std::vector<std::uint32_t> empty_cells;
  empty_cells.reserve(pixels - frame.populated_count());
  for (std::uint32_t i = 0; i < pixels; ++i) {
    if (out.cells()[i] == TimestampFrame::kAbsent) empty_cells.push_back(i);
  }
  want = std::min<std::uint64_t>(want, empty_cells.size());

  // Per-frame stream: parallel sweeps reproduce serial ones exactly.
  auto rng = make_engine(spec.seed, frame_idx);
  // Partial Fisher-Yates: the first `want` entries become the chosen cells.
  const int width = frame.geometry().width;
  for (std::uint64_t i = 0; i < want; ++i) {
    std::uint64_t j = i + uniform_below(rng, empty_cells.size() - i);
    std::swap(empty_cells[i], empty_cells[j]);
    float t = static_cast<float>(uniform01(rng));
    out.set(static_cast<int>(empty_cells[i] % width), static_cast<int>(empty_cells[i] / width),
            t);
  }
  return out;
}

double snr_db(std::uint64_t signal_event_count, std::uint64_t noise_event_count) {
  if (signal_event_count == 0 && noise_event_count == 0) {
    throw ValidationError("snr undefined with zero signal and zero noise");
  }
  if (noise_event_count == 0) return std::numeric_limits<double>::infinity();
  if (signal_event_count == 0) return -std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(static_cast<double>(signal_event_count) /
                           static_cast<double>(noise_event_count));
}

std::vector<SweepRow> noise_sweep(const Network& net,
                                  const std::vector<LabeledFrame>& frames,
                                  const std::vector<double>& fractions,
                                  const PentState& pent, std::uint64_t seed, int jobs) {
  if (frames.empty()) throw ValidationError("evaluation corpus is empty");
  for (std::size_t i = 1; i < fractions.size(); ++i) {
    if (fractions[i] <= fractions[i - 1]) {
      throw ValidationError("sweep fractions must be strictly ascending");
    }
  }

  std::vector<SweepRow> rows;
  for (std::size_t fi = 0; fi < fractions.size(); ++fi) {
    NoiseSpec spec;
    spec.pixel_fraction = fractions[fi];
    // Fresh seed stream per fraction so rows are independent draws.
    spec.seed = derive_seed(seed, fi);

    std::vector<std::uint8_t> present(frames.size());
    std::vector<double> snr(frames.size());
    parallel_for(frames.size(), jobs, [&](std::size_t i) {
      const TimestampFrame& clean = frames[i].frame;
      TimestampFrame noisy = inject_noise(clean, spec, i);
      std::uint64_t signal = clean.populated_count();
      std::uint64_t noise = noisy.populated_count() - signal;
      snr[i] = (signal == 0 && noise == 0) ? 0.0 : snr_db(signal, noise);
      auto layers = forward(noisy, net, pent);
      present[i] = detect(layers.back()).present ? 1 : 0;
    });

    SweepRow row;
    row.fraction = fractions[fi];
    double snr_sum = 0.0;
    std::size_t snr_n = 0;
    for (std::size_t i = 0; i < frames.size(); ++i) {
      if (std::isfinite(snr[i])) {
        snr_sum += snr[i];
        ++snr_n;
      }
      if (frames[i].uav_present) {
        present[i] ? ++row.confusion.tp : ++row.confusion.fn;
      } else {
        present[i] ? ++row.confusion.fp : ++row.confusion.tn;
      }
    }
    row.mean_snr_db = snr_n > 0 ? snr_sum / static_cast<double>(snr_n)
                                : std::numeric_limits<double>::infinity();
    rows.push_back(row);
  }
  return rows;
}

std::string format_sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "fraction,mean_snr_db,tp,fn,fp,tn,accuracy\n";
  char buf[64];
  auto num = [&buf](double v) {
    if (std::isinf(v)) return std::string(v > 0 ? "inf" : "-inf");
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
  };
  for (const SweepRow& r : rows) {
    out += num(r.fraction) + "," + num(r.mean_snr_db) + "," + std::to_string(r.confusion.tp) +
           "," + std::to_string(r.confusion.fn) + "," + std::to_string(r.confusion.fp) + "," +
           std::to_string(r.confusion.tn) + "," + num(r.confusion.accuracy()) + "\n";
  }
  return out;
}

}  // namespace evsnn
