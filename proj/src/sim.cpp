// Copyright 2026 The evsnn authors
// SPDX-License-Identifier: Apache-2.0

#include "evsnn/sim.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "evsnn/errors.hpp"
#include "evsnn/parallel.hpp"

namespace evsnn {

void SimConfig::validate() const {
  if (!(log_threshold > 0.0)) throw ConfigError("sim log_threshold must be positive");
  if (!(eps > 0.0)) throw ConfigError("sim eps must be positive");
  if (target_geometry.width <= 0 || target_geometry.height <= 0) {
    throw ConfigError("sim target geometry must be positive");
  }
  if (max_events_per_pixel_per_interval < 1) {
    throw ConfigError("sim per-interval event cap must be at least 1");
  }
  if (!(edge_keep_fraction > 0.0) || edge_keep_fraction > 1.0) {
    throw ConfigError("sim edge_keep_fraction must lie in (0, 1]");
  }
}

namespace {

// floor with a one-ulp-scale pardon so k*C stored in a double and divided
// back by C still counts k crossings.
int threshold_crossings(double magnitude, double threshold, int cap) {
  int k = static_cast<int>(std::floor(magnitude / threshold + 1e-9));
  return std::min(k, cap);
}

void check_sequence(std::span<const IntensityFrame> frames, const SensorGeometry& geom) {
  if (frames.size() < 2) throw ValidationError("simulation needs at least 2 frames");
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (frames[i].width != geom.width || frames[i].height != geom.height) {
      throw ValidationError("frame " + std::to_string(i) + " geometry " +
                            std::to_string(frames[i].width) + "x" +
                            std::to_string(frames[i].height) + " does not match " +
                            std::to_string(geom.width) + "x" + std::to_string(geom.height));
    }
    if (i > 0 && frames[i].t <= frames[i - 1].t) {
      throw ValidationError("frame " + std::to_string(i) + " timestamp does not increase");
    }
  }
}

}  // namespace

std::vector<Event> simulate_events(std::span<const IntensityFrame> frames,
                                   const SimConfig& cfg) {
  cfg.validate();
  const SensorGeometry geom = cfg.target_geometry;
  check_sequence(frames, geom);

  const double C = cfg.log_threshold;
  const int cap = cfg.max_events_per_pixel_per_interval;
  const std::size_t rows = static_cast<std::size_t>(geom.height);

  // One buffer per row; rows are independent because reference levels are
  // per pixel. Buffers concatenate in row order before the final stable
  // sort, so the tie order, (row, col) within an interval, is the same for
  // any worker count.
  std::vector<std::vector<Event>> row_events(rows);
  parallel_for(rows, 0, [&](std::size_t y) {
    std::vector<double> ref(static_cast<std::size_t>(geom.width));
    for (int x = 0; x < geom.width; ++x) {
      ref[x] = std::log(frames[0].at(x, static_cast<int>(y)) + cfg.eps);
    }
    auto& out = row_events[y];
    for (std::size_t i = 1; i < frames.size(); ++i) {
      const std::uint64_t t1 = frames[i - 1].t;
      const std::uint64_t t2 = frames[i].t;
      const std::uint64_t span = t2 - t1;
      for (int x = 0; x < geom.width; ++x) {
        double d = std::log(frames[i].at(x, static_cast<int>(y)) + cfg.eps) - ref[x];
        int k = threshold_crossings(std::abs(d), C, cap);
        if (k == 0) continue;
        double sign = d > 0 ? 1.0 : -1.0;
        Polarity p = d > 0 ? Polarity::kOn : Polarity::kOff;
        for (int j = 1; j <= k; ++j) {
          // ceil spacing keeps every timestamp inside (t1, t2].
          std::uint64_t offset =
              (static_cast<std::uint64_t>(j) * span + static_cast<std::uint64_t>(k) - 1) /
              static_cast<std::uint64_t>(k);
          out.push_back(Event{static_cast<std::uint16_t>(x), static_cast<std::uint16_t>(y),
                              t1 + offset, p});
        }
        ref[x] += k * C * sign;
      }
    }
  });

  std::vector<Event> events;
  std::size_t total = 0;
  for (const auto& r : row_events) total += r.size();
  events.reserve(total);
  for (auto& r : row_events) events.insert(events.end(), r.begin(), r.end());
  std::stable_sort(events.begin(), events.end(),
                   [](const Event& a, const Event& b) { return a.t < b.t; });
  return events;
}

namespace {

// Sobel magnitude with replicated borders.
std::vector<double> gradient_magnitude(const IntensityFrame& f) {
  std::vector<double> mag(f.values.size());
  auto sample = [&](int x, int y) {
    return static_cast<double>(
        f.at(std::clamp(x, 0, f.width - 1), std::clamp(y, 0, f.height - 1)));
  };
  for (int y = 0; y < f.height; ++y) {
    for (int x = 0; x < f.width; ++x) {
      double gx = (sample(x + 1, y - 1) + 2 * sample(x + 1, y) + sample(x + 1, y + 1)) -
                  (sample(x - 1, y - 1) + 2 * sample(x - 1, y) + sample(x - 1, y + 1));
      double gy = (sample(x - 1, y + 1) + 2 * sample(x, y + 1) + sample(x + 1, y + 1)) -
                  (sample(x - 1, y - 1) + 2 * sample(x, y - 1) + sample(x + 1, y - 1));
      mag[static_cast<std::size_t>(y) * f.width + x] = std::sqrt(gx * gx + gy * gy);
    }
  }
  return mag;
}

}  // namespace

std::vector<Event> sparsify_edges(std::span<const Event> events,
                                  std::span<const IntensityFrame> frames,
                                  const SimConfig& cfg) {
  cfg.validate();
  if (cfg.edge_keep_fraction >= 1.0 || events.empty()) {
    return {events.begin(), events.end()};
  }
  if (frames.empty()) throw ValidationError("sparsify_edges needs the source frames");

  // Per-frame masks built on demand: keep (x,y) iff gradient magnitude is at
  // or above the frame's (1 - keep) quantile. Ties at the threshold stay.
  std::vector<char> have_mask(frames.size(), 0);
  std::vector<std::vector<char>> masks(frames.size());
  auto mask_for = [&](std::size_t idx) -> const std::vector<char>& {
    if (!have_mask[idx]) {
      auto mag = gradient_magnitude(frames[idx]);
      std::vector<double> sorted = mag;
      std::sort(sorted.begin(), sorted.end());
      std::size_t cut = static_cast<std::size_t>(
          std::floor((1.0 - cfg.edge_keep_fraction) * static_cast<double>(sorted.size())));
      cut = std::min(cut, sorted.size() - 1);
      double threshold = sorted[cut];
      std::vector<char> mask(mag.size());
      for (std::size_t i = 0; i < mag.size(); ++i) mask[i] = mag[i] >= threshold ? 1 : 0;
      masks[idx] = std::move(mask);
      have_mask[idx] = 1;
    }
    return masks[idx];
  };

  std::vector<Event> kept;
  kept.reserve(events.size());
  std::size_t frame_idx = 0;
  for (const Event& e : events) {
    // Source frame: the later frame of the interval that produced the
    // event, i.e. the first frame timestamp >= t. Events are sorted, so
    // the cursor only moves forward.
    while (frame_idx < frames.size() && frames[frame_idx].t < e.t) ++frame_idx;
    std::size_t idx = std::min(frame_idx, frames.size() - 1);
    const auto& mask = mask_for(idx);
    if (mask[static_cast<std::size_t>(e.y) * frames[idx].width + e.x]) kept.push_back(e);
  }
  return kept;
}

std::vector<ManifestEntry> parse_manifest(const std::string& text) {
  std::vector<ManifestEntry> entries;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    ManifestEntry entry;
    if (!(fields >> entry.filename >> entry.t_us)) {
      throw ParseError("frames.txt line " + std::to_string(line_no) +
                       ": expected '<filename> <t_us>'");
    }
    std::string rest;
    if (fields >> rest) {
      throw ParseError("frames.txt line " + std::to_string(line_no) + ": trailing '" +
                       rest + "'");
    }
    if (!entries.empty() && entry.t_us <= entries.back().t_us) {
      throw ValidationError("frames.txt line " + std::to_string(line_no) +
                            ": timestamps must strictly increase");
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

std::vector<IntensityFrame> load_frame_sequence(const std::string& dir,
                                                const SimConfig& cfg) {
  cfg.validate();
  std::filesystem::path root(dir);
  std::ifstream manifest_in(root / "frames.txt");
  if (!manifest_in) {
    throw ConfigError("missing manifest '" + (root / "frames.txt").string() + "'");
  }
  std::string text((std::istreambuf_iterator<char>(manifest_in)),
                   std::istreambuf_iterator<char>());
  auto entries = parse_manifest(text);
  std::vector<IntensityFrame> frames;
  frames.reserve(entries.size());
  for (const auto& entry : entries) {
    IntensityFrame f = read_intensity_frame((root / entry.filename).string());
    f.t = entry.t_us;
    frames.push_back(downsample(f, cfg.target_geometry));
  }
  return frames;
}

}  // namespace evsnn
