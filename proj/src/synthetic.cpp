// Copyright 2026 The evsnn authors
// SPDX-License-Identifier: Apache-2.0

#include "evsnn/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "evsnn/errors.hpp"
#include "evsnn/rng.hpp"

namespace evsnn {

void SyntheticConfig::validate() const {
  if (geometry.width <= 0 || geometry.height <= 0) {
    throw ConfigError("synthetic geometry must be positive");
  }
  if (uav_frames < 0 || distractor_frames < 0 || uav_frames + distractor_frames == 0) {
    throw ConfigError("synthetic corpus needs a positive frame count");
  }
  if (!(body_diameter > 0) || !(rotor_diameter > 0) || !(rotor_offset > 0)) {
    throw ConfigError("synthetic silhouette dimensions must be positive");
  }
  if (!(distractor_min_diameter > 0) ||
      distractor_max_diameter < distractor_min_diameter) {
    throw ConfigError("synthetic distractor diameter range is invalid");
  }
  if (!(line_length > 0) || !(line_thickness > 0)) {
    throw ConfigError("synthetic line dimensions must be positive");
  }
  if (!(pixel_dropout >= 0.0) || pixel_dropout >= 1.0) {
    throw ConfigError("synthetic pixel_dropout must lie in [0, 1)");
  }
  if (window_length_us == 0) throw ConfigError("synthetic window length must be positive");
}

namespace {

constexpr double kPi = std::numbers::pi;

using Mask = std::vector<std::uint8_t>;

void paint_disc(Mask& mask, const SensorGeometry& geom, double cx, double cy, double r) {
  int y0 = std::max(0, static_cast<int>(std::floor(cy - r)));
  int y1 = std::min(geom.height - 1, static_cast<int>(std::ceil(cy + r)));
  int x0 = std::max(0, static_cast<int>(std::floor(cx - r)));
  int x1 = std::min(geom.width - 1, static_cast<int>(std::ceil(cx + r)));
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      double dx = x - cx;
      double dy = y - cy;
      if (dx * dx + dy * dy <= r * r) {
        mask[static_cast<std::size_t>(y) * geom.width + x] = 1;
      }
    }
  }
}

void paint_capsule(Mask& mask, const SensorGeometry& geom, double ax, double ay, double bx,
                   double by, double half_thickness) {
  double pad = half_thickness + 1.0;
  int y0 = std::max(0, static_cast<int>(std::floor(std::min(ay, by) - pad)));
  int y1 = std::min(geom.height - 1, static_cast<int>(std::ceil(std::max(ay, by) + pad)));
  int x0 = std::max(0, static_cast<int>(std::floor(std::min(ax, bx) - pad)));
  int x1 = std::min(geom.width - 1, static_cast<int>(std::ceil(std::max(ax, bx) + pad)));
  double vx = bx - ax;
  double vy = by - ay;
  double len2 = vx * vx + vy * vy;
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      double px = x - ax;
      double py = y - ay;
      double s = len2 > 0 ? std::clamp((px * vx + py * vy) / len2, 0.0, 1.0) : 0.0;
      double dx = px - s * vx;
      double dy = py - s * vy;
      if (dx * dx + dy * dy <= half_thickness * half_thickness) {
        mask[static_cast<std::size_t>(y) * geom.width + x] = 1;
      }
    }
  }
}

// Angles whose mod-180 direction parallels a UAV arm are reserved for the
// UAV class: a bare line along the 45/135 degree diagonals is
// indistinguishable from an arm signature, so distractor orientations keep
// clear of those sectors.
double sample_clear_angle(std::mt19937_64& rng) {
  struct Sector {
    double lo, hi;
  };
  constexpr Sector sectors[] = {{0.0, 35.0}, {59.0, 125.0}, {149.0, 180.0}};
  double total = 0.0;
  for (const Sector& s : sectors) total += s.hi - s.lo;
  double u = uniform01(rng) * total;
  for (const Sector& s : sectors) {
    double span = s.hi - s.lo;
    if (u < span) return (s.lo + u) * kPi / 180.0;
    u -= span;
  }
  return 0.0;
}

struct ObjectPaint {
  Mask mask;
  double cx = 0.0;
  double cy = 0.0;
  double radius = 1.0;  // for the motion-time gradient
};

ObjectPaint paint_uav(const SyntheticConfig& cfg, std::mt19937_64& rng) {
  const SensorGeometry& geom = cfg.geometry;
  double arm = cfg.rotor_offset / std::numbers::sqrt2;
  double span = 2.0 * arm + cfg.rotor_diameter;
  double margin = span / 2.0 + 4.0;

  ObjectPaint obj;
  obj.mask.assign(geom.pixel_count(), 0);
  obj.cx = margin + uniform01(rng) * (geom.width - 1 - 2.0 * margin);
  obj.cy = margin + uniform01(rng) * (geom.height - 1 - 2.0 * margin);
  obj.radius = span / 2.0;
  double rot = (uniform01(rng) - 0.5) * 0.16;  // small attitude jitter

  paint_disc(obj.mask, geom, obj.cx, obj.cy, cfg.body_diameter / 2.0);
  for (int q = 0; q < 4; ++q) {
    double angle = kPi / 4.0 + q * kPi / 2.0 + rot;
    double rx = obj.cx + cfg.rotor_offset * std::cos(angle);
    double ry = obj.cy + cfg.rotor_offset * std::sin(angle);
    paint_disc(obj.mask, geom, rx, ry, cfg.rotor_diameter / 2.0);
  }
  return obj;
}

ObjectPaint paint_disc_distractor(const SyntheticConfig& cfg, std::mt19937_64& rng) {
  const SensorGeometry& geom = cfg.geometry;
  double d = cfg.distractor_min_diameter +
             uniform01(rng) * (cfg.distractor_max_diameter - cfg.distractor_min_diameter);
  double margin = d / 2.0 + 4.0;

  ObjectPaint obj;
  obj.mask.assign(geom.pixel_count(), 0);
  obj.cx = margin + uniform01(rng) * (geom.width - 1 - 2.0 * margin);
  obj.cy = margin + uniform01(rng) * (geom.height - 1 - 2.0 * margin);
  obj.radius = d / 2.0;
  paint_disc(obj.mask, geom, obj.cx, obj.cy, d / 2.0);
  return obj;
}

ObjectPaint paint_line_distractor(const SyntheticConfig& cfg, std::mt19937_64& rng) {
  const SensorGeometry& geom = cfg.geometry;
  double margin = cfg.line_length / 2.0 + 4.0;

  ObjectPaint obj;
  obj.mask.assign(geom.pixel_count(), 0);
  obj.cx = margin + uniform01(rng) * (geom.width - 1 - 2.0 * margin);
  obj.cy = margin + uniform01(rng) * (geom.height - 1 - 2.0 * margin);
  obj.radius = cfg.line_length / 2.0;
  double angle = sample_clear_angle(rng);
  double hx = std::cos(angle) * cfg.line_length / 2.0;
  double hy = std::sin(angle) * cfg.line_length / 2.0;
  paint_capsule(obj.mask, geom, obj.cx - hx, obj.cy - hy, obj.cx + hx, obj.cy + hy,
                cfg.line_thickness / 2.0);
  return obj;
}

ObjectPaint paint_flapper(const SyntheticConfig& cfg, std::mt19937_64& rng) {
  const SensorGeometry& geom = cfg.geometry;
  double wing = cfg.line_length * 0.38;
  double margin = wing + 4.0;

  ObjectPaint obj;
  obj.mask.assign(geom.pixel_count(), 0);
  obj.cx = margin + uniform01(rng) * (geom.width - 1 - 2.0 * margin);
  obj.cy = margin + uniform01(rng) * (geom.height - 1 - 2.0 * margin);
  obj.radius = wing;

  // Base heading near horizontal or vertical; wings beat around it. The
  // sector bounds keep both wings off the diagonal arm signature.
  double base = uniform01(rng) < 0.5 ? (uniform01(rng) - 0.5) * (12.0 * kPi / 180.0)
                                     : kPi / 2.0 + (uniform01(rng) - 0.5) * (10.0 * kPi / 180.0);
  double flap = (12.0 + 12.0 * uniform01(rng)) * kPi / 180.0;
  paint_disc(obj.mask, geom, obj.cx, obj.cy, 3.0);
  for (int side = -1; side <= 1; side += 2) {
    double a = base + side * flap;
    double tipx = obj.cx + side * wing * std::cos(a);
    double tipy = obj.cy + side * wing * std::sin(a);
    paint_capsule(obj.mask, geom, obj.cx, obj.cy, tipx, tipy, 1.0);
  }
  return obj;
}

}  // namespace

std::vector<LabeledFrame> generate_synthetic_corpus(const SyntheticConfig& cfg) {
  cfg.validate();
  const int total = cfg.uav_frames + cfg.distractor_frames;
  std::vector<LabeledFrame> corpus;
  corpus.reserve(static_cast<std::size_t>(total));

  int uav_left = cfg.uav_frames;
  int dis_left = cfg.distractor_frames;
  int dis_emitted = 0;
  for (int i = 0; i < total; ++i) {
    bool uav = uav_left > 0 && (dis_left == 0 || i % 2 == 0);
    auto rng = make_engine(cfg.seed, static_cast<std::uint64_t>(i));

    ObjectPaint obj;
    if (uav) {
      obj = paint_uav(cfg, rng);
      --uav_left;
    } else {
      switch (dis_emitted % 3) {
        case 0: obj = paint_disc_distractor(cfg, rng); break;
        case 1: obj = paint_line_distractor(cfg, rng); break;
        default: obj = paint_flapper(cfg, rng); break;
      }
      ++dis_emitted;
      --dis_left;
    }

    // Event times ramp along the motion direction (leading edge first) with
    // per-pixel jitter; dropout models sensor sparseness.
    double heading = uniform01(rng) * 2.0 * kPi;
    double hx = std::cos(heading);
    double hy = std::sin(heading);

    LabeledFrame lf;
    lf.uav_present = uav;
    lf.frame = TimestampFrame(cfg.geometry, 0, cfg.window_length_us);
    for (int y = 0; y < cfg.geometry.height; ++y) {
      for (int x = 0; x < cfg.geometry.width; ++x) {
        if (!obj.mask[static_cast<std::size_t>(y) * cfg.geometry.width + x]) continue;
        if (uniform01(rng) < cfg.pixel_dropout) continue;
        double proj =
            0.5 + ((x - obj.cx) * hx + (y - obj.cy) * hy) / (2.0 * obj.radius);
        proj = std::clamp(proj, 0.0, 1.0);
        double t = 0.05 + 0.7 * proj + 0.1 * uniform01(rng);
        lf.frame.set(x, y, static_cast<float>(std::min(t, 0.999)));
      }
    }
    corpus.push_back(std::move(lf));
  }
  return corpus;
}

}  // namespace evsnn
