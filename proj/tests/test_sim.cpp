// Copyright 2026 The evsnn authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <vector>

#include "doctest.h"
#include "evsnn/errors.hpp"
#include "evsnn/event_io.hpp"
#include "evsnn/image.hpp"
#include "evsnn/rng.hpp"
#include "evsnn/sim.hpp"
#include "evsnn_ref/oracle.hpp"

using namespace evsnn;

namespace {

SimConfig small_cfg(int width, int height) {
  SimConfig cfg;
  cfg.target_geometry = SensorGeometry{width, height};
  return cfg;
}

IntensityFrame uniform_frame(int width, int height, std::uint64_t t, float value) {
  IntensityFrame f{width, height, t, {}};
  f.values.assign(static_cast<std::size_t>(width) * height, value);
  return f;
}

// Luminance confined to [0.1, 0.9] keeps |d| below cap * C, so counts and
// reference levels are cap-free.
std::vector<IntensityFrame> random_sequence(int width, int height, std::size_t count,
                                            std::uint64_t seed) {
  auto rng = make_engine(seed, 0);
  std::vector<IntensityFrame> frames;
  for (std::size_t i = 0; i < count; ++i) {
    IntensityFrame f{width, height, 10000 * (i + 1), {}};
    f.values.resize(static_cast<std::size_t>(width) * height);
    for (float& v : f.values) v = static_cast<float>(0.1 + 0.8 * uniform01(rng));
    frames.push_back(std::move(f));
  }
  return frames;
}

}  // namespace

TEST_CASE("identical frames emit no events") {
  std::vector<IntensityFrame> frames{uniform_frame(4, 3, 1000, 0.4f),
                                     uniform_frame(4, 3, 2000, 0.4f)};
  CHECK(simulate_events(frames, small_cfg(4, 3)).empty());
}

TEST_CASE("a single contrast step emits floor(|d|/C) events") {
  auto f1 = uniform_frame(4, 3, 0, 0.10f);
  auto f2 = uniform_frame(4, 3, 3000, 0.10f);
  f2.at(2, 1) = 0.30f;
  std::vector<IntensityFrame> frames{f1, f2};
  auto events = simulate_events(frames, small_cfg(4, 3));
  // d = log(0.301) - log(0.101) = 1.0919, so three threshold crossings.
  REQUIRE(events.size() == 3);
  for (std::size_t j = 0; j < events.size(); ++j) {
    CHECK(events[j].x == 2);
    CHECK(events[j].y == 1);
    CHECK(events[j].p == Polarity::kOn);
    CHECK(events[j].t == 1000 * (j + 1));
    CHECK(events[j].t > 0);
    CHECK(events[j].t <= 3000);
  }
}

TEST_CASE("per-interval event count saturates at the cap") {
  auto f1 = uniform_frame(2, 2, 0, 0.0f);
  auto f2 = uniform_frame(2, 2, 1000, 0.0f);
  f2.at(0, 0) = 1.0f;
  std::vector<IntensityFrame> frames{f1, f2};
  // d = log(1.001e0 / 1e-3) = 6.91, 23 crossings, clipped to 10.
  auto events = simulate_events(frames, small_cfg(2, 2));
  CHECK(events.size() == 10);
}

TEST_CASE("an up step then an equal down step balances polarities") {
  std::vector<IntensityFrame> frames{uniform_frame(3, 3, 1000, 0.15f),
                                     uniform_frame(3, 3, 2000, 0.55f),
                                     uniform_frame(3, 3, 3000, 0.15f)};
  auto cfg = small_cfg(3, 3);
  auto events = simulate_events(frames, cfg);
  std::size_t on = 0, off = 0;
  for (const Event& e : events) (e.p == Polarity::kOn ? on : off) += 1;
  CHECK(on > 0);
  CHECK(on == off);
  CHECK(ref::reference_levels_consistent(events, frames, cfg));
}

TEST_CASE("event counts match a per-pixel reference simulation") {
  for (std::uint64_t seed : {21u, 22u, 23u}) {
    CAPTURE(seed);
    auto frames = random_sequence(8, 6, 5, seed);
    auto cfg = small_cfg(8, 6);
    auto events = simulate_events(frames, cfg);
    CHECK(events.size() == ref::sequence_event_count(frames, cfg));
    CHECK(ref::reference_levels_consistent(events, frames, cfg));
  }
}

TEST_CASE("simulation output is deterministic and serializable") {
  auto frames = random_sequence(8, 6, 4, 31);
  auto cfg = small_cfg(8, 6);
  auto a = simulate_events(frames, cfg);
  auto b = simulate_events(frames, cfg);
  CHECK(a == b);

  EventStream stream{cfg.target_geometry, a};
  auto bytes = serialize_event_stream(stream, EventFormat::kBin);
  auto round = parse_event_stream(std::span<const std::byte>(bytes), EventFormat::kBin);
  CHECK(round.events == a);
}

TEST_CASE("raising the contrast threshold never adds events") {
  auto frames = random_sequence(10, 8, 6, 41);
  std::size_t prev = SIZE_MAX;
  for (double C : {0.15, 0.3, 0.45, 0.9}) {
    CAPTURE(C);
    auto cfg = small_cfg(10, 8);
    cfg.log_threshold = C;
    std::size_t count = simulate_events(frames, cfg).size();
    CHECK(count <= prev);
    prev = count;
  }
}

TEST_CASE("polarity equals the sign of the log-intensity change") {
  auto frames = random_sequence(10, 8, 2, 51);
  auto cfg = small_cfg(10, 8);
  for (const Event& e : simulate_events(frames, cfg)) {
    double d = std::log(frames[1].at(e.x, e.y) + cfg.eps) -
               std::log(frames[0].at(e.x, e.y) + cfg.eps);
    CHECK((e.p == Polarity::kOn) == (d > 0));
  }
}

TEST_CASE("event output is globally timestamp ordered") {
  auto frames = random_sequence(12, 9, 5, 61);
  auto events = simulate_events(frames, small_cfg(12, 9));
  for (std::size_t i = 1; i < events.size(); ++i) CHECK(events[i - 1].t <= events[i].t);
}

TEST_CASE("simulation input validation") {
  auto cfg = small_cfg(4, 3);
  std::vector<IntensityFrame> one{uniform_frame(4, 3, 0, 0.5f)};
  CHECK_THROWS_AS(simulate_events(one, cfg), ValidationError);

  std::vector<IntensityFrame> mismatched{uniform_frame(4, 3, 0, 0.5f),
                                         uniform_frame(5, 3, 1000, 0.5f)};
  CHECK_THROWS_AS(simulate_events(mismatched, cfg), ValidationError);

  std::vector<IntensityFrame> stalled{uniform_frame(4, 3, 1000, 0.5f),
                                      uniform_frame(4, 3, 1000, 0.6f)};
  CHECK_THROWS_AS(simulate_events(stalled, cfg), ValidationError);

  SimConfig bad = cfg;
  bad.log_threshold = 0.0;
  CHECK_THROWS_AS(simulate_events(mismatched, bad), ConfigError);
}

TEST_CASE("keep-all sparsification is the identity") {
  auto frames = random_sequence(8, 6, 3, 71);
  auto cfg = small_cfg(8, 6);
  auto events = simulate_events(frames, cfg);
  REQUIRE_FALSE(events.empty());
  auto kept = sparsify_edges(events, frames, cfg);
  CHECK(kept == events);
}

TEST_CASE("flat source frames keep everything at any fraction") {
  std::vector<IntensityFrame> frames{uniform_frame(6, 6, 0, 0.3f),
                                     uniform_frame(6, 6, 1000, 0.3f)};
  std::vector<Event> events{Event{1, 1, 500, Polarity::kOn},
                            Event{4, 2, 900, Polarity::kOff}};
  auto cfg = small_cfg(6, 6);
  cfg.edge_keep_fraction = 0.5;
  // All gradients are zero, so the quantile threshold ties with every pixel.
  auto kept = sparsify_edges(events, frames, cfg);
  CHECK(kept == events);
}

TEST_CASE("aggressive sparsification keeps only the step edge") {
  const int w = 20, h = 16;
  auto f1 = uniform_frame(w, h, 0, 0.5f);
  auto f2 = uniform_frame(w, h, 1000, 0.2f);
  for (int y = 0; y < h; ++y)
    for (int x = w / 2; x < w; ++x) f2.at(x, y) = 0.8f;
  std::vector<IntensityFrame> frames{f1, f2};
  auto cfg = small_cfg(w, h);
  auto events = simulate_events(frames, cfg);
  // Every pixel stepped, so every pixel emitted at least one event.
  std::vector<char> seen(static_cast<std::size_t>(w) * h, 0);
  for (const Event& e : events) seen[static_cast<std::size_t>(e.y) * w + e.x] = 1;
  for (char s : seen) REQUIRE(s == 1);

  cfg.edge_keep_fraction = 0.1;
  auto kept = sparsify_edges(events, frames, cfg);
  // The gradient field of the step frame is zero except at the two columns
  // adjacent to the boundary, which is exactly 2h of wh = 10% of pixels, so
  // the survivor set is the boundary columns.
  REQUIRE_FALSE(kept.empty());
  for (const Event& e : kept) CHECK((e.x == w / 2 - 1 || e.x == w / 2));
  std::size_t edge_events = 0;
  for (const Event& e : events)
    if (e.x == w / 2 - 1 || e.x == w / 2) ++edge_events;
  CHECK(kept.size() == edge_events);
  for (std::size_t i = 1; i < kept.size(); ++i) CHECK(kept[i - 1].t <= kept[i].t);
}

TEST_CASE("manifest parsing and ingestion") {
  auto entries = parse_manifest("# header\nframe0.pgm 0\n\nframe1.pgm 33000\n");
  REQUIRE(entries.size() == 2);
  CHECK(entries[0].filename == "frame0.pgm");
  CHECK(entries[0].t_us == 0);
  CHECK(entries[1].filename == "frame1.pgm");
  CHECK(entries[1].t_us == 33000);

  CHECK_THROWS_AS(parse_manifest("frame0.pgm\n"), ParseError);
  CHECK_THROWS_AS(parse_manifest("frame0.pgm 0 junk\n"), ParseError);
  CHECK_THROWS_AS(parse_manifest("a.pgm 1000\nb.pgm 500\n"), ValidationError);
}

TEST_CASE("frame sequences load through the manifest") {
  namespace fs = std::filesystem;
  fs::path dir = "test_sim_tmp_frames";
  fs::create_directories(dir);
  for (int i = 0; i < 2; ++i) {
    std::ofstream out(dir / ("f" + std::to_string(i) + ".pgm"), std::ios::binary);
    out << "P2\n4 2\n255\n";
    for (int j = 0; j < 8; ++j) out << (i == 0 ? 100 : 200) << " ";
    out << "\n";
  }
  {
    std::ofstream out(dir / "frames.txt");
    out << "f0.pgm 0\nf1.pgm 40000\n";
  }
  auto cfg = small_cfg(2, 1);
  auto frames = load_frame_sequence(dir.string(), cfg);
  REQUIRE(frames.size() == 2);
  CHECK(frames[0].width == 2);
  CHECK(frames[0].height == 1);
  CHECK(frames[0].t == 0);
  CHECK(frames[1].t == 40000);
  CHECK(frames[0].at(0, 0) == doctest::Approx(100.0 / 255.0).epsilon(1e-6));

  CHECK_THROWS_AS(load_frame_sequence("test_sim_no_such_dir", cfg), ConfigError);
  fs::remove_all(dir);
}
