// Copyright 2026 The evsnn authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "doctest.h"
#include "evsnn/errors.hpp"
#include "evsnn/gabor.hpp"
#include "evsnn/network.hpp"

using namespace evsnn;

TEST_CASE("default architecture matches the five-layer table") {
  auto configs = default_layer_configs();
  REQUIRE(configs.size() == 5);
  CHECK(configs[0].kind == LayerKind::kConv);
  CHECK(configs[0].filter_size == 5);
  CHECK(configs[0].num_maps == 4);
  CHECK(configs[0].stride == 1);
  CHECK(configs[0].threshold == 1.0);
  CHECK(configs[1].kind == LayerKind::kPool);
  CHECK(configs[1].filter_size == 5);
  CHECK(configs[1].num_maps == 4);
  CHECK(configs[1].stride == 5);
  CHECK(configs[1].threshold == 1.0);
  CHECK(configs[2].kind == LayerKind::kConv);
  CHECK(configs[2].filter_size == 10);
  CHECK(configs[2].num_maps == 20);
  CHECK(configs[2].stride == 1);
  CHECK(configs[2].threshold == 45.0);
  CHECK(configs[3].kind == LayerKind::kPool);
  CHECK(configs[3].filter_size == 5);
  CHECK(configs[3].num_maps == 20);
  CHECK(configs[3].stride == 5);
  CHECK(configs[3].threshold == 1.0);
  CHECK(configs[4].kind == LayerKind::kConv);
  CHECK(configs[4].filter_size == 5);
  CHECK(configs[4].num_maps == 10);
  CHECK(configs[4].stride == 1);
  CHECK(configs[4].threshold == 3.0);
}

TEST_CASE("geometry chains through the default stack") {
  auto net = build_network(SensorGeometry{240, 180}, default_layer_configs(), 7);
  REQUIRE(net.layers.size() == 5);
  CHECK(net.layers[0].out_width == 236);
  CHECK(net.layers[0].out_height == 176);
  CHECK(net.layers[1].out_width == 47);
  CHECK(net.layers[1].out_height == 35);
  CHECK(net.layers[2].out_width == 38);
  CHECK(net.layers[2].out_height == 26);
  CHECK(net.layers[3].out_width == 7);
  CHECK(net.layers[3].out_height == 5);
  CHECK(net.layers[4].out_width == 3);
  CHECK(net.layers[4].out_height == 1);
}

TEST_CASE("the first four-map conv layer carries the fixed oriented bank") {
  auto net = build_network(SensorGeometry{240, 180}, default_layer_configs(), 7);
  auto bank = gabor_bank();
  const auto& w = net.layers[0].weights;
  REQUIRE(w.out_maps == 4);
  REQUIRE(w.in_maps == 1);
  REQUIRE(w.k == 5);
  for (int m = 0; m < 4; ++m)
    for (int r = 0; r < 5; ++r)
      for (int c = 0; c < 5; ++c)
        CHECK(w.at(m, 0, r, c) == bank.kernels[m][static_cast<std::size_t>(r) * 5 + c]);
}

TEST_CASE("initial weights sample the clamped normal distribution") {
  LayerConfig cfg{LayerKind::kConv, 25, 40, 1, 1.0};
  auto w = init_weights(cfg, 4, 99);
  REQUIRE(w.values.size() == 100000);
  double sum = 0.0;
  for (float v : w.values) {
    CHECK(v >= 0.0f);
    CHECK(v <= 1.0f);
    sum += v;
  }
  double mean = sum / static_cast<double>(w.values.size());
  double var = 0.0;
  for (float v : w.values) var += (v - mean) * (v - mean);
  double stddev = std::sqrt(var / static_cast<double>(w.values.size()));
  CHECK(mean > 0.795);
  CHECK(mean < 0.805);
  CHECK(stddev > 0.075);
  CHECK(stddev < 0.085);
}

TEST_CASE("weight initialization is seed stable and per-map streamed") {
  LayerConfig cfg{LayerKind::kConv, 5, 4, 1, 1.0};
  auto a = init_weights(cfg, 2, 5);
  auto b = init_weights(cfg, 2, 5);
  CHECK(a == b);
  auto c = init_weights(cfg, 2, 6);
  CHECK(a.values != c.values);

  // Adding output maps must not reshuffle the existing ones.
  LayerConfig wider = cfg;
  wider.num_maps = 8;
  auto d = init_weights(wider, 2, 5);
  for (int m = 0; m < 4; ++m)
    for (int in = 0; in < 2; ++in)
      for (int r = 0; r < 5; ++r)
        for (int col = 0; col < 5; ++col)
          CHECK(d.at(m, in, r, col) == a.at(m, in, r, col));
}

TEST_CASE("weight files round trip byte for byte") {
  auto net = build_network(SensorGeometry{240, 180}, default_layer_configs(), 11);
  std::string text = serialize_network(net);
  Network parsed = parse_network(text);
  CHECK(serialize_network(parsed) == text);

  bind_geometry(parsed, SensorGeometry{240, 180});
  REQUIRE(parsed.layers.size() == net.layers.size());
  for (std::size_t i = 0; i < net.layers.size(); ++i) {
    CHECK(parsed.layers[i].weights == net.layers[i].weights);
    CHECK(parsed.layers[i].out_width == net.layers[i].out_width);
    CHECK(parsed.layers[i].out_height == net.layers[i].out_height);
  }
}

TEST_CASE("weight files carry the producing config hash") {
  auto net = build_network(SensorGeometry{240, 180}, default_layer_configs(), 3);
  std::string text = serialize_network(net, "0123456789abcdef");
  CHECK(text.find("# config,0123456789abcdef\n") != std::string::npos);
  Network parsed = parse_network(text);
  CHECK(serialize_network(parsed, "0123456789abcdef") == text);
}

TEST_CASE("weight files survive a disk round trip") {
  auto net = build_network(SensorGeometry{240, 180}, default_layer_configs(), 13);
  const std::string path = "test_network_tmp.snnw";
  write_network_file(path, net, "feedc0de00000000");
  Network back = read_network_file(path);
  REQUIRE(back.layers.size() == net.layers.size());
  for (std::size_t i = 0; i < net.layers.size(); ++i)
    CHECK(back.layers[i].weights == net.layers[i].weights);
  std::remove(path.c_str());
}

TEST_CASE("malformed weight files are rejected") {
  CHECK_THROWS_AS(parse_network("nope,1\n"), ParseError);
  CHECK_THROWS_AS(parse_network("snnw,2\n"), ParseError);
  // Truncated weight list.
  CHECK_THROWS_AS(parse_network("snnw,1\nlayer,0,conv,1,1,2,1,1\n0.5\n0.5\n0.5\n"),
                  ParseError);
  // Out-of-range weight.
  CHECK_THROWS_AS(parse_network("snnw,1\nlayer,0,conv,1,1,1,1,1\n1.5\n"), ValidationError);
  CHECK_THROWS_AS(parse_network("snnw,1\nlayer,0,conv,1,1,1,1,1\n-0.25\n"), ValidationError);
}

TEST_CASE("layer configuration validation") {
  LayerConfig bad{LayerKind::kConv, 0, 4, 1, 1.0};  // no filter
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = LayerConfig{LayerKind::kConv, 5, 0, 1, 1.0};  // no maps
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = LayerConfig{LayerKind::kConv, 5, 4, 0, 1.0};  // zero stride
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = LayerConfig{LayerKind::kConv, 5, 4, 1, -1.0};  // negative threshold
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = LayerConfig{LayerKind::kPool, 5, 4, 3, 1.0};  // overlapping pool
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("building on an undersized input is rejected") {
  CHECK_THROWS_AS(build_network(SensorGeometry{4, 4}, default_layer_configs(), 1),
                  ConfigError);
  auto net = build_network(SensorGeometry{240, 180}, default_layer_configs(), 1);
  CHECK_THROWS_AS(bind_geometry(net, SensorGeometry{4, 4}), ConfigError);
}
