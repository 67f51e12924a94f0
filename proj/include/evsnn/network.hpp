// Copyright 2026 The evsnn authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "evsnn/event.hpp"

namespace evsnn {

enum class LayerKind { kConv, kPool };

/// Static description of one layer.
struct LayerConfig {
  LayerKind kind = LayerKind::kConv;
  int filter_size = 5;
  int num_maps = 4;
  int stride = 1;
  /// Conv: membrane threshold theta. Pool: minimum input spikes per window.
  double threshold = 1.0;

  void validate() const;
};

/// Synaptic weights for one conv layer, shape (out_maps, in_maps, k, k),
/// stored row-major in that index order. Every value stays in [0,1].
struct WeightTensor {
  int out_maps = 0;
  int in_maps = 0;
  int k = 0;
  std::vector<float> values;

  static WeightTensor zeros(int out_maps, int in_maps, int k);
  std::size_t index(int out_map, int in_map, int row, int col) const {
    return ((static_cast<std::size_t>(out_map) * in_maps + in_map) * k + row) * k + col;
  }
  float at(int out_map, int in_map, int row, int col) const {
    return values[index(out_map, in_map, row, col)];
  }
  float& at(int out_map, int in_map, int row, int col) {
    return values[index(out_map, in_map, row, col)];
  }
  bool operator==(const WeightTensor&) const = default;
};

/// One layer: config plus weights (conv only; pool layers keep `weights`
/// empty) and the spatial size of the maps it emits.
struct Layer {
  LayerConfig config;
  WeightTensor weights;
  int out_width = 0;
  int out_height = 0;
};

/// The full stack. Layer 0 consumes the sensor frame.
struct Network {
  SensorGeometry input_geometry{};
  std::vector<Layer> layers;

  const Layer& layer(std::size_t i) const { return layers[i]; }
};

/// The default five-layer architecture:
///   conv 5x5 x4 maps stride 1 theta 1 (Gabor, fixed)
///   pool 5x5 x4 stride 5 min-spikes 1
///   conv 10x10 x20 stride 1 theta 45
///   pool 5x5 x20 stride 5 min-spikes 1
///   conv 5x5 x10 stride 1 theta 3
std::vector<LayerConfig> default_layer_configs();

/// Draws Normal(0.8, 0.08) weights clamped to [0,1]. Each output map uses
/// its own seed stream derived from (seed, out_map) so map count changes do
/// not reshuffle other maps.
WeightTensor init_weights(const LayerConfig& cfg, int in_maps, std::uint64_t seed);

/// Assembles the network: validates configs, chains output geometries
/// (valid convolution, full pooling windows only), loads the Gabor bank
/// into layer 0 when `configs` starts with a 4-map conv, and draws initial
/// weights for the remaining conv layers from `seed`.
Network build_network(SensorGeometry input, const std::vector<LayerConfig>& configs,
                      std::uint64_t seed);

/// Recomputes every layer's output size for `input` and validates the
/// map-count chain. Needed after parse_network, which carries no geometry.
void bind_geometry(Network& net, SensorGeometry input);

/// Weight file round trip. Text format:
///   snnw,1
///   layer,<index>,<kind>,<out_maps>,<in_maps>,<k>,<stride>,<threshold>
///   <weight>            (out_maps*in_maps*k*k lines, row-major; conv only)
///   # config,<hash>     (optional trailing comment)
/// Weights print with shortest round-trip precision so files diff cleanly.
std::string serialize_network(const Network& net, const std::string& config_hash = "");
Network parse_network(const std::string& text);
void write_network_file(const std::string& path, const Network& net,
                        const std::string& config_hash = "");
Network read_network_file(const std::string& path);

}  // namespace evsnn

