// Copyright 2026 The evsnn authors
// SPDX-License-Identifier: Apache-2.0

#include "evsnn/network.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "evsnn/errors.hpp"
#include "evsnn/gabor.hpp"
#include "evsnn/rng.hpp"

namespace evsnn {

namespace {

constexpr double kInitMean = 0.8;
constexpr double kInitStd = 0.08;

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, ptr};
}

std::string format_float(float v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, ptr};
}

}  // namespace

void LayerConfig::validate() const {
  if (filter_size <= 0) throw ConfigError("layer filter_size must be positive");
  if (num_maps <= 0) throw ConfigError("layer num_maps must be positive");
  if (stride <= 0) throw ConfigError("layer stride must be positive");
  if (!(threshold >= 0.0)) throw ConfigError("layer threshold must be non-negative");
  if (kind == LayerKind::kPool && stride != filter_size) {
    throw ConfigError("pool layers use stride == filter_size");
  }
}

WeightTensor WeightTensor::zeros(int out_maps, int in_maps, int k) {
  WeightTensor t;
  t.out_maps = out_maps;
  t.in_maps = in_maps;
  t.k = k;
  t.values.assign(static_cast<std::size_t>(out_maps) * in_maps * k * k, 0.0f);
  return t;
}

std::vector<LayerConfig> default_layer_configs() {
  return {
      {LayerKind::kConv, 5, 4, 1, 1.0},
      {LayerKind::kPool, 5, 4, 5, 1.0},
      {LayerKind::kConv, 10, 20, 1, 45.0},
      {LayerKind::kPool, 5, 20, 5, 1.0},
      {LayerKind::kConv, 5, 10, 1, 3.0},
  };
}

WeightTensor init_weights(const LayerConfig& cfg, int in_maps, std::uint64_t seed) {
  cfg.validate();
  if (cfg.kind != LayerKind::kConv) throw ConfigError("only conv layers carry weights");
  WeightTensor t = WeightTensor::zeros(cfg.num_maps, in_maps, cfg.filter_size);
  // One stream per output map: adding maps never reshuffles existing ones.
  for (int m = 0; m < cfg.num_maps; ++m) {
    auto rng = make_engine(seed, static_cast<std::uint64_t>(m));
    for (int in = 0; in < in_maps; ++in) {
      for (int r = 0; r < cfg.filter_size; ++r) {
        for (int c = 0; c < cfg.filter_size; ++c) {
          double w = kInitMean + kInitStd * normal01(rng);
          t.at(m, in, r, c) = static_cast<float>(std::clamp(w, 0.0, 1.0));
        }
      }
    }
  }
  return t;
}

namespace {

// Output size of a valid (no padding) sliding window, full windows only.
int slide_out(int in, int k, int stride) {
  if (in < k) return 0;
  return (in - k) / stride + 1;
}

}  // namespace

void bind_geometry(Network& net, SensorGeometry input) {
  if (input.width <= 0 || input.height <= 0) {
    throw ConfigError("network input geometry must be positive");
  }
  net.input_geometry = input;
  int w = input.width;
  int h = input.height;
  int maps = 1;
  for (std::size_t i = 0; i < net.layers.size(); ++i) {
    Layer& layer = net.layers[i];
    const LayerConfig& cfg = layer.config;
    cfg.validate();
    if (cfg.kind == LayerKind::kConv) {
      if (!layer.weights.values.empty() && layer.weights.in_maps != maps) {
        throw ConfigError("layer " + std::to_string(i) + " expects " +
                          std::to_string(layer.weights.in_maps) + " input maps, got " +
                          std::to_string(maps));
      }
      maps = cfg.num_maps;
    } else if (cfg.num_maps != maps) {
      throw ConfigError("pool layer " + std::to_string(i) + " map count " +
                        std::to_string(cfg.num_maps) + " does not match input maps " +
                        std::to_string(maps));
    }
    w = slide_out(w, cfg.filter_size, cfg.stride);
    h = slide_out(h, cfg.filter_size, cfg.stride);
    if (w <= 0 || h <= 0) {
      throw ConfigError("layer " + std::to_string(i) + " output collapses to zero size");
    }
    layer.out_width = w;
    layer.out_height = h;
  }
}

Network build_network(SensorGeometry input, const std::vector<LayerConfig>& configs,
                      std::uint64_t seed) {
  if (configs.empty()) throw ConfigError("network needs at least one layer");
  Network net;
  int maps = 1;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    const LayerConfig& cfg = configs[i];
    cfg.validate();
    Layer layer;
    layer.config = cfg;
    if (cfg.kind == LayerKind::kConv) {
      if (i == 0 && cfg.num_maps == 4 && maps == 1) {
        // Fixed oriented-edge first layer.
        GaborBank bank = gabor_bank(cfg.filter_size);
        layer.weights = WeightTensor::zeros(4, 1, cfg.filter_size);
        for (int m = 0; m < 4; ++m) {
          for (std::size_t j = 0; j < bank.kernels[m].size(); ++j) {
            layer.weights.values[static_cast<std::size_t>(m) * bank.kernels[m].size() + j] =
                bank.kernels[m][j];
          }
        }
      } else {
        layer.weights = init_weights(cfg, maps, derive_seed(seed, i));
      }
      maps = cfg.num_maps;
    }
    net.layers.push_back(std::move(layer));
  }
  bind_geometry(net, input);
  return net;
}

std::string serialize_network(const Network& net, const std::string& config_hash) {
  std::string out = "snnw,1\n";
  for (std::size_t i = 0; i < net.layers.size(); ++i) {
    const Layer& layer = net.layers[i];
    const LayerConfig& cfg = layer.config;
    const bool conv = cfg.kind == LayerKind::kConv;
    int out_maps = conv ? layer.weights.out_maps : cfg.num_maps;
    int in_maps = conv ? layer.weights.in_maps : cfg.num_maps;
    out += "layer," + std::to_string(i) + "," + (conv ? "conv" : "pool") + "," +
           std::to_string(out_maps) + "," + std::to_string(in_maps) + "," +
           std::to_string(cfg.filter_size) + "," + std::to_string(cfg.stride) + "," +
           format_double(cfg.threshold) + "\n";
    if (conv) {
      for (float w : layer.weights.values) out += format_float(w) + "\n";
    }
  }
  if (!config_hash.empty()) out += "# config," + config_hash + "\n";
  return out;
}

Network parse_network(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&](std::string& into) {
    if (!std::getline(in, into)) return false;
    ++line_no;
    return true;
  };

  if (!next_line(line) || line != "snnw,1") {
    throw ParseError("line 1: expected weight file header 'snnw,1'");
  }

  Network net;
  while (next_line(line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      break;  // trailing config comment
    }
    std::istringstream fields(line);
    std::string tag, kind;
    std::getline(fields, tag, ',');
    if (tag != "layer") {
      throw ParseError("line " + std::to_string(line_no) + ": expected a layer line");
    }
    std::string part;
    auto field_int = [&](const char* what) {
      if (!std::getline(fields, part, ',')) {
        throw ParseError("line " + std::to_string(line_no) + ": missing " + what);
      }
      int v{};
      auto [p, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
      if (ec != std::errc() || p != part.data() + part.size()) {
        throw ParseError("line " + std::to_string(line_no) + ": bad " + what);
      }
      return v;
    };

    int index = field_int("layer index");
    if (static_cast<std::size_t>(index) != net.layers.size()) {
      throw ParseError("line " + std::to_string(line_no) + ": layer index " +
                       std::to_string(index) + " out of order");
    }
    if (!std::getline(fields, kind, ',') || (kind != "conv" && kind != "pool")) {
      throw ParseError("line " + std::to_string(line_no) + ": bad layer kind");
    }
    int out_maps = field_int("out_maps");
    int in_maps = field_int("in_maps");
    int k = field_int("filter size");
    int stride = field_int("stride");
    if (!std::getline(fields, part, ',')) {
      throw ParseError("line " + std::to_string(line_no) + ": missing threshold");
    }
    double threshold{};
    auto [p, ec] = std::from_chars(part.data(), part.data() + part.size(), threshold);
    if (ec != std::errc() || p != part.data() + part.size()) {
      throw ParseError("line " + std::to_string(line_no) + ": bad threshold");
    }

    Layer layer;
    layer.config.kind = kind == "conv" ? LayerKind::kConv : LayerKind::kPool;
    layer.config.filter_size = k;
    layer.config.num_maps = out_maps;
    layer.config.stride = stride;
    layer.config.threshold = threshold;
    layer.config.validate();

    if (layer.config.kind == LayerKind::kConv) {
      layer.weights = WeightTensor::zeros(out_maps, in_maps, k);
      for (std::size_t j = 0; j < layer.weights.values.size(); ++j) {
        if (!next_line(line)) {
          throw ParseError("line " + std::to_string(line_no) + ": truncated weight block");
        }
        float w{};
        auto [wp, wec] = std::from_chars(line.data(), line.data() + line.size(), w);
        if (wec != std::errc() || wp != line.data() + line.size()) {
          throw ParseError("line " + std::to_string(line_no) + ": bad weight value");
        }
        if (!(w >= 0.0f && w <= 1.0f)) {
          throw ValidationError("line " + std::to_string(line_no) +
                                ": weight outside [0,1]");
        }
        layer.weights.values[j] = w;
      }
    }
    net.layers.push_back(std::move(layer));
  }
  if (net.layers.empty()) throw ParseError("weight file holds no layers");
  return net;
}

void write_network_file(const std::string& path, const Network& net,
                        const std::string& config_hash) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << serialize_network(net, config_hash);
  if (!out) throw IoError("short write to '" + path + "'");
}

Network read_network_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open weight file '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_network(text);
}

}  // namespace evsnn
