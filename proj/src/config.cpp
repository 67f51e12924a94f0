// Copyright 2026 The evsnn authors
// SPDX-License-Identifier: Apache-2.0

#include "evsnn/config.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string_view>
#include <system_error>

#include "evsnn/errors.hpp"

namespace evsnn {

namespace {

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

template <typename T>
T parse_number(std::string_view v, const std::string& key) {
  T value{};
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), value);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ConfigError("bad value '" + std::string(v) + "' for " + key);
  }
  return value;
}

bool parse_bool(std::string_view v, const std::string& key) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("bad value '" + std::string(v) + "' for " + key + " (want true/false)");
}

std::vector<std::string_view> split_commas(std::string_view v) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    std::size_t comma = v.find(',', pos);
    if (comma == std::string_view::npos) {
      out.push_back(trim(v.substr(pos)));
      break;
    }
    out.push_back(trim(v.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  return out;
}

template <typename T>
std::vector<T> parse_number_list(std::string_view v, const std::string& key) {
  std::vector<T> out;
  for (std::string_view field : split_commas(v)) {
    out.push_back(parse_number<T>(field, key));
  }
  return out;
}

template <typename T>
std::string join_numbers(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    if constexpr (std::is_floating_point_v<T>) {
      out += format_double(values[i]);
    } else {
      out += std::to_string(values[i]);
    }
  }
  return out;
}

std::string format_layer(const LayerConfig& layer) {
  std::string out = layer.kind == LayerKind::kConv ? "conv" : "pool";
  out += ',';
  out += std::to_string(layer.filter_size);
  out += ',';
  out += std::to_string(layer.num_maps);
  out += ',';
  out += std::to_string(layer.stride);
  out += ',';
  out += format_double(layer.threshold);
  return out;
}

LayerConfig parse_layer(std::string_view v, const std::string& key) {
  auto fields = split_commas(v);
  if (fields.size() != 5) {
    throw ConfigError("layer value needs kind,filter,maps,stride,threshold for " + key);
  }
  LayerConfig layer;
  if (fields[0] == "conv") {
    layer.kind = LayerKind::kConv;
  } else if (fields[0] == "pool") {
    layer.kind = LayerKind::kPool;
  } else {
    throw ConfigError("bad layer kind '" + std::string(fields[0]) + "' for " + key);
  }
  layer.filter_size = parse_number<int>(fields[1], key);
  layer.num_maps = parse_number<int>(fields[2], key);
  layer.stride = parse_number<int>(fields[3], key);
  layer.threshold = parse_number<double>(fields[4], key);
  return layer;
}

}  // namespace

void RunConfig::validate() const {
  if (geometry.width <= 0 || geometry.height <= 0) {
    throw ConfigError("sensor geometry must be positive");
  }
  if (windows.lengths_us.empty()) throw ConfigError("window schedule needs lengths");
  for (std::uint64_t len : windows.lengths_us) {
    if (len == 0) throw ConfigError("window lengths must be positive");
  }
  for (double f : windows.overlaps) {
    if (!(f >= 0.0) || f >= 1.0) throw ConfigError("window overlaps must lie in [0, 1)");
  }
  sim.validate();
  if (!(sim.target_geometry == geometry)) {
    throw ConfigError("sim target geometry must match the sensor geometry");
  }
  if (layers.empty()) throw ConfigError("network needs at least one layer");
  for (const LayerConfig& layer : layers) layer.validate();
  if (layers.front().kind != LayerKind::kConv) {
    throw ConfigError("the first layer must be a conv layer");
  }
  if (layers.front().threshold != conv1_threshold) {
    throw ConfigError("conv1_threshold must equal the first layer's threshold");
  }
  stdp.validate();
  if (!(pent.scale_exponent >= 0.0)) {
    throw ConfigError("pent scale_exponent must be non-negative");
  }
  if (pent.saturation_cap == 0 && !(pent.saturation_fraction > 0.0)) {
    throw ConfigError("pent needs a positive saturation cap or fraction");
  }
  synthetic.validate();
  if (!(synthetic.geometry == geometry)) {
    throw ConfigError("synthetic geometry must match the sensor geometry");
  }
  if (synthetic.seed != seed) {
    throw ConfigError("synthetic seed must match the run seed");
  }
  double prev = 0.0;
  for (double f : noise_fractions) {
    if (!(f > prev) || f > 1.0) {
      throw ConfigError("noise fractions must be strictly ascending in (0, 1]");
    }
    prev = f;
  }
}

std::string serialize_config(const RunConfig& cfg) {
  std::string out;
  auto line = [&out](const std::string& key, const std::string& value) {
    out += key;
    out += " = ";
    out += value;
    out += '\n';
  };

  out += "[sensor]\n";
  line("width", std::to_string(cfg.geometry.width));
  line("height", std::to_string(cfg.geometry.height));

  out += "\n[windows]\n";
  line("lengths_us", join_numbers(cfg.windows.lengths_us));
  line("overlaps", join_numbers(cfg.windows.overlaps));

  out += "\n[sim]\n";
  line("log_threshold", format_double(cfg.sim.log_threshold));
  line("eps", format_double(cfg.sim.eps));
  line("max_events_per_pixel_per_interval",
       std::to_string(cfg.sim.max_events_per_pixel_per_interval));
  line("edge_keep_fraction", format_double(cfg.sim.edge_keep_fraction));

  out += "\n[layers]\n";
  for (std::size_t i = 0; i < cfg.layers.size(); ++i) {
    line("layer" + std::to_string(i), format_layer(cfg.layers[i]));
  }
  line("conv1_threshold", format_double(cfg.conv1_threshold));

  out += "\n[stdp]\n";
  line("a_plus", format_double(cfg.stdp.a_plus));
  line("a_minus", format_double(cfg.stdp.a_minus));
  line("convergence_eps", format_double(cfg.stdp.convergence_eps));

  out += "\n[schedule]\n";
  line("frames_layer1", std::to_string(cfg.schedule.frames_layer1));
  line("frames_layer2", std::to_string(cfg.schedule.frames_layer2));
  line("frames_layer3", std::to_string(cfg.schedule.frames_layer3));

  out += "\n[pent]\n";
  line("enabled", cfg.pent.enabled ? "true" : "false");
  line("scale_exponent", format_double(cfg.pent.scale_exponent));
  line("saturation_cap", std::to_string(cfg.pent.saturation_cap));
  line("saturation_fraction", format_double(cfg.pent.saturation_fraction));

  out += "\n[synthetic]\n";
  line("uav_frames", std::to_string(cfg.synthetic.uav_frames));
  line("distractor_frames", std::to_string(cfg.synthetic.distractor_frames));
  line("body_diameter", format_double(cfg.synthetic.body_diameter));
  line("rotor_diameter", format_double(cfg.synthetic.rotor_diameter));
  line("rotor_offset", format_double(cfg.synthetic.rotor_offset));
  line("distractor_min_diameter", format_double(cfg.synthetic.distractor_min_diameter));
  line("distractor_max_diameter", format_double(cfg.synthetic.distractor_max_diameter));
  line("line_length", format_double(cfg.synthetic.line_length));
  line("line_thickness", format_double(cfg.synthetic.line_thickness));
  line("pixel_dropout", format_double(cfg.synthetic.pixel_dropout));
  line("window_length_us", std::to_string(cfg.synthetic.window_length_us));

  out += "\n[noise]\n";
  line("fractions", join_numbers(cfg.noise_fractions));

  out += "\n[run]\n";
  line("seed", std::to_string(cfg.seed));
  return out;
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::string section;
  std::vector<std::pair<std::size_t, LayerConfig>> layer_entries;
  bool conv1_given = false;

  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    std::string_view line = trim(std::string_view(text.data() + pos, eol - pos));
    pos = eol + 1;
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        throw ConfigError("malformed section header '" + std::string(line) + "'");
      }
      section = std::string(line.substr(1, line.size() - 2));
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("expected key = value, got '" + std::string(line) + "'");
    }
    std::string key = std::string(trim(line.substr(0, eq)));
    std::string_view value = trim(line.substr(eq + 1));
    if (section.empty()) throw ConfigError("key '" + key + "' appears before any section");
    std::string full = section + "." + key;

    if (full == "sensor.width") {
      cfg.geometry.width = parse_number<int>(value, full);
    } else if (full == "sensor.height") {
      cfg.geometry.height = parse_number<int>(value, full);
    } else if (full == "windows.lengths_us") {
      cfg.windows.lengths_us = parse_number_list<std::uint64_t>(value, full);
    } else if (full == "windows.overlaps") {
      cfg.windows.overlaps = parse_number_list<double>(value, full);
    } else if (full == "sim.log_threshold") {
      cfg.sim.log_threshold = parse_number<double>(value, full);
    } else if (full == "sim.eps") {
      cfg.sim.eps = parse_number<double>(value, full);
    } else if (full == "sim.max_events_per_pixel_per_interval") {
      cfg.sim.max_events_per_pixel_per_interval = parse_number<int>(value, full);
    } else if (full == "sim.edge_keep_fraction") {
      cfg.sim.edge_keep_fraction = parse_number<double>(value, full);
    } else if (section == "layers" && key.starts_with("layer")) {
      auto ordinal = parse_number<std::size_t>(std::string_view(key).substr(5), full);
      layer_entries.emplace_back(ordinal, parse_layer(value, full));
    } else if (full == "layers.conv1_threshold") {
      cfg.conv1_threshold = parse_number<double>(value, full);
      conv1_given = true;
    } else if (full == "stdp.a_plus") {
      cfg.stdp.a_plus = parse_number<double>(value, full);
    } else if (full == "stdp.a_minus") {
      cfg.stdp.a_minus = parse_number<double>(value, full);
    } else if (full == "stdp.convergence_eps") {
      cfg.stdp.convergence_eps = parse_number<double>(value, full);
    } else if (full == "schedule.frames_layer1") {
      cfg.schedule.frames_layer1 = parse_number<std::uint64_t>(value, full);
    } else if (full == "schedule.frames_layer2") {
      cfg.schedule.frames_layer2 = parse_number<std::uint64_t>(value, full);
    } else if (full == "schedule.frames_layer3") {
      cfg.schedule.frames_layer3 = parse_number<std::uint64_t>(value, full);
    } else if (full == "pent.enabled") {
      cfg.pent.enabled = parse_bool(value, full);
    } else if (full == "pent.scale_exponent") {
      cfg.pent.scale_exponent = parse_number<double>(value, full);
    } else if (full == "pent.saturation_cap") {
      cfg.pent.saturation_cap = parse_number<std::uint64_t>(value, full);
    } else if (full == "pent.saturation_fraction") {
      cfg.pent.saturation_fraction = parse_number<double>(value, full);
    } else if (full == "synthetic.uav_frames") {
      cfg.synthetic.uav_frames = parse_number<int>(value, full);
    } else if (full == "synthetic.distractor_frames") {
      cfg.synthetic.distractor_frames = parse_number<int>(value, full);
    } else if (full == "synthetic.body_diameter") {
      cfg.synthetic.body_diameter = parse_number<double>(value, full);
    } else if (full == "synthetic.rotor_diameter") {
      cfg.synthetic.rotor_diameter = parse_number<double>(value, full);
    } else if (full == "synthetic.rotor_offset") {
      cfg.synthetic.rotor_offset = parse_number<double>(value, full);
    } else if (full == "synthetic.distractor_min_diameter") {
      cfg.synthetic.distractor_min_diameter = parse_number<double>(value, full);
    } else if (full == "synthetic.distractor_max_diameter") {
      cfg.synthetic.distractor_max_diameter = parse_number<double>(value, full);
    } else if (full == "synthetic.line_length") {
      cfg.synthetic.line_length = parse_number<double>(value, full);
    } else if (full == "synthetic.line_thickness") {
      cfg.synthetic.line_thickness = parse_number<double>(value, full);
    } else if (full == "synthetic.pixel_dropout") {
      cfg.synthetic.pixel_dropout = parse_number<double>(value, full);
    } else if (full == "synthetic.window_length_us") {
      cfg.synthetic.window_length_us = parse_number<std::uint64_t>(value, full);
    } else if (full == "noise.fractions") {
      cfg.noise_fractions = parse_number_list<double>(value, full);
    } else if (full == "run.seed") {
      cfg.seed = parse_number<std::uint64_t>(value, full);
    } else {
      throw ConfigError("unknown config key '" + full + "'");
    }
  }

  if (!layer_entries.empty()) {
    std::vector<LayerConfig> layers(layer_entries.size());
    std::vector<bool> seen(layer_entries.size(), false);
    for (const auto& [ordinal, layer] : layer_entries) {
      if (ordinal >= layers.size() || seen[ordinal]) {
        throw ConfigError("layer indices must be unique and sequential from 0");
      }
      layers[ordinal] = layer;
      seen[ordinal] = true;
    }
    cfg.layers = std::move(layers);
  }
  // conv1_threshold and the first layer line describe the same knob; an
  // explicit key wins, otherwise the layer line does.
  if (!cfg.layers.empty() && cfg.layers.front().kind == LayerKind::kConv) {
    if (conv1_given) {
      cfg.layers.front().threshold = cfg.conv1_threshold;
    } else {
      cfg.conv1_threshold = cfg.layers.front().threshold;
    }
  }

  cfg.sim.target_geometry = cfg.geometry;
  cfg.synthetic.geometry = cfg.geometry;
  cfg.synthetic.seed = cfg.seed;
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  if (path.empty()) {
    RunConfig cfg;
    cfg.sim.target_geometry = cfg.geometry;
    cfg.synthetic.geometry = cfg.geometry;
    cfg.synthetic.seed = cfg.seed;
    cfg.validate();
    return cfg;
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(std::move(buf).str());
}

std::string config_hash(const RunConfig& cfg) {
  std::string text = serialize_config(cfg);
  std::uint64_t hash = 14695981039346656037ull;
  for (unsigned char byte : text) {
    hash ^= byte;
    hash *= 1099511628211ull;
  }
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = "0123456789abcdef"[hash & 0xf];
    hash >>= 4;
  }
  return out;
}

}  // namespace evsnn
