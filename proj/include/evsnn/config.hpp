// Copyright 2026 The evsnn authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "evsnn/detect.hpp"
#include "evsnn/event.hpp"
#include "evsnn/forward.hpp"
#include "evsnn/network.hpp"
#include "evsnn/sim.hpp"
#include "evsnn/stdp.hpp"
#include "evsnn/synthetic.hpp"
#include "evsnn/window.hpp"

namespace evsnn {

/// Everything a pipeline run needs, with the default network architecture
/// and training hyperparameters baked in. Serializes to a flat
/// `key = value` text with `[section]` headers; the FNV-1a hash of the
/// canonical serialization stamps output artifacts so mismatched pipelines
/// fail loudly instead of silently.
struct RunConfig {
  SensorGeometry geometry{};
  WindowSchedule windows{{10000, 50000, 100000, 200000}, {0.5}};
  SimConfig sim;
  std::vector<LayerConfig> layers = default_layer_configs();
  double conv1_threshold = 1.0;  ///< kept alongside layers for quick override
  StdpParams stdp;
  TrainSchedule schedule;
  PentState pent;
  SyntheticConfig synthetic;
  std::vector<double> noise_fractions = {0.005, 0.01, 0.02, 0.03, 0.04, 0.05};
  std::uint64_t seed = 1;

  void validate() const;
};

/// Canonical text form; parse(serialize(c)) == c for every valid config.
std::string serialize_config(const RunConfig& cfg);

/// Parses `key = value` lines under `[section]` headers, applied on top of
/// the defaults. Unknown keys or malformed values raise a config error.
/// Blank lines and `#` comments are skipped.
RunConfig parse_config(const std::string& text);

/// Loads and parses, or returns defaults when `path` is empty.
RunConfig load_config(const std::string& path);

/// FNV-1a 64-bit over the canonical serialization, lowercase hex.
std::string config_hash(const RunConfig& cfg);

}  // namespace evsnn

