// Copyright 2026 The evsnn authors
// SPDX-License-Identifier: Apache-2.0

#include "evsnn/wta.hpp"

#include <algorithm>

#include "evsnn/errors.hpp"

namespace evsnn {

bool wta_admissible(const std::vector<SpikeRecord>& winners, const SpikeRecord& cand,
                    int kernel_size) {
  for (const SpikeRecord& w : winners) {
    if (w.map == cand.map) return false;
    int dr = std::abs(w.row - cand.row);
    int dc = std::abs(w.col - cand.col);
    if (std::max(dr, dc) < kernel_size) return false;
  }
  return true;
}

WtaOutcome wta_select(const std::vector<SpikeRecord>& candidates, int kernel_size,
                      int map_count) {
  if (kernel_size <= 0) throw ValidationError("wta kernel_size must be positive");
  WtaOutcome outcome;
  for (const SpikeRecord& c : candidates) {
    if (c.map < 0 || c.map >= map_count) {
      throw ValidationError("wta candidate map out of range");
    }
    if (wta_admissible(outcome.winners, c, kernel_size)) {
      outcome.winners.push_back(c);
    } else {
      outcome.suppressed.push_back(c);
    }
  }
  return outcome;
}

}  // namespace evsnn
