// Copyright 2026 The evsnn authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "evsnn/forward.hpp"

namespace evsnn {

/// Result of winner-take-all arbitration over one frame's candidates.
struct WtaOutcome {
  std::vector<SpikeRecord> winners;
  std::vector<SpikeRecord> suppressed;
};

/// Incremental arbiter shared by wta_select and the on-line inhibition path
/// inside conv_forward. Constraints:
///   intra-map: at most one winner per map per frame
///   inter-map: no two winners anywhere within Chebyshev distance < kernel_size
bool wta_admissible(const std::vector<SpikeRecord>& winners, const SpikeRecord& cand,
                    int kernel_size);

/// Greedy arbitration in rank order: a candidate wins iff its map is still
/// free and no earlier winner sits within Chebyshev distance < kernel_size.
/// Candidates must arrive ordered by spike_order with map < map_count.
WtaOutcome wta_select(const std::vector<SpikeRecord>& candidates, int kernel_size,
                      int map_count);

}  // namespace evsnn

