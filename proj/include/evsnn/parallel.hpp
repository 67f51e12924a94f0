// Copyright 2026 The evsnn authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>

namespace evsnn {

/// Maps the CLI --jobs value to a worker count: 0 picks the hardware
/// concurrency, anything else is used as given.
int resolve_jobs(int requested);

/// Runs fn(i) for i in [0, n) across `jobs` workers (OpenMP when compiled
/// in, serial otherwise). Callers write results into per-index slots, so
/// the schedule never shows in the output.
template <typename Fn>
void parallel_for(std::size_t n, int jobs, Fn&& fn);

}  // namespace evsnn

#include "evsnn/parallel_impl.hpp"

