// Copyright 2026 The evsnn authors
// SPDX-License-Identifier: Apache-2.0

#include "evsnn/parallel.hpp"

#include <algorithm>
#include <thread>

namespace evsnn {

int resolve_jobs(int requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return std::max(1, static_cast<int>(hw));
}

}  // namespace evsnn
