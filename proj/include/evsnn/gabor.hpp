// Copyright 2026 The evsnn authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

namespace evsnn {

/// Four oriented Gabor kernels used as the fixed first conv layer.
struct GaborBank {
  int size = 5;
  /// Kernel per orientation {0, 45, 90, 135} degrees, row-major, values in [0,1].
  std::vector<std::vector<float>> kernels;
};

/// Builds the 4-orientation bank on a size x size grid centered at the
/// middle cell. Each kernel evaluates
///   g(x', y') = cos(2*pi*x'/wavelength) * exp(-(x'^2 + aspect^2 * y'^2) / (2*sigma^2))
/// with (x', y') the coordinates rotated by the orientation, then is min-max
/// normalized to [0,1]. Size must be odd so the center peak lands on a cell.
GaborBank gabor_bank(int size = 5, double wavelength = 5.0, double sigma = 2.0,
                     double aspect = 0.5);

}  // namespace evsnn

