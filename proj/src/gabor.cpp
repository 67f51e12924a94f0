// Copyright 2026 The evsnn authors
// SPDX-License-Identifier: Apache-2.0

#include "evsnn/gabor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "evsnn/errors.hpp"

namespace evsnn {

GaborBank gabor_bank(int size, double wavelength, double sigma, double aspect) {
  if (size <= 0 || size % 2 == 0) throw ConfigError("gabor size must be odd and positive");
  if (!(wavelength > 0.0) || !(sigma > 0.0) || !(aspect > 0.0)) {
    throw ConfigError("gabor wavelength, sigma and aspect must be positive");
  }

  GaborBank bank;
  bank.size = size;
  const int half = size / 2;
  const double orientations[] = {0.0, 45.0, 90.0, 135.0};
  for (double deg : orientations) {
    double theta = deg * std::numbers::pi / 180.0;
    double ct = std::cos(theta);
    double st = std::sin(theta);
    std::vector<float> kernel(static_cast<std::size_t>(size) * size);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    std::vector<double> raw(kernel.size());
    for (int row = 0; row < size; ++row) {
      for (int col = 0; col < size; ++col) {
        double x = col - half;
        double y = row - half;
        double xp = x * ct + y * st;
        double yp = -x * st + y * ct;
        double g = std::cos(2.0 * std::numbers::pi * xp / wavelength) *
                   std::exp(-(xp * xp + aspect * aspect * yp * yp) / (2.0 * sigma * sigma));
        raw[static_cast<std::size_t>(row) * size + col] = g;
        lo = std::min(lo, g);
        hi = std::max(hi, g);
      }
    }
    double range = hi - lo;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      kernel[i] = range > 0 ? static_cast<float>((raw[i] - lo) / range) : 1.0f;
    }
    bank.kernels.push_back(std::move(kernel));
  }
  return bank;
}

}  // namespace evsnn
