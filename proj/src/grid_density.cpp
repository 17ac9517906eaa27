// Copyright 2026 The lepto authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lepto/numeric/grid_density.hpp"

#include <cmath>
#include <complex>

#include "lepto/errors.hpp"
#include "lepto/numeric/fft.hpp"

namespace lepto {

GridDensity::GridDensity(Eigen::ArrayXd values, double half_width)
    : values_(std::move(values)), half_width_(half_width) {
  if (values_.size() < 8 || !(half_width > 0.0)) {
    throw FeasibilityError("GridDensity: bad grid");
  }
  step_ = 2.0 * half_width_ / static_cast<double>(values_.size());
}

double GridDensity::operator()(double x) const {
  const double t = (x + half_width_) / step_;
  const auto n = values_.size();
  if (t < 1.0 || t >= static_cast<double>(n - 2)) {
    // Within one cell of the boundary the tails are below the grid's
    // accuracy floor anyway.
    return 0.0;
  }
  const auto k = static_cast<Eigen::Index>(t);
  const double u = t - static_cast<double>(k);
  const double ym1 = values_[k - 1], y0 = values_[k], y1 = values_[k + 1],
               y2 = values_[k + 2];
  const double a = y0;
  const double b = 0.5 * (y1 - ym1);
  const double c = ym1 - 2.5 * y0 + 2.0 * y1 - 0.5 * y2;
  const double d = 0.5 * (y2 - ym1) + 1.5 * (y0 - y1);
  return a + u * (b + u * (c + u * d));
}

Eigen::ArrayXd convolve_on_grid(const std::vector<Eigen::ArrayXd>& factors,
                                double half_width) {
  if (factors.empty()) {
    throw FeasibilityError("convolve_on_grid: no factors");
  }
  const auto n = factors.front().size();
  if (n < 8 || (n & (n - 1)) != 0) {
    throw FeasibilityError("convolve_on_grid: length must be a power of two");
  }
  const double h = 2.0 * half_width / static_cast<double>(n);
  std::vector<std::complex<double>> acc(n), tmp(n);
  for (Eigen::Index i = 0; i < n; ++i) acc[i] = factors.front()[i];
  fft_radix2(acc, false);
  for (std::size_t f = 1; f < factors.size(); ++f) {
    if (factors[f].size() != n) {
      throw FeasibilityError("convolve_on_grid: factor length mismatch");
    }
    for (Eigen::Index i = 0; i < n; ++i) tmp[i] = factors[f][i];
    fft_radix2(tmp, false);
    for (Eigen::Index i = 0; i < n; ++i) acc[i] *= h * tmp[i];
  }
  // Each pairwise convolution of samples anchored at -half_width lands at
  // an origin of -2 * half_width; rotating by half the grid per factor
  // beyond the first re-centers it, which in frequency space is a (-1)^k
  // twist per extra factor.
  if ((factors.size() - 1) % 2 == 1) {
    for (Eigen::Index i = 1; i < n; i += 2) acc[i] = -acc[i];
  }
  fft_radix2(acc, true);
  Eigen::ArrayXd out(n);
  for (Eigen::Index i = 0; i < n; ++i) out[i] = acc[i].real();
  return out;
}

}  // namespace lepto
