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

#ifndef LEPTO_NUMERIC_GRID_DENSITY_HPP
#define LEPTO_NUMERIC_GRID_DENSITY_HPP

#include <Eigen/Dense>
#include <vector>

namespace lepto {

// Density tabulated on a uniform symmetric grid, evaluated off-grid by
// cubic (Catmull-Rom) interpolation and zero outside the span.
class GridDensity {
 public:
  GridDensity(Eigen::ArrayXd values, double half_width);

  double operator()(double x) const;
  double half_width() const { return half_width_; }
  double step() const { return step_; }
  const Eigen::ArrayXd& values() const { return values_; }

 private:
  Eigen::ArrayXd values_;
  double half_width_;
  double step_;
};

// Cyclic convolution of densities sampled on a shared uniform grid over
// [-half_width, half_width), length a power of two. Each input column is
// one factor; the result carries the h^(n-1) quadrature factor and the
// index shift that keeps the grid centered. The half width must be large
// enough that every factor (and the result) has decayed below the target
// accuracy at the boundary, since wraparound folds the tails back in.
Eigen::ArrayXd convolve_on_grid(const std::vector<Eigen::ArrayXd>& factors,
                                double half_width);

}  // namespace lepto

#endif  // LEPTO_NUMERIC_GRID_DENSITY_HPP
