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

#ifndef LEPTO_NUMERIC_CDF_TABLE_HPP
#define LEPTO_NUMERIC_CDF_TABLE_HPP

#include <functional>
#include <vector>

namespace lepto {

// Cumulative machinery for a density known only pointwise. The density is
// integrated cell by cell (uniform cells, 15-point Kronrod per cell) over
// [-radius, radius]; CDF values interpolate with a partial panel inside the
// cell, quantiles invert the table with safeguarded Newton. Results are
// normalized by the total captured mass, so the radius must already capture
// the tails to well below the accuracy you need.
class NumericCdf {
 public:
  NumericCdf(std::function<double(double)> pdf, double radius,
             int cells = 4000);

  double cdf(double x) const;
  // u in (0, 1); throws FeasibilityError otherwise.
  double quantile(double u) const;
  // (1/u) * integral of t * pdf(t) below quantile(u), i.e. the mean of the
  // lower tail with mass u. Pass the quantile if already known.
  double tail_mean(double u) const;
  double tail_mean(double u, double q) const;

  double mass() const { return mass_; }
  double radius() const { return radius_; }

 private:
  double node(int k) const { return -radius_ + k * step_; }
  double raw_cdf(double x) const;

  std::function<double(double)> pdf_;
  double radius_;
  double step_;
  double mass_;
  std::vector<double> cum_;    // cumulative mass at nodes 0..cells
  std::vector<double> cum_x_;  // cumulative integral of x * pdf at nodes
};

}  // namespace lepto

#endif  // LEPTO_NUMERIC_CDF_TABLE_HPP
