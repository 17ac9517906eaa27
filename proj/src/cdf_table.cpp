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

#include "lepto/numeric/cdf_table.hpp"

#include <algorithm>
#include <cmath>

#include "lepto/errors.hpp"
#include "lepto/numeric/log_sum.hpp"
#include "lepto/numeric/quadrature.hpp"

namespace lepto {

NumericCdf::NumericCdf(std::function<double(double)> pdf, double radius,
                       int cells)
    : pdf_(std::move(pdf)), radius_(radius), step_(2.0 * radius / cells) {
  if (!(radius > 0.0) || cells < 16) {
    throw FeasibilityError("NumericCdf: bad radius or cell count");
  }
  cum_.resize(cells + 1);
  cum_x_.resize(cells + 1);
  cum_[0] = 0.0;
  cum_x_[0] = 0.0;
  CompensatedSum mass_acc, xmass_acc;
  double err;
  for (int k = 0; k < cells; ++k) {
    const double a = node(k), b = node(k + 1);
    mass_acc.add(gk15_panel(pdf_, a, b, err));
    xmass_acc.add(gk15_panel([this](double t) { return t * pdf_(t); }, a, b,
                             err));
    cum_[k + 1] = mass_acc.value();
    cum_x_[k + 1] = xmass_acc.value();
  }
  mass_ = cum_.back();
  if (!(mass_ > 0.0) || !std::isfinite(mass_)) {
    throw NumericalError("NumericCdf: density mass is not positive");
  }
}

double NumericCdf::raw_cdf(double x) const {
  if (x <= -radius_) return 0.0;
  if (x >= radius_) return mass_;
  int k = static_cast<int>((x + radius_) / step_);
  k = std::clamp(k, 0, static_cast<int>(cum_.size()) - 2);
  double err;
  return cum_[k] + gk15_panel(pdf_, node(k), x, err);
}

double NumericCdf::cdf(double x) const { return raw_cdf(x) / mass_; }

double NumericCdf::quantile(double u) const {
  if (!(u > 0.0 && u < 1.0)) {
    throw FeasibilityError("quantile: u must lie in (0, 1)");
  }
  const double target = u * mass_;
  const int cells = static_cast<int>(cum_.size()) - 1;
  // First node with cumulative mass >= target.
  const auto it = std::lower_bound(cum_.begin(), cum_.end(), target);
  int k = std::clamp(static_cast<int>(it - cum_.begin()) - 1, 0, cells - 1);
  double lo = node(k), hi = node(k + 1);
  const double cell_mass = cum_[k + 1] - cum_[k];
  double x = (cell_mass > 0.0)
                 ? lo + step_ * (target - cum_[k]) / cell_mass
                 : 0.5 * (lo + hi);
  double err;
  for (int it_n = 0; it_n < 64; ++it_n) {
    const double g = cum_[k] + gk15_panel(pdf_, node(k), x, err) - target;
    if (g > 0.0) {
      hi = x;
    } else {
      lo = x;
    }
    if (std::abs(g) < 1e-15 * std::max(1.0, target) || hi - lo < 1e-16) break;
    const double slope = pdf_(x);
    double x_next = (slope > 0.0) ? x - g / slope : 0.5 * (lo + hi);
    if (!(x_next > lo && x_next < hi)) x_next = 0.5 * (lo + hi);
    if (x_next == x) break;
    x = x_next;
  }
  return x;
}

double NumericCdf::tail_mean(double u) const { return tail_mean(u, quantile(u)); }

double NumericCdf::tail_mean(double u, double q) const {
  if (!(u > 0.0 && u < 1.0)) {
    throw FeasibilityError("tail_mean: u must lie in (0, 1)");
  }
  double raw;
  if (q <= -radius_) {
    raw = 0.0;
  } else {
    const int cells = static_cast<int>(cum_.size()) - 1;
    int k = static_cast<int>((q + radius_) / step_);
    k = std::clamp(k, 0, cells - 1);
    double err;
    raw = cum_x_[k] +
          gk15_panel([this](double t) { return t * pdf_(t); }, node(k),
                     std::min(q, radius_), err);
  }
  return raw / mass_ / u;
}

}  // namespace lepto
