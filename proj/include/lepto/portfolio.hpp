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

#ifndef LEPTO_PORTFOLIO_HPP
#define LEPTO_PORTFOLIO_HPP

#include <functional>
#include <memory>
#include <string>

#include "lepto/numeric/cdf_table.hpp"
#include "lepto/sums.hpp"

namespace lepto {

// Cached evaluator for the distribution of the portfolio sum. Construction
// picks the cheapest exact path for the spec: closed forms for single
// margins and one-family independent sums, an FFT convolution grid for
// mixed-family sums, and the separable expansion of the copula chain
// (each factor 1 + gamma_i r_i r_i+1 splits the joint density into
// 2^(n-1) products of per-margin weights 1, r, r^2) for dependent sums.
// CDF, quantile, VaR and ES come from one numeric CDF table over the
// density.
class PortfolioModel {
 public:
  explicit PortfolioModel(SumSpec spec);

  const SumSpec& spec() const { return spec_; }
  const std::string& name() const { return name_; }
  double radius() const { return radius_; }

  double pdf(double y) const { return pdf_(y); }
  double cdf(double y) const { return table_->cdf(y); }
  double quantile(double u) const { return table_->quantile(u); }

  // Signed lower-tail quantities, alpha in (0, 0.5].
  double var(double alpha) const;
  double es(double alpha) const;

  // Inverse-CDF draws of the portfolio sum. Deterministic given seed and
  // distributionally identical to summing joint_sample columns.
  Eigen::ArrayXd sample_sums(std::uint64_t seed, int count) const;

 private:
  SumSpec spec_;
  std::string name_;
  std::function<double(double)> pdf_;
  double radius_ = 0.0;
  std::shared_ptr<const NumericCdf> table_;
};

}  // namespace lepto

#endif  // LEPTO_PORTFOLIO_HPP
