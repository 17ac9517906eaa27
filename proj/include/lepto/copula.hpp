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

#ifndef LEPTO_COPULA_HPP
#define LEPTO_COPULA_HPP

#include <Eigen/Dense>
#include <vector>

#include "lepto/sums.hpp"

namespace lepto {

// The polynomial factor r(x) = (x^2 - 1) / den(x) of the between-squares
// copula, with den = 4 + (beta/144) p4_hs for HS margins and
// 2 + (beta/12) p4_gauss for Gaussian margins. Even in x, zero at x = +-1,
// decaying to zero at infinity for beta > 0; for beta = 0 the denominator
// is constant and r grows without bound.
class RPolynomial {
 public:
  explicit RPolynomial(const MarginSpec& margin);

  double operator()(double x) const;
  const MarginSpec& margin() const { return margin_; }

  // Infimum (always finite and negative, attained on the scan range) and
  // supremum (+inf iff beta = 0).
  double inf() const { return inf_; }
  double sup() const { return sup_; }
  double max_abs() const { return std::max(-inf_, sup_); }

 private:
  MarginSpec margin_;
  double inf_;
  double sup_;
};

double r_eval(double x, const RPolynomial& rp);

// Feasibility interval for the gamma linking a margin pair: the copula
// factor 1 + gamma r_i(x) r_j(y) stays nonnegative for every (x, y) iff
// gamma lies in [-1/max(r-r-, r+r+), -1/min(r-r+, r+r-)]. Zero is always
// inside; an unbounded r collapses the interval to {0}.
struct GammaBounds {
  double lower = 0.0;
  double upper = 0.0;
  bool contains(double gamma) const {
    return gamma >= lower - 1e-12 && gamma <= upper + 1e-12;
  }
};

GammaBounds gamma_bounds(const RPolynomial& ri, const RPolynomial& rj);

// Chain copula over consecutive margin pairs with cached r-polynomials and
// feasibility bounds. Construction validates every gamma.
class Copula {
 public:
  explicit Copula(const SumSpec& spec);

  const SumSpec& spec() const { return spec_; }
  const std::vector<RPolynomial>& r() const { return r_; }
  const std::vector<GammaBounds>& bounds() const { return bounds_; }

  double density(const Eigen::Ref<const Eigen::ArrayXd>& x) const;

 private:
  SumSpec spec_;
  std::vector<RPolynomial> r_;
  std::vector<GammaBounds> bounds_;
};

// Throws FeasibilityError naming the offending pair and its bounds.
void validate_gammas(const SumSpec& spec);

double copula_density(const Eigen::Ref<const Eigen::ArrayXd>& x,
                      const SumSpec& spec);

// Product of margin densities times the copula density.
double joint_pdf(const Eigen::Ref<const Eigen::ArrayXd>& x,
                 const SumSpec& spec);

// Density of the portfolio sum by tensorized adaptive quadrature over the
// hyperplane sum(x) = y. Supports n in {2, 3}; larger n must use the Monte
// Carlo fallback or the grid evaluator in PortfolioModel.
double portfolio_pdf(double y, const SumSpec& spec);

// Monte Carlo fallback for n > 3: kernel density estimate over sampled
// sums. Accuracy is O(draws^(-2/5)); intended for smoke checks, not risk
// numbers.
double portfolio_pdf_mc(double y, const SumSpec& spec, std::uint64_t seed,
                        int draws = 200000);

// Rejection sampling against the independence proposal, factor-wise
// envelope 1 + |gamma_i| max|r_i| max|r_i+1|. Deterministic given seed.
Eigen::MatrixXd joint_sample(const SumSpec& spec, std::uint64_t seed,
                             int count);

}  // namespace lepto

#endif  // LEPTO_COPULA_HPP
