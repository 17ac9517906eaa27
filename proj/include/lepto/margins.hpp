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

#ifndef LEPTO_MARGINS_HPP
#define LEPTO_MARGINS_HPP

#include <Eigen/Dense>
#include <memory>
#include <string>

#include "lepto/numeric/cdf_table.hpp"

namespace lepto {

// Standardized hyperbolic-secant law: density (1/2) sech(pi x / 2), zero
// mean, unit variance, kurtosis 5.
double hs_pdf(double x);
double hs_log_pdf(double x);
double hs_cdf(double x);
double hs_quantile(double u);

// Fourth-degree expansion polynomials. p4_hs is orthogonal to {1, x, x^2,
// x^3} under the HS weight with norm E[p4(X)^2] = 576; p4_gauss is the
// fourth probabilists' Hermite polynomial (norm 24 under the Gaussian).
double p4_hs(double x);     // x^4 - 14 x^2 + 9
double p4_gauss(double x);  // x^4 - 6 x^2 + 3

// Probabilists' Hermite polynomial He_k by the three-term recurrence.
double hermite_he(int k, double x);

// Fourth-order expansions around each parent. beta is the excess kurtosis
// over the parent's; the density stays nonnegative iff beta lies in
// [0, 14.4] (HS parent) or [0, 4] (Gaussian parent).
double gchs_pdf(double x, double beta);
double gchs_log_pdf(double x, double beta);
double gchs_cf(double omega, double beta);
double gcn_pdf(double x, double beta);
double gcn_log_pdf(double x, double beta);
double gcn_cf(double omega, double beta);

enum class Family { HS, Gaussian };

std::string family_name(Family f);
Family family_from_name(const std::string& name);

struct MarginSpec {
  Family family = Family::HS;
  double beta = 0.0;

  // Largest beta keeping the expansion a density.
  double max_beta() const { return family == Family::HS ? 14.4 : 4.0; }
  // Largest beta keeping the density unimodal.
  double unimodal_beta() const { return family == Family::HS ? 9.71 : 2.4; }
  bool unimodal() const { return beta <= unimodal_beta() + 1e-12; }
  // Normalizer of the beta * p4 term: density = (1 + beta/p4_scale * p4).
  double p4_scale() const { return family == Family::HS ? 576.0 : 24.0; }
  void validate() const;  // throws FeasibilityError naming the bound
};

double margin_pdf(double x, const MarginSpec& m);
double margin_log_pdf(double x, const MarginSpec& m);
double margin_cf(double omega, const MarginSpec& m);
double margin_p4(double x, Family f);

Eigen::ArrayXd margin_pdf(const Eigen::Ref<const Eigen::ArrayXd>& x,
                          const MarginSpec& m);
Eigen::ArrayXd margin_log_pdf(const Eigen::Ref<const Eigen::ArrayXd>& x,
                              const MarginSpec& m);

// One margin with CDF/quantile access. Closed forms for the beta = 0
// parents, a cached numeric table otherwise. Copies share the table.
class MarginDistribution {
 public:
  explicit MarginDistribution(MarginSpec m);

  const MarginSpec& spec() const { return spec_; }
  double pdf(double x) const { return margin_pdf(x, spec_); }
  double cdf(double x) const;
  double quantile(double u) const;
  double radius() const { return radius_; }

 private:
  MarginSpec spec_;
  double radius_;
  std::shared_ptr<const NumericCdf> table_;  // null when closed forms apply
};

}  // namespace lepto

#endif  // LEPTO_MARGINS_HPP
