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

#ifndef LEPTO_SUMS_HPP
#define LEPTO_SUMS_HPP

#include <string>
#include <vector>

#include "lepto/coeffs.hpp"
#include "lepto/margins.hpp"

namespace lepto {

// A portfolio-return model: the sum of standardized margins, optionally
// chained by between-squares correlations gamma_i linking margins i and
// i+1. Empty gammas means independence.
struct SumSpec {
  std::vector<MarginSpec> margins;
  std::vector<double> gammas;

  int size() const { return static_cast<int>(margins.size()); }
  bool has_copula() const { return !gammas.empty(); }
  bool all_family(Family f) const;
  // Margin feasibility and gamma count; gamma ranges are a copula-module
  // concern (they depend on the r-polynomial bounds).
  void validate() const;

  static SumSpec margin(MarginSpec m);
  static SumSpec iid(Family family, double beta, int n);
  static SumSpec independent(std::vector<MarginSpec> margins);
  static SumSpec with_copula(std::vector<MarginSpec> margins,
                             std::vector<double> gammas);
};

// Short display name: HS, GCHS, CLH, SGCHS, SGCN, SGCHSN, with -C when a
// copula is attached.
std::string model_name(const SumSpec& spec);

// Two-fold HS convolution, (y/2) csch(pi y / 2); the y = 0 singularity is
// removable and evaluated by series.
double clh_pdf(double y);

// Density of the sum of n independent standardized HS variables.
double sum_hs_pdf(double y, int n);

// Sum of independent HS-family margins, evaluated through either signed
// coefficient form. Requires all margins HS and no gammas.
double sgchs_pdf(double y, const SumSpec& spec,
                 CoeffForm form = CoeffForm::Delta);
// Same density with the coefficient table precomputed; for callers that
// evaluate many points of one spec.
double sgchs_pdf(double y, int n, const CoeffTable& table);

// Probabilists' Hermite polynomial of degree 4j.
double hermite_p4j(double z, int j);

// Sum of independent Gaussian-family margins (variance n scale).
double sgcn_pdf(double y, const SumSpec& spec);
double sgcn_pdf(double y, int n, const BVector& b);

// Sum of independent margins of mixed families: the HS-family block and the
// Gaussian-family block are each evaluated in closed form and convolved
// numerically. Degenerate mixes fall back to the closed forms.
double mixed_sum_pdf(double y, const SumSpec& spec);

// Independent-sum density for any margin combination (dispatches to the
// closed forms or the mixed convolution).
double independent_sum_pdf(double y, const SumSpec& spec);

// Monte Carlo draws. Margins sample by inverse CDF; independent sums add
// margin draws; copula specs delegate to joint sampling.
Eigen::ArrayXd sample(const MarginSpec& spec, std::uint64_t seed, int count);
Eigen::ArrayXd sample(const SumSpec& spec, std::uint64_t seed, int count);

// k-th raw moment by adaptive quadrature, k <= 8.
double numeric_moment(const MarginSpec& spec, int k);
double numeric_moment(const SumSpec& spec, int k);

}  // namespace lepto

#endif  // LEPTO_SUMS_HPP
