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

#include "lepto/margins.hpp"

#include <cmath>
#include <limits>

#include "lepto/errors.hpp"
#include "lepto/numeric/quadrature.hpp"
#include "lepto/numeric/special.hpp"

namespace lepto {

namespace {
constexpr double kHalfPi = 1.5707963267948966192313216916398;
}

double hs_pdf(double x) {
  // (1/2) sech(pi x / 2), written to avoid overflow of cosh for large |x|.
  const double t = kHalfPi * std::abs(x);
  const double e = std::exp(-t);
  return e / (1.0 + e * e);
}

double hs_log_pdf(double x) {
  const double t = kHalfPi * std::abs(x);
  return -t - std::log1p(std::exp(-2.0 * t));
}

double hs_cdf(double x) {
  // (2/pi) arctan(exp(pi x / 2)); reflect for x > 0 so the exponential
  // never overflows.
  if (x > 0.0) return 1.0 - hs_cdf(-x);
  return (2.0 / M_PI) * std::atan(std::exp(kHalfPi * x));
}

double hs_quantile(double u) {
  if (!(u > 0.0 && u < 1.0)) {
    throw FeasibilityError("hs_quantile: u must lie in (0, 1)");
  }
  if (u > 0.5) return -hs_quantile(1.0 - u);
  return std::log(std::tan(kHalfPi * u)) / kHalfPi;
}

double p4_hs(double x) {
  const double x2 = x * x;
  return (x2 - 14.0) * x2 + 9.0;
}

double p4_gauss(double x) {
  const double x2 = x * x;
  return (x2 - 6.0) * x2 + 3.0;
}

double hermite_he(int k, double x) {
  if (k < 0) throw FeasibilityError("hermite_he: negative order");
  double hkm1 = 0.0, hk = 1.0;
  for (int i = 0; i < k; ++i) {
    const double hkp1 = x * hk - i * hkm1;
    hkm1 = hk;
    hk = hkp1;
  }
  return hk;
}

namespace {

void check_beta(double beta, double max_beta, const char* what) {
  if (!(beta >= 0.0 && beta <= max_beta)) {
    throw FeasibilityError(std::string(what) + ": beta must lie in [0, " +
                           std::to_string(max_beta) + "], got " +
                           std::to_string(beta));
  }
}

}  // namespace

// The expansion evaluators are pure formulas: no beta validation and no
// clamping, so the raw value goes negative exactly where an infeasible
// beta makes the expansion dip below zero. Feasibility is enforced where
// specs enter models, in MarginSpec::validate.
double gchs_pdf(double x, double beta) {
  return (1.0 + (beta / 576.0) * p4_hs(x)) * hs_pdf(x);
}

double gchs_log_pdf(double x, double beta) {
  const double c = (beta / 576.0) * p4_hs(x);
  if (c <= -1.0) return -std::numeric_limits<double>::infinity();
  return hs_log_pdf(x) + std::log1p(c);
}

double gchs_cf(double omega, double beta) {
  const double t = std::tanh(omega);
  const double t2 = t * t;
  // sech in stable form.
  const double e = std::exp(-std::abs(omega));
  const double sech = 2.0 * e / (1.0 + e * e);
  return sech * (1.0 + (beta / 24.0) * t2 * t2);
}

double gcn_pdf(double x, double beta) {
  return (1.0 + (beta / 24.0) * p4_gauss(x)) * norm_pdf(x);
}

double gcn_log_pdf(double x, double beta) {
  const double c = (beta / 24.0) * p4_gauss(x);
  if (c <= -1.0) return -std::numeric_limits<double>::infinity();
  return -0.5 * x * x - 0.91893853320467274178032973640562 + std::log1p(c);
}

double gcn_cf(double omega, double beta) {
  const double w2 = omega * omega;
  return std::exp(-0.5 * w2) * (1.0 + (beta / 24.0) * w2 * w2);
}

std::string family_name(Family f) {
  return f == Family::HS ? "hs" : "gaussian";
}

Family family_from_name(const std::string& name) {
  if (name == "hs") return Family::HS;
  if (name == "gaussian" || name == "normal") return Family::Gaussian;
  throw InputError("unknown margin family: " + name);
}

void MarginSpec::validate() const {
  check_beta(beta, max_beta(),
             family == Family::HS ? "hs margin" : "gaussian margin");
}

double margin_pdf(double x, const MarginSpec& m) {
  return m.family == Family::HS ? gchs_pdf(x, m.beta) : gcn_pdf(x, m.beta);
}

double margin_log_pdf(double x, const MarginSpec& m) {
  return m.family == Family::HS ? gchs_log_pdf(x, m.beta)
                                : gcn_log_pdf(x, m.beta);
}

double margin_cf(double omega, const MarginSpec& m) {
  return m.family == Family::HS ? gchs_cf(omega, m.beta)
                                : gcn_cf(omega, m.beta);
}

double margin_p4(double x, Family f) {
  return f == Family::HS ? p4_hs(x) : p4_gauss(x);
}

Eigen::ArrayXd margin_pdf(const Eigen::Ref<const Eigen::ArrayXd>& x,
                          const MarginSpec& m) {
  m.validate();
  Eigen::ArrayXd out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = margin_pdf(x[i], m);
  return out;
}

Eigen::ArrayXd margin_log_pdf(const Eigen::Ref<const Eigen::ArrayXd>& x,
                              const MarginSpec& m) {
  m.validate();
  Eigen::ArrayXd out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = margin_log_pdf(x[i], m);
  return out;
}

MarginDistribution::MarginDistribution(MarginSpec m) : spec_(m) {
  spec_.validate();
  const MarginSpec spec = spec_;
  radius_ = truncation_radius([spec](double x) { return margin_pdf(x, spec); },
                              1e-18, 10.0);
  if (spec_.beta > 0.0) {
    table_ = std::make_shared<NumericCdf>(
        [spec](double x) { return margin_pdf(x, spec); }, radius_, 3000);
  }
}

double MarginDistribution::cdf(double x) const {
  if (table_) return table_->cdf(x);
  return spec_.family == Family::HS ? hs_cdf(x) : norm_cdf(x);
}

double MarginDistribution::quantile(double u) const {
  if (table_) return table_->quantile(u);
  return spec_.family == Family::HS ? hs_quantile(u) : norm_quantile(u);
}

}  // namespace lepto
