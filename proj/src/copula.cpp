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

#include "lepto/copula.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "lepto/errors.hpp"
#include "lepto/numeric/quadrature.hpp"
#include "lepto/numeric/rng.hpp"
#include "lepto/numeric/roots.hpp"

namespace lepto {

namespace {

double r_den_scale(Family f) { return f == Family::HS ? 4.0 : 2.0; }

// For beta > 0 the denominator grows like (c beta / scale) x^4, so the
// extrema of r sit below x ~ (scale / beta)^(1/4) up to a modest factor.
double scan_limit(const MarginSpec& m) {
  const double reach =
      3.0 * std::pow(r_den_scale(m.family) * m.p4_scale() / m.beta, 0.25);
  return std::clamp(reach, 40.0, 2000.0);
}

}  // namespace

RPolynomial::RPolynomial(const MarginSpec& margin) : margin_(margin) {
  margin_.validate();
  const double scale = r_den_scale(margin_.family);
  if (margin_.beta == 0.0) {
    // r = (x^2 - 1) / c: minimum at x = 0, unbounded above.
    inf_ = -1.0 / scale;
    sup_ = std::numeric_limits<double>::infinity();
    return;
  }
  // The denominator's global minimum is scale * (1 - beta / max_beta), the
  // same factor that takes the density to zero at the feasibility boundary.
  // When it vanishes r has a pole, so the supremum is infinite and only the
  // negative part (confined to |x| < 1, where the denominator stays away
  // from zero) needs a scan.
  const bool bounded =
      scale * (1.0 - margin_.beta / margin_.max_beta()) > 1e-12 * scale;
  const double x_max = bounded ? scan_limit(margin_) : 1.0;
  const int cells = 8000;
  int arg_min = 0;
  int arg_max = 0;
  double lo = (*this)(0.0);
  double hi = lo;
  for (int i = 1; i <= cells; ++i) {
    const double v = (*this)(x_max * i / cells);
    if (v < lo) {
      lo = v;
      arg_min = i;
    }
    if (v > hi) {
      hi = v;
      arg_max = i;
    }
  }
  const auto refine = [&](int idx, double sign) {
    const double a = x_max * std::max(0, idx - 1) / cells;
    const double b = x_max * std::min(cells, idx + 1) / cells;
    return minimize([&](double x) { return sign * (*this)(x); }, a, b).second;
  };
  inf_ = std::min(lo, refine(arg_min, 1.0));
  sup_ = bounded ? std::max(hi, -refine(arg_max, -1.0))
                 : std::numeric_limits<double>::infinity();
}

double RPolynomial::operator()(double x) const {
  const double num = x * x - 1.0;
  const double bracket =
      1.0 + (margin_.beta / margin_.p4_scale()) * margin_p4(x, margin_.family);
  return num / (r_den_scale(margin_.family) * bracket);
}

double r_eval(double x, const RPolynomial& rp) { return rp(x); }

GammaBounds gamma_bounds(const RPolynomial& ri, const RPolynomial& rj) {
  // Products of same-sign extremes bound r_i r_j above, mixed-sign products
  // bound it below; r^- < 0 < r^+ always holds (r(0) < 0, r > 0 past 1).
  const double top = std::max(ri.inf() * rj.inf(), ri.sup() * rj.sup());
  const double bottom = std::min(ri.inf() * rj.sup(), ri.sup() * rj.inf());
  GammaBounds out;
  out.lower = std::isinf(top) ? 0.0 : -1.0 / top;
  out.upper = std::isinf(bottom) ? 0.0 : -1.0 / bottom;
  out.lower += 0.0;  // normalize -0
  out.upper += 0.0;
  return out;
}

Copula::Copula(const SumSpec& spec) : spec_(spec) {
  spec_.validate();
  r_.reserve(spec_.margins.size());
  for (const MarginSpec& m : spec_.margins) r_.emplace_back(m);
  for (std::size_t i = 0; i + 1 < spec_.margins.size(); ++i) {
    bounds_.push_back(gamma_bounds(r_[i], r_[i + 1]));
    const double g = spec_.has_copula() ? spec_.gammas[i] : 0.0;
    if (!bounds_[i].contains(g)) {
      std::ostringstream msg;
      msg << "gamma[" << i << "] = " << g << " outside feasibility bounds ["
          << bounds_[i].lower << ", " << bounds_[i].upper
          << "] for margin pair (" << i << ", " << i + 1 << ")";
      throw FeasibilityError(msg.str());
    }
  }
}

double Copula::density(const Eigen::Ref<const Eigen::ArrayXd>& x) const {
  const int n = spec_.size();
  if (x.size() != n) throw InputError("copula density: dimension mismatch");
  if (!spec_.has_copula()) return 1.0;
  Eigen::ArrayXd rv(n);
  for (int i = 0; i < n; ++i) rv[i] = r_[i](x[i]);
  double prod = 1.0;
  for (int i = 0; i + 1 < n; ++i)
    prod *= 1.0 + spec_.gammas[i] * rv[i] * rv[i + 1];
  return std::max(0.0, prod);
}

void validate_gammas(const SumSpec& spec) { (void)Copula(spec); }

double copula_density(const Eigen::Ref<const Eigen::ArrayXd>& x,
                      const SumSpec& spec) {
  return Copula(spec).density(x);
}

double joint_pdf(const Eigen::Ref<const Eigen::ArrayXd>& x,
                 const SumSpec& spec) {
  const Copula cop(spec);
  double f = cop.density(x);
  for (int i = 0; i < spec.size(); ++i)
    f *= margin_pdf(x[i], spec.margins[i]);
  return f;
}

namespace {

Eigen::ArrayXd margin_radii(const SumSpec& spec, double cutoff) {
  Eigen::ArrayXd radii(spec.size());
  for (int i = 0; i < spec.size(); ++i) {
    const MarginSpec m = spec.margins[i];
    radii[i] = truncation_radius([m](double x) { return margin_pdf(x, m); },
                                 cutoff, 10.0);
  }
  return radii;
}

}  // namespace

double portfolio_pdf(double y, const SumSpec& spec) {
  spec.validate();
  const int n = spec.size();
  if (n == 1) return margin_pdf(y, spec.margins[0]);
  if (n > 3)
    throw FeasibilityError(
        "portfolio_pdf: quadrature supports n <= 3 margins; use the Monte "
        "Carlo fallback for higher dimensions");
  const Copula cop(spec);
  const Eigen::ArrayXd radii = margin_radii(spec, 1e-14);
  const auto joint = [&](const Eigen::ArrayXd& x) {
    double f = cop.density(x);
    for (int i = 0; i < n; ++i) f *= margin_pdf(x[i], spec.margins[i]);
    return f;
  };
  if (n == 2) {
    const double a = std::max(-radii[0], y - radii[1]);
    const double b = std::min(radii[0], y + radii[1]);
    if (a >= b) return 0.0;
    return integrate(
        [&](double x0) {
          Eigen::ArrayXd x(2);
          x << x0, y - x0;
          return joint(x);
        },
        a, b, 1e-12, 1e-10);
  }
  const double a0 = std::max(-radii[0], y - radii[1] - radii[2]);
  const double b0 = std::min(radii[0], y + radii[1] + radii[2]);
  if (a0 >= b0) return 0.0;
  return integrate(
      [&](double x0) {
        const double a1 = std::max(-radii[1], y - x0 - radii[2]);
        const double b1 = std::min(radii[1], y - x0 + radii[2]);
        if (a1 >= b1) return 0.0;
        return integrate(
            [&](double x1) {
              Eigen::ArrayXd x(3);
              x << x0, x1, y - x0 - x1;
              return joint(x);
            },
            a1, b1, 1e-12, 1e-10);
      },
      a0, b0, 1e-11, 1e-9);
}

double portfolio_pdf_mc(double y, const SumSpec& spec, std::uint64_t seed,
                        int draws) {
  if (draws < 100) throw InputError("portfolio_pdf_mc: too few draws");
  const Eigen::ArrayXd sums = joint_sample(spec, seed, draws).rowwise().sum();
  const double sd = std::sqrt(sums.square().mean() -
                              sums.mean() * sums.mean());
  const double h = 1.06 * sd * std::pow(double(draws), -0.2);
  const Eigen::ArrayXd z = (sums - y) / h;
  return (-0.5 * z.square()).exp().mean() / (h * std::sqrt(2.0 * M_PI));
}

Eigen::MatrixXd joint_sample(const SumSpec& spec, std::uint64_t seed,
                             int count) {
  if (count < 0) throw InputError("joint_sample: negative count");
  const Copula cop(spec);
  const int n = spec.size();
  std::vector<MarginDistribution> dist;
  dist.reserve(n);
  for (const MarginSpec& m : spec.margins) dist.emplace_back(m);
  // Envelope over the independence proposal; pairs with gamma = 0
  // contribute factor 1, so beta = 0 margins (unbounded r) stay finite.
  double envelope = 1.0;
  for (int i = 0; i + 1 < n; ++i) {
    const double g = spec.has_copula() ? spec.gammas[i] : 0.0;
    if (g != 0.0)
      envelope *= 1.0 + std::abs(g) * cop.r()[i].max_abs() *
                            cop.r()[i + 1].max_abs();
  }
  Rng rng(seed);
  Eigen::MatrixXd out(count, n);
  Eigen::ArrayXd x(n);
  int row = 0;
  while (row < count) {
    for (int i = 0; i < n; ++i) x[i] = dist[i].quantile(rng.u01());
    if (rng.u01() * envelope <= cop.density(x)) {
      out.row(row) = x.transpose();
      ++row;
    }
  }
  return out;
}

}  // namespace lepto
