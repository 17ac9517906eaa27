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

#include "lepto/portfolio.hpp"

#include <array>
#include <cmath>
#include <vector>

#include "lepto/copula.hpp"
#include "lepto/errors.hpp"
#include "lepto/numeric/grid_density.hpp"
#include "lepto/numeric/quadrature.hpp"
#include "lepto/numeric/rng.hpp"

namespace lepto {

namespace {

std::vector<double> margin_betas(const SumSpec& spec) {
  std::vector<double> betas;
  betas.reserve(spec.margins.size());
  for (const MarginSpec& m : spec.margins) betas.push_back(m.beta);
  return betas;
}

// Sum density on a shared grid: expand the copula product into subsets of
// active pairs, convolve the per-margin arrays pdf * r^e of each term, and
// accumulate. Independent mixed-family sums are the empty-subset special
// case.
GridDensity sum_grid(const SumSpec& spec, const Copula& cop) {
  const int n = spec.size();
  double half_width = 6.0;
  for (const MarginSpec& m : spec.margins)
    half_width +=
        truncation_radius([m](double x) { return margin_pdf(x, m); }, 1e-16,
                          10.0);
  const int cells = n <= 3 ? 8192 : 16384;
  Eigen::ArrayXd grid(cells);
  for (int k = 0; k < cells; ++k)
    grid[k] = -half_width + 2.0 * half_width * k / cells;

  // weight[i][e] = margin pdf times r^e on the grid, filled on demand.
  std::vector<std::array<Eigen::ArrayXd, 3>> weight(n);
  std::vector<std::array<bool, 3>> have(n, {false, false, false});
  const auto margin_array = [&](int i, int e) -> const Eigen::ArrayXd& {
    if (!have[i][e]) {
      if (!have[i][0]) {
        weight[i][0] = margin_pdf(grid, spec.margins[i]);
        have[i][0] = true;
      }
      if (e > 0) {
        Eigen::ArrayXd r(cells);
        for (int k = 0; k < cells; ++k) r[k] = cop.r()[i](grid[k]);
        weight[i][e] = e == 1 ? (weight[i][0] * r).eval()
                              : (weight[i][0] * r * r).eval();
        have[i][e] = true;
      }
    }
    return weight[i][e];
  };

  const int pairs = n - 1;
  Eigen::ArrayXd acc = Eigen::ArrayXd::Zero(cells);
  for (int mask = 0; mask < (1 << pairs); ++mask) {
    double coef = 1.0;
    for (int p = 0; p < pairs; ++p)
      if (mask & (1 << p)) coef *= spec.gammas.empty() ? 0.0 : spec.gammas[p];
    if (coef == 0.0 && mask != 0) continue;
    std::vector<Eigen::ArrayXd> factors;
    factors.reserve(n);
    for (int i = 0; i < n; ++i) {
      int e = 0;
      if (i > 0 && (mask & (1 << (i - 1)))) ++e;
      if (i < pairs && (mask & (1 << i))) ++e;
      factors.push_back(margin_array(i, e));
    }
    acc += coef * convolve_on_grid(factors, half_width);
  }
  acc = acc.max(0.0);

  const double mass = acc.sum() * (2.0 * half_width / cells);
  if (std::abs(mass - 1.0) > 1e-8)
    throw NumericalError("portfolio grid mass off by " +
                         std::to_string(mass - 1.0));
  return GridDensity(acc, half_width);
}

}  // namespace

PortfolioModel::PortfolioModel(SumSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  name_ = model_name(spec_);
  const int n = spec_.size();
  double start = 4.0 + 2.0 * n;

  bool dependent = false;
  for (double g : spec_.gammas) dependent |= g != 0.0;

  if (n == 1) {
    const MarginSpec m = spec_.margins[0];
    pdf_ = [m](double y) { return margin_pdf(y, m); };
    start = 12.0;
  } else if (!dependent && spec_.all_family(Family::HS)) {
    auto table = std::make_shared<const CoeffTable>(
        delta_coeffs(n, b_coeffs(margin_betas(spec_))));
    pdf_ = [table, n](double y) { return sgchs_pdf(y, n, *table); };
    start = 8.0 * n;
  } else if (!dependent && spec_.all_family(Family::Gaussian)) {
    auto b = std::make_shared<const BVector>(b_coeffs(margin_betas(spec_)));
    pdf_ = [b, n](double y) { return sgcn_pdf(y, n, *b); };
  } else {
    const Copula cop(spec_);
    auto grid = std::make_shared<const GridDensity>(sum_grid(spec_, cop));
    pdf_ = [grid](double y) { return std::max(0.0, (*grid)(y)); };
    start = grid->half_width() / 2.0;
  }

  radius_ = truncation_radius(pdf_, 1e-18, start);
  table_ = std::make_shared<const NumericCdf>(pdf_, radius_, 4000);
}

double PortfolioModel::var(double alpha) const {
  if (!(alpha > 0.0 && alpha <= 0.5))
    throw InputError("var: alpha must lie in (0, 0.5]");
  return quantile(alpha);
}

double PortfolioModel::es(double alpha) const {
  if (!(alpha > 0.0 && alpha <= 0.5))
    throw InputError("es: alpha must lie in (0, 0.5]");
  return table_->tail_mean(alpha, quantile(alpha));
}

Eigen::ArrayXd PortfolioModel::sample_sums(std::uint64_t seed,
                                           int count) const {
  Rng rng(seed);
  Eigen::ArrayXd out(count);
  for (int i = 0; i < count; ++i) out[i] = quantile(rng.u01());
  return out;
}

}  // namespace lepto
