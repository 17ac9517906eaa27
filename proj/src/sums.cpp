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

#include "lepto/sums.hpp"

#include <algorithm>
#include <cmath>

#include "lepto/copula.hpp"
#include "lepto/errors.hpp"
#include "lepto/numeric/quadrature.hpp"
#include "lepto/numeric/rng.hpp"
#include "lepto/numeric/special.hpp"
#include "lepto/portfolio.hpp"

namespace lepto {

bool SumSpec::all_family(Family f) const {
  return std::all_of(margins.begin(), margins.end(),
                     [f](const MarginSpec& m) { return m.family == f; });
}

void SumSpec::validate() const {
  if (margins.empty()) {
    throw FeasibilityError("SumSpec: needs at least one margin");
  }
  for (const auto& m : margins) m.validate();
  if (!gammas.empty() &&
      gammas.size() != margins.size() - 1) {
    throw FeasibilityError(
        "SumSpec: gammas must chain consecutive margins (need n - 1)");
  }
}

SumSpec SumSpec::margin(MarginSpec m) { return {{m}, {}}; }

SumSpec SumSpec::iid(Family family, double beta, int n) {
  if (n < 1) throw FeasibilityError("SumSpec: n must be positive");
  return {std::vector<MarginSpec>(n, MarginSpec{family, beta}), {}};
}

SumSpec SumSpec::independent(std::vector<MarginSpec> margins) {
  return {std::move(margins), {}};
}

SumSpec SumSpec::with_copula(std::vector<MarginSpec> margins,
                             std::vector<double> gammas) {
  return {std::move(margins), std::move(gammas)};
}

std::string model_name(const SumSpec& spec) {
  std::string base;
  const bool hs = spec.all_family(Family::HS);
  const bool gauss = spec.all_family(Family::Gaussian);
  const bool zero_beta = std::all_of(
      spec.margins.begin(), spec.margins.end(),
      [](const MarginSpec& m) { return m.beta == 0.0; });
  if (spec.size() == 1) {
    base = hs ? (zero_beta ? "HS" : "GCHS") : (zero_beta ? "N" : "GCN");
  } else if (hs) {
    base = (zero_beta && spec.size() == 2) ? "CLH" : "SGCHS";
  } else if (gauss) {
    base = "SGCN";
  } else {
    base = "SGCHSN";
  }
  if (spec.has_copula()) base += "-C";
  return base;
}

double clh_pdf(double y) {
  const double z = 0.5 * M_PI * std::abs(y);
  if (z < 1e-4) {
    // (1/pi) z/sinh(z) expanded; the y = 0 value is 1/pi.
    const double z2 = z * z;
    return (1.0 - z2 / 6.0 + 7.0 * z2 * z2 / 360.0) / M_PI;
  }
  const double e = std::exp(-z);
  return std::abs(y) * e / (1.0 - e * e);
}

namespace {

constexpr double kLog4 = 1.3862943611198906188344642429164;

// sum_s w_s K_{m+s}(y) * base(y), where K_M are the n-fold HS sum kernels
// of matching parity. Kernel log-magnitudes are built from one cumulative
// pass over the quadratic factors; the signed weights then accumulate via
// compensated summation. Densities are nonnegative by construction
// (convolutions of densities), so the result is clamped at zero.
double kernel_series(double y, int n, const std::vector<LogSigned>& w) {
  const bool even = (n % 2 == 0);
  const int m = even ? n / 2 : (n - 1) / 2;
  const int s_max = static_cast<int>(w.size()) - 1;
  const double y2q = 0.25 * y * y;
  const int t_max = even ? m + s_max - 1 : m + s_max;
  std::vector<double> cum(t_max + 1, 0.0);
  for (int t = 1; t <= t_max; ++t) {
    const double c = even ? static_cast<double>(t)
                          : 0.5 * (2.0 * t - 1.0);
    cum[t] = cum[t - 1] + std::log(y2q + c * c);
  }
  LogSignedSum acc;
  for (int s = 0; s <= s_max; ++s) {
    if (w[s].sign == 0) continue;
    const int order = m + s;
    const double log_k =
        even ? (order - 1) * kLog4 - std::lgamma(2.0 * order) + cum[order - 1]
             : order * kLog4 - std::lgamma(2.0 * order + 1.0) + cum[order];
    acc.add(w[s] * LogSigned::from_log(log_k, 1));
  }
  const double base = even ? clh_pdf(y) : hs_pdf(y);
  return std::max(0.0, base * acc.value());
}

std::vector<double> margin_betas(const SumSpec& spec) {
  std::vector<double> betas;
  betas.reserve(spec.margins.size());
  for (const auto& m : spec.margins) betas.push_back(m.beta);
  return betas;
}

void require_independent(const SumSpec& spec, Family f, const char* what) {
  spec.validate();
  if (spec.has_copula()) {
    throw FeasibilityError(std::string(what) +
                           ": expects an independence spec (no gammas)");
  }
  if (!spec.all_family(f)) {
    throw FeasibilityError(std::string(what) + ": wrong margin family");
  }
}

// He_0..He_kmax at z as (sign, log magnitude), by the recurrence with
// periodic rescaling; high orders overflow doubles long before the
// combined sum terms do.
std::vector<LogSigned> hermite_all_log(int k_max, double z) {
  std::vector<LogSigned> out(k_max + 1);
  double prev = 0.0, cur = 1.0, offset = 0.0;
  out[0] = LogSigned::from_log(0.0, 1);
  for (int k = 0; k < k_max; ++k) {
    const double next = z * cur - k * prev;
    prev = cur;
    cur = next;
    const double mag = std::max(std::abs(prev), std::abs(cur));
    if (mag > 1e250) {
      prev *= 1e-250;
      cur *= 1e-250;
      offset += 575.6462732485114210;  // log(1e250)
    } else if (mag > 0.0 && mag < 1e-250) {
      prev *= 1e250;
      cur *= 1e250;
      offset -= 575.6462732485114210;
    }
    if (cur != 0.0) {
      out[k + 1] = LogSigned::from_log(std::log(std::abs(cur)) + offset,
                                       cur > 0.0 ? 1 : -1);
    }
  }
  return out;
}

double sgcn_eval(double y, int n, const BVector& b) {
  const double sigma = std::sqrt(static_cast<double>(n));
  const double z = y / sigma;
  const auto he = hermite_all_log(4 * n, z);
  const double log_n = std::log(static_cast<double>(n));
  LogSignedSum acc;
  for (int j = 0; j <= n; ++j) {
    if (b.b[j] == 0.0) continue;
    acc.add(LogSigned::from(b.b[j]) *
            LogSigned::from_log(-2.0 * j * log_n, 1) * he[4 * j]);
  }
  return std::max(0.0, acc.value() * norm_pdf(z) / sigma);
}

}  // namespace

double sum_hs_pdf(double y, int n) {
  if (n < 1) throw FeasibilityError("sum_hs_pdf: n must be positive");
  return kernel_series(y, n, {LogSigned::from(1.0)});
}

double sgchs_pdf(double y, const SumSpec& spec, CoeffForm form) {
  require_independent(spec, Family::HS, "sgchs_pdf");
  const int n = spec.size();
  const BVector b = b_coeffs(margin_betas(spec));
  const CoeffTable table =
      form == CoeffForm::Delta ? delta_coeffs(n, b) : theta_coeffs(n, b);
  return kernel_series(y, n, table.shift_weights());
}

double sgchs_pdf(double y, int n, const CoeffTable& table) {
  return kernel_series(y, n, table.shift_weights());
}

double hermite_p4j(double z, int j) {
  if (j < 0) throw FeasibilityError("hermite_p4j: negative order");
  return hermite_he(4 * j, z);
}

double sgcn_pdf(double y, const SumSpec& spec) {
  require_independent(spec, Family::Gaussian, "sgcn_pdf");
  return sgcn_eval(y, spec.size(), b_coeffs(margin_betas(spec)));
}

double sgcn_pdf(double y, int n, const BVector& b) {
  return sgcn_eval(y, n, b);
}

namespace {

// One closed-form family block of an independent mixed sum.
struct FamilyBlock {
  SumSpec spec;
  double radius = 0.0;

  double pdf(double y) const {
    if (spec.margins.empty()) return 0.0;
    return spec.all_family(Family::HS) ? sgchs_pdf(y, spec)
                                       : sgcn_pdf(y, spec);
  }
};

FamilyBlock make_block(const SumSpec& spec, Family f) {
  FamilyBlock block;
  for (const auto& m : spec.margins) {
    if (m.family == f) block.spec.margins.push_back(m);
  }
  if (!block.spec.margins.empty()) {
    block.radius = truncation_radius(
        [&block](double y) { return block.pdf(y); }, 1e-18,
        4.0 + 2.0 * block.spec.size());
  }
  return block;
}

}  // namespace

double mixed_sum_pdf(double y, const SumSpec& spec) {
  spec.validate();
  if (spec.has_copula()) {
    throw FeasibilityError("mixed_sum_pdf: expects an independence spec");
  }
  const FamilyBlock hs = make_block(spec, Family::HS);
  const FamilyBlock gauss = make_block(spec, Family::Gaussian);
  if (gauss.spec.margins.empty()) return hs.pdf(y);
  if (hs.spec.margins.empty()) return gauss.pdf(y);

  // Point convolution of the two block densities. The integrand vanishes
  // outside the overlap of the block supports; callers that need a whole
  // curve should build a PortfolioModel, which grids the sum once.
  const double lo = std::max(-hs.radius, y - gauss.radius);
  const double hi = std::min(hs.radius, y + gauss.radius);
  if (lo >= hi) return 0.0;
  return std::max(
      0.0, integrate([&](double x) { return hs.pdf(x) * gauss.pdf(y - x); },
                     lo, hi, 1e-12, 1e-12, 2000));
}

double independent_sum_pdf(double y, const SumSpec& spec) {
  spec.validate();
  if (spec.has_copula()) {
    throw FeasibilityError("independent_sum_pdf: spec carries gammas");
  }
  if (spec.size() == 1) return margin_pdf(y, spec.margins.front());
  if (spec.all_family(Family::HS)) return sgchs_pdf(y, spec);
  if (spec.all_family(Family::Gaussian)) return sgcn_pdf(y, spec);
  return mixed_sum_pdf(y, spec);
}

Eigen::ArrayXd sample(const MarginSpec& spec, std::uint64_t seed, int count) {
  if (count < 0) throw FeasibilityError("sample: negative count");
  const MarginDistribution dist(spec);
  Rng rng(seed);
  Eigen::ArrayXd out(count);
  for (int i = 0; i < count; ++i) out[i] = dist.quantile(rng.u01());
  return out;
}

Eigen::ArrayXd sample(const SumSpec& spec, std::uint64_t seed, int count) {
  spec.validate();
  if (count < 0) throw FeasibilityError("sample: negative count");
  if (spec.has_copula()) {
    return joint_sample(spec, seed, count).rowwise().sum().array();
  }
  Eigen::ArrayXd out = Eigen::ArrayXd::Zero(count);
  Rng rng(seed);
  for (int i = 0; i < spec.size(); ++i) {
    const MarginDistribution dist(spec.margins[i]);
    Rng stream = rng.substream(i);
    for (int t = 0; t < count; ++t) out[t] += dist.quantile(stream.u01());
  }
  return out;
}

namespace {

double moment_of(const std::function<double(double)>& pdf, int k) {
  if (k < 0 || k > 8) {
    throw FeasibilityError("numeric_moment: order must lie in [0, 8]");
  }
  return integrate_line(
      [&pdf, k](double x) { return std::pow(x, k) * pdf(x); }, 1e-10, 1e-10,
      1e-18);
}

}  // namespace

double numeric_moment(const MarginSpec& spec, int k) {
  spec.validate();
  return moment_of([&spec](double x) { return margin_pdf(x, spec); }, k);
}

double numeric_moment(const SumSpec& spec, int k) {
  spec.validate();
  if (!spec.has_copula()) {
    return moment_of(
        [&spec](double y) { return independent_sum_pdf(y, spec); }, k);
  }
  const PortfolioModel model(spec);
  return moment_of([&model](double y) { return model.pdf(y); }, k);
}

}  // namespace lepto
