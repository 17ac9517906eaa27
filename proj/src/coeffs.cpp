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

#include "lepto/coeffs.hpp"

#include <cmath>

#include "lepto/errors.hpp"
#include "lepto/numeric/special.hpp"

namespace lepto {

BVector b_coeffs(const std::vector<double>& betas) {
  const int n = static_cast<int>(betas.size());
  if (n < 1) throw FeasibilityError("b_coeffs: needs at least one margin");
  Eigen::ArrayXd b = Eigen::ArrayXd::Zero(n + 1);
  b[0] = 1.0;
  for (int i = 0; i < n; ++i) {
    if (!(betas[i] >= 0.0)) {
      throw FeasibilityError("b_coeffs: betas must be nonnegative");
    }
    const double bt = betas[i] / 24.0;
    for (int k = i + 1; k >= 1; --k) b[k] += bt * b[k - 1];
  }
  return {b};
}

namespace {

int delta_index(int n, int i, int j) {
  // Packed upper triangle, row i holds j = i..n.
  return i * (n + 1) - i * (i - 1) / 2 + (j - i);
}

std::vector<LogSigned> collapse_by_shift(CoeffForm form, int n,
                                         const std::vector<LogSigned>& v) {
  std::vector<LogSigned> shift(2 * n + 1);
  if (form == CoeffForm::Theta) return v;
  for (int s = 0; s <= 2 * n; ++s) {
    // Terms with i + j = s share the sign (-1)^(j-i) = (-1)^s, so their
    // magnitudes can be accumulated with log-sum-exp.
    double lmax = -std::numeric_limits<double>::infinity();
    int sign = 0;
    for (int i = std::max(0, s - n); 2 * i <= s; ++i) {
      const LogSigned& d = v[delta_index(n, i, s - i)];
      if (d.sign == 0) continue;
      sign = d.sign;
      lmax = std::max(lmax, d.log_mag);
    }
    if (sign == 0) continue;
    double acc = 0.0;
    for (int i = std::max(0, s - n); 2 * i <= s; ++i) {
      const LogSigned& d = v[delta_index(n, i, s - i)];
      if (d.sign != 0) acc += std::exp(d.log_mag - lmax);
    }
    shift[s] = LogSigned::from_log(lmax + std::log(acc), sign);
  }
  return shift;
}

}  // namespace

CoeffTable::CoeffTable(CoeffForm form, int n, std::vector<LogSigned> values)
    : form_(form), n_(n), values_(std::move(values)) {
  shift_ = collapse_by_shift(form_, n_, values_);
}

const LogSigned& CoeffTable::delta(int i, int j) const {
  if (form_ != CoeffForm::Delta || i < 0 || j < i || j > n_) {
    throw FeasibilityError("CoeffTable: bad delta index");
  }
  return values_[delta_index(n_, i, j)];
}

const LogSigned& CoeffTable::theta(int j) const {
  if (form_ != CoeffForm::Theta || j < 0 || j > 2 * n_) {
    throw FeasibilityError("CoeffTable: bad theta index");
  }
  return values_[j];
}

CoeffTable delta_coeffs(int n, const BVector& b) {
  if (b.n() != n) throw FeasibilityError("delta_coeffs: size mismatch");
  // Inner sums S_j = sum_{k=j..n} C(k,j) b_k are nonnegative (all b_k >= 0).
  std::vector<double> log_s(n + 1);
  for (int j = 0; j <= n; ++j) {
    double s = 0.0;
    for (int k = j; k <= n; ++k) s += choose(k, j) * b.b[k];
    log_s[j] = (s > 0.0) ? std::log(s)
                         : -std::numeric_limits<double>::infinity();
  }
  constexpr double kLog2 = 0.69314718055994530941723212145818;
  std::vector<LogSigned> v((n + 1) * (n + 2) / 2);
  for (int i = 0; i <= n; ++i) {
    for (int j = i; j <= n; ++j) {
      if (std::isinf(log_s[j])) continue;
      const double lm = (j - i) * kLog2 + log_choose(j, i) + log_s[j];
      v[delta_index(n, i, j)] =
          LogSigned::from_log(lm, (j - i) % 2 == 0 ? 1 : -1);
    }
  }
  return CoeffTable(CoeffForm::Delta, n, std::move(v));
}

CoeffTable theta_coeffs(int n, const BVector& b) {
  if (b.n() != n) throw FeasibilityError("theta_coeffs: size mismatch");
  std::vector<LogSigned> v(2 * n + 1);
  for (int j = 0; j <= 2 * n; ++j) {
    double s = 0.0;
    for (int k = (j + 1) / 2; k <= n; ++k) s += choose(2 * k, j) * b.b[k];
    if (s > 0.0) {
      v[j] = LogSigned::from_log(std::log(s), j % 2 == 0 ? 1 : -1);
    }
  }
  return CoeffTable(CoeffForm::Theta, n, std::move(v));
}

CoeffTable theta_coeffs(int n, double beta_tilde) {
  if (!(beta_tilde >= 0.0)) {
    throw FeasibilityError("theta_coeffs: beta_tilde must be nonnegative");
  }
  return theta_coeffs(n, b_coeffs(std::vector<double>(n, 24.0 * beta_tilde)));
}

}  // namespace lepto
