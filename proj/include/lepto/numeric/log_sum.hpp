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

#ifndef LEPTO_NUMERIC_LOG_SUM_HPP
#define LEPTO_NUMERIC_LOG_SUM_HPP

#include <cmath>
#include <limits>
#include <vector>

namespace lepto {

// Signed magnitude in log space. Exact zero is sign == 0 with log_mag = -inf.
// Alternating combinatorial sums (binomials times factorial-scale kernels)
// overflow double well before their balanced total does, so products are
// carried as (sign, log magnitude) and only collapsed when summing.
struct LogSigned {
  double log_mag = -std::numeric_limits<double>::infinity();
  int sign = 0;

  static LogSigned from(double v) {
    if (v == 0.0) return {};
    return {std::log(std::abs(v)), v > 0.0 ? 1 : -1};
  }
  static LogSigned from_log(double log_mag, int sign) {
    return {log_mag, sign};
  }
  double value() const {
    return sign == 0 ? 0.0 : sign * std::exp(log_mag);
  }
  LogSigned operator*(const LogSigned& o) const {
    if (sign == 0 || o.sign == 0) return {};
    return {log_mag + o.log_mag, sign * o.sign};
  }
  LogSigned& operator*=(const LogSigned& o) { return *this = *this * o; }
};

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Sum of signed log-space terms: terms are rescaled by the largest magnitude
// and accumulated with compensation, so heavy cancellation costs only the
// precision genuinely lost, not overflow.
class LogSignedSum {
 public:
  void add(const LogSigned& t) {
    if (t.sign != 0) terms_.push_back(t);
  }
  // Result as sign * exp(log_scale) * mantissa with mantissa in [0, n].
  // value() collapses to a double; fine whenever the total is in range.
  double value() const {
    if (terms_.empty()) return 0.0;
    double lmax = terms_.front().log_mag;
    for (const auto& t : terms_) lmax = std::max(lmax, t.log_mag);
    CompensatedSum s;
    for (const auto& t : terms_) s.add(t.sign * std::exp(t.log_mag - lmax));
    return s.value() * std::exp(lmax);
  }

 private:
  std::vector<LogSigned> terms_;
};

}  // namespace lepto

#endif  // LEPTO_NUMERIC_LOG_SUM_HPP
