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

#ifndef LEPTO_COEFFS_HPP
#define LEPTO_COEFFS_HPP

#include <Eigen/Dense>
#include <vector>

#include "lepto/numeric/log_sum.hpp"

namespace lepto {

// Symmetric coefficient sums of the scaled kurtosis parameters
// beta_tilde_k = beta_k / 24: b_k is the coefficient of z^k in
// prod_i (1 + beta_tilde_i z). b[0] = 1 always.
struct BVector {
  Eigen::ArrayXd b;
  int n() const { return static_cast<int>(b.size()) - 1; }
};

BVector b_coeffs(const std::vector<double>& betas);

enum class CoeffForm { Delta, Theta };

// Signed coefficient table of an HS-family sum density. Both forms weight
// the same family of HS-sum kernels at order shifts s = 0..2n; the delta
// form keeps the (i, j) pairs (shift s = i + j), the theta form is already
// grouped by shift. Coefficients are stored as (sign, log magnitude) since
// they alternate in sign and grow combinatorially with n.
class CoeffTable {
 public:
  CoeffTable(CoeffForm form, int n, std::vector<LogSigned> values);

  CoeffForm form() const { return form_; }
  int n() const { return n_; }

  // Delta form only: delta(i, j) for 0 <= i <= j <= n.
  const LogSigned& delta(int i, int j) const;
  // Theta form only: theta(j) for 0 <= j <= 2n.
  const LogSigned& theta(int j) const;

  // Weight on the kernel with shifted order m + s, s = 0..2n. All (i, j)
  // pairs with i + j = s carry the same sign, so grouping loses nothing.
  const std::vector<LogSigned>& shift_weights() const { return shift_; }

 private:
  CoeffForm form_;
  int n_;
  std::vector<LogSigned> values_;
  std::vector<LogSigned> shift_;
};

// Heterogeneous-kurtosis table; with equal betas it reproduces the equal-
// kurtosis coefficients delta_ij = (-2)^(j-i) C(j,i) sum_k C(n,k) C(k,j)
// beta_tilde^k exactly.
CoeffTable delta_coeffs(int n, const BVector& b);

// Equal-kurtosis table grouped by kernel shift:
// theta_j = (-1)^j sum_{k >= ceil(j/2)} C(n,k) C(2k,j) beta_tilde^k.
CoeffTable theta_coeffs(int n, double beta_tilde);

// Theta-form weights from a general BVector (the grouped-by-shift
// rearrangement is valid for heterogeneous betas as well).
CoeffTable theta_coeffs(int n, const BVector& b);

}  // namespace lepto

#endif  // LEPTO_COEFFS_HPP
