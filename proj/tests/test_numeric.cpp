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

#include <cmath>
#include <complex>
#include <set>
#include <vector>

#include <doctest.h>

#include "lepto/errors.hpp"
#include "lepto/numeric/cdf_table.hpp"
#include "lepto/numeric/fft.hpp"
#include "lepto/numeric/grid_density.hpp"
#include "lepto/numeric/log_sum.hpp"
#include "lepto/numeric/quadrature.hpp"
#include "lepto/numeric/rng.hpp"
#include "lepto/numeric/roots.hpp"
#include "lepto/numeric/special.hpp"

using namespace lepto;

namespace {
double phi(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); }
}  // namespace

TEST_CASE("quadrature reproduces closed-form integrals") {
  CHECK(integrate([](double) { return 1.0; }, 0.0, 3.0) ==
        doctest::Approx(3.0).epsilon(1e-14));
  CHECK(integrate([](double x) { return std::cos(x); }, 0.0, 2.0) ==
        doctest::Approx(std::sin(2.0)).epsilon(1e-13));
  // sharply peaked integrand forces adaptive refinement
  CHECK(integrate([](double x) { return std::exp(-200.0 * x * x); }, -4.0,
                  4.0) ==
        doctest::Approx(std::sqrt(M_PI / 200.0)).epsilon(1e-12));
  CHECK(integrate_line([](double x) { return phi(x); }) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(integrate_line([](double x) { return x * x * phi(x); }) ==
        doctest::Approx(1.0).epsilon(1e-11));
}

TEST_CASE("truncation radius brackets the tail cutoff") {
  const double r = truncation_radius([](double x) { return phi(x); }, 1e-12);
  CHECK(phi(r) <= 1e-12);
  CHECK(phi(-r) <= 1e-12);
  CHECK(r < 12.0);  // standard normal dips below 1e-12 near 7.3
  CHECK(r >= 7.0);
}

TEST_CASE("brent root finder") {
  const double r = find_root([](double x) { return std::cos(x) - x; }, 0.0,
                             1.0);
  CHECK(std::cos(r) - r == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(r == doctest::Approx(0.7390851332151607).epsilon(1e-12));
  CHECK_THROWS_AS(find_root([](double x) { return x * x + 1.0; }, -1.0, 1.0),
                  NumericalError);
}

TEST_CASE("golden-section minimizer") {
  auto [x, fx] = minimize([](double x) { return (x - M_PI) * (x - M_PI); },
                          0.0, 5.0);
  CHECK(x == doctest::Approx(M_PI).epsilon(1e-7));
  CHECK(fx == doctest::Approx(0.0).epsilon(1e-12));
  // nonsmooth valley still converges to the kink
  auto [y, fy] = minimize([](double t) { return std::abs(t - 2.0) + 1.0; },
                          0.0, 5.0);
  CHECK(y == doctest::Approx(2.0).epsilon(1e-7));
  CHECK(fy == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("compensated summation survives cancellation") {
  CompensatedSum s;
  s.add(1.0);
  s.add(1e16);
  s.add(-1e16);
  CHECK(s.value() == 1.0);
  // alternating harmonic-like series summed forward
  CompensatedSum h;
  for (int k = 1; k <= 100000; ++k) h.add((k % 2 == 1 ? 1.0 : -1.0) / k);
  double tail = 0.0;
  for (int k = 100000; k >= 1; --k)
    tail += (k % 2 == 1 ? 1.0 : -1.0) / k;  // reverse-order reference
  CHECK(h.value() == doctest::Approx(tail).epsilon(1e-15));
}

TEST_CASE("log-signed arithmetic") {
  const LogSigned a = LogSigned::from(-3.0);
  const LogSigned b = LogSigned::from(2.0);
  CHECK((a * b).value() == doctest::Approx(-6.0).epsilon(1e-15));
  CHECK(LogSigned::from(0.0).sign == 0);
  CHECK((LogSigned::from(0.0) * a).value() == 0.0);

  // alternating binomial partial sum: sum_{k=0}^{29} (-1)^k C(30, k) = -1,
  // nine digits of cancellation against a peak term of 1.55e8
  LogSignedSum sum;
  for (int k = 0; k < 30; ++k)
    sum.add(LogSigned::from_log(log_choose(30, k), k % 2 == 0 ? 1 : -1));
  CHECK(sum.value() == doctest::Approx(-1.0).epsilon(1e-6));
}

TEST_CASE("normal distribution functions against frozen references") {
  CHECK(norm_cdf(-3.0) == doctest::Approx(0.0013498980316300933).epsilon(1e-13));
  CHECK(norm_cdf(-1.0) == doctest::Approx(0.15865525393145707).epsilon(1e-14));
  CHECK(norm_cdf(0.3) == doctest::Approx(0.6179114221889526).epsilon(1e-14));
  CHECK(norm_cdf(4.2) == doctest::Approx(0.9999866542509841).epsilon(1e-14));
  CHECK(norm_pdf(-0.5) == doctest::Approx(0.35206532676429947).epsilon(1e-14));
  CHECK(norm_pdf(1.7) == doctest::Approx(0.09404907737688695).epsilon(1e-14));
  CHECK(norm_quantile(0.05) ==
        doctest::Approx(-1.6448536269514729).epsilon(1e-12));
  for (double u : {1e-8, 0.01, 0.3, 0.5, 0.9, 1.0 - 1e-10})
    CHECK(norm_cdf(norm_quantile(u)) == doctest::Approx(u).epsilon(1e-12));
}

TEST_CASE("chi-square survival function against frozen references") {
  CHECK(chisq_sf(4.772, 1) ==
        doctest::Approx(0.028926203511397897).epsilon(1e-12));
  CHECK(chisq_sf(3.841458820694124, 1) ==
        doctest::Approx(0.05).epsilon(1e-12));
  CHECK(chisq_sf(0.5, 1) ==
        doctest::Approx(0.47950012218695337).epsilon(1e-12));
  CHECK(chisq_sf(2.0, 2) ==
        doctest::Approx(0.36787944117144245).epsilon(1e-12));
  CHECK(chisq_sf(11.07, 5) ==
        doctest::Approx(0.050009618622405425).epsilon(1e-12));
  CHECK(chisq_sf(37.9075, 2) ==
        doctest::Approx(5.868011599085641e-09).epsilon(1e-10));
  CHECK(chisq_sf(0.0, 1) == 1.0);
}

TEST_CASE("combinatorial helpers") {
  CHECK(choose(10, 3) == 120.0);
  CHECK(choose(52, 5) == 2598960.0);
  CHECK(choose(4, 0) == 1.0);
  CHECK(log_factorial(10) ==
        doctest::Approx(std::log(3628800.0)).epsilon(1e-14));
  CHECK(log_choose(200, 100) ==
        doctest::Approx(std::lgamma(201.0) - 2.0 * std::lgamma(101.0))
            .epsilon(1e-13));
}

TEST_CASE("radix-2 fft against direct dft") {
  Rng rng(7);
  const int n = 64;
  std::vector<std::complex<double>> a(n);
  for (auto& v : a) v = {rng.u01() - 0.5, rng.u01() - 0.5};
  const std::vector<std::complex<double>> orig = a;
  fft_radix2(a, false);
  for (int k : {0, 1, 17, 63}) {
    std::complex<double> direct = 0.0;
    for (int j = 0; j < n; ++j)
      direct += orig[j] *
                std::polar(1.0, -2.0 * M_PI * j * k / n);
    CHECK(std::abs(a[k] - direct) < 1e-12);
  }
  fft_radix2(a, true);
  for (int j = 0; j < n; ++j) CHECK(std::abs(a[j] - orig[j]) < 1e-13);
}

TEST_CASE("grid density interpolation and convolution") {
  const int cells = 4096;
  const double hw = 12.0;
  Eigen::ArrayXd vals(cells);
  for (int i = 0; i < cells; ++i)
    vals[i] = phi(-hw + i * (2.0 * hw / cells));
  const GridDensity g(vals, hw);
  for (double x : {-3.7, -0.21, 0.0, 1.13, 4.9})
    CHECK(g(x) == doctest::Approx(phi(x)).epsilon(1e-6));
  CHECK(g(hw + 1.0) == 0.0);

  // normal * normal = normal with variance 2; three-fold gives variance 3
  const Eigen::ArrayXd sum2 = convolve_on_grid({vals, vals}, hw);
  const GridDensity g2(sum2, hw);
  for (double x : {0.0, 1.0, 2.5})
    CHECK(g2(x) ==
          doctest::Approx(phi(x / std::sqrt(2.0)) / std::sqrt(2.0))
              .epsilon(1e-8));
  const Eigen::ArrayXd sum3 = convolve_on_grid({vals, vals, vals}, hw);
  const GridDensity g3(sum3, hw);
  for (double x : {0.0, -1.7, 3.2})
    CHECK(g3(x) ==
          doctest::Approx(phi(x / std::sqrt(3.0)) / std::sqrt(3.0))
              .epsilon(1e-8));
}

TEST_CASE("numeric cdf table on the standard normal") {
  const NumericCdf table(phi, 10.0, 2000);
  CHECK(table.mass() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(table.cdf(0.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(table.cdf(-1.0) ==
        doctest::Approx(0.15865525393145707).epsilon(1e-10));
  CHECK(table.quantile(0.05) ==
        doctest::Approx(-1.6448536269514729).epsilon(1e-8));
  for (double u : {0.001, 0.01, 0.05, 0.5, 0.975})
    CHECK(table.cdf(table.quantile(u)) == doctest::Approx(u).epsilon(1e-10));
  // lower-tail mean: -pdf(q)/alpha for the normal
  const double q = table.quantile(0.05);
  CHECK(table.tail_mean(0.05) ==
        doctest::Approx(-phi(q) / 0.05).epsilon(1e-8));
  CHECK(table.tail_mean(0.05, q) == table.tail_mean(0.05));
  CHECK_THROWS_AS(table.quantile(0.0), FeasibilityError);
  CHECK_THROWS_AS(table.quantile(1.0), FeasibilityError);
}

TEST_CASE("rng determinism and ranges") {
  Rng a(123), b(123), c(124);
  bool all_equal = true, any_diff = false;
  for (int i = 0; i < 100; ++i) {
    const double ua = a.u01(), ub = b.u01(), uc = c.u01();
    all_equal = all_equal && ua == ub;
    any_diff = any_diff || ua != uc;
    CHECK(ua > 0.0);
    CHECK(ua < 1.0);
  }
  CHECK(all_equal);
  CHECK(any_diff);

  Rng root(9);
  Rng s0 = root.substream(0), s1 = root.substream(1);
  Rng s0b = Rng(9).substream(0);
  CHECK(s0.next() == s0b.next());
  CHECK(s0.next() != s1.next());

  Rng d(5);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t v = d.below(7);
    CHECK(v < 7);
    seen.insert(v);
  }
  CHECK(seen.size() == 7);
}
