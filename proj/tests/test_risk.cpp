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

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include <doctest.h>

#include "lepto/errors.hpp"
#include "lepto/margins.hpp"
#include "lepto/numeric/special.hpp"
#include "lepto/risk.hpp"
#include "lepto/sums.hpp"

using namespace lepto;

namespace {

Eigen::ArrayXd to_array(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::ArrayXd>(v.data(),
                                          static_cast<Eigen::Index>(v.size()));
}

// Standard normal draws through the model-free quantile transform, so the
// bootstrap tests run on a series with a known tail.
Eigen::ArrayXd normal_draws(std::uint64_t seed, int t) {
  Rng rng(seed);
  Eigen::ArrayXd out(t);
  for (int i = 0; i < t; ++i) out[i] = norm_quantile(rng.u01());
  return out;
}

}  // namespace

TEST_CASE("model cdf and quantile reduce to the sech closed forms") {
  const SumSpec spec = SumSpec::margin({Family::HS, 0.0});
  CHECK(model_cdf(spec, 0.5) == doctest::Approx(hs_cdf(0.5)).epsilon(1e-12));
  CHECK(model_cdf(spec, 1.0) == doctest::Approx(hs_cdf(1.0)).epsilon(1e-12));
  CHECK(model_cdf(spec, 2.5) == doctest::Approx(hs_cdf(2.5)).epsilon(1e-12));
  CHECK(model_cdf(spec, -1.3) ==
        doctest::Approx(hs_cdf(-1.3)).epsilon(1e-12));

  CHECK(model_quantile(spec, 0.05) ==
        doctest::Approx(-1.6183450347426772).epsilon(1e-12));
  CHECK(model_quantile(spec, 0.01) ==
        doctest::Approx(-2.6442035535789335).epsilon(1e-12));
  CHECK(model_quantile(spec, 0.3) ==
        doctest::Approx(-0.42925710107982617).epsilon(1e-12));
  CHECK(model_quantile(spec, 0.975) ==
        doctest::Approx(2.0605997522832478).epsilon(1e-12));

  for (double u : {0.02, 0.2, 0.5, 0.8, 0.99}) {
    CHECK(model_cdf(spec, model_quantile(spec, u)) ==
          doctest::Approx(u).epsilon(1e-12));
  }
}

TEST_CASE("sech-margin expected shortfall matches the frozen tail means") {
  const SumSpec spec = SumSpec::margin({Family::HS, 0.0});
  CHECK(model_es(spec, 0.05) ==
        doctest::Approx(-2.2558389817923213).epsilon(1e-12));
  CHECK(model_es(spec, 0.01) ==
        doctest::Approx(-3.2808582349433333).epsilon(1e-12));
}

TEST_CASE("gaussian-margin var and es match the normal tail values") {
  const SumSpec spec = SumSpec::margin({Family::Gaussian, 0.0});
  struct Row {
    double alpha, var, es;
  };
  const Row rows[] = {{0.05, -1.6448536269514729, -2.0627128075074253},
                      {0.025, -1.9599639845400545, -2.337802792201413},
                      {0.01, -2.3263478740408408, -2.665214220345808},
                      {0.005, -2.575829303548901, -2.891948605383481}};
  for (const Row& r : rows) {
    CAPTURE(r.alpha);
    CHECK(model_var(spec, r.alpha) == doctest::Approx(r.var).epsilon(1e-12));
    CHECK(model_es(spec, r.alpha) == doctest::Approx(r.es).epsilon(1e-12));
  }
}

TEST_CASE("es stays below var across alphas and model specs") {
  const std::vector<SumSpec> specs = {
      SumSpec::margin({Family::HS, 6.0}),
      SumSpec::iid(Family::HS, 4.0, 3),
      SumSpec::independent({{Family::HS, 2.0}, {Family::Gaussian, 1.0}}),
      SumSpec::with_copula({{Family::HS, 4.0}, {Family::HS, 4.0}}, {0.5})};
  for (const SumSpec& spec : specs) {
    CAPTURE(model_name(spec));
    for (double alpha : {0.005, 0.01, 0.025, 0.05, 0.25, 0.5}) {
      CAPTURE(alpha);
      const double var = model_var(spec, alpha);
      const double es = model_es(spec, alpha);
      CHECK(std::isfinite(var));
      CHECK(es < var);
    }
  }
}

TEST_CASE("dependent-sum quantile inverts the cdf") {
  const SumSpec spec =
      SumSpec::with_copula({{Family::HS, 4.0}, {Family::HS, 4.0}}, {0.5});
  for (double x : {-3.0, -1.0, 0.7, 2.2}) {
    CAPTURE(x);
    CHECK(model_quantile(spec, model_cdf(spec, x)) ==
          doctest::Approx(x).epsilon(1e-10));
  }
  CHECK(model_var(spec, 0.05) == model_quantile(spec, 0.05));
}

TEST_CASE("model var and es reject alphas outside the lower half") {
  const SumSpec spec = SumSpec::margin({Family::HS, 0.0});
  CHECK_THROWS_AS(model_var(spec, 0.0), InputError);
  CHECK_THROWS_AS(model_var(spec, 0.6), InputError);
  CHECK_THROWS_AS(model_es(spec, -0.01), InputError);
  CHECK_THROWS_AS(model_es(spec, 1.0), InputError);
}

TEST_CASE("empirical var picks the ceil(alpha T)-th order statistic") {
  const Eigen::ArrayXd s =
      to_array({3.0, -1.0, 4.0, 1.0, -5.0, 9.0, 2.0, -6.0, 5.0, 3.0});
  // Sorted: -6 -5 -1 1 2 3 3 4 5 9.
  CHECK(empirical_var(s, 0.1) == -6.0);
  CHECK(empirical_var(s, 0.25) == -1.0);
  CHECK(empirical_var(s, 0.5) == 2.0);
  // ceil(0.11 * 10) = 2, not 1: the rank rounds up.
  CHECK(empirical_var(s, 0.11) == -5.0);

  CHECK(empirical_es(s, 0.1) == -6.0);
  CHECK(empirical_es(s, 0.25) == doctest::Approx(-4.0));
  CHECK(empirical_es(s, 0.5) == doctest::Approx((-6.0 - 5.0 - 1.0 + 1.0 + 2.0) / 5.0));
}

TEST_CASE("empirical es averages every observation tied at the var level") {
  const Eigen::ArrayXd s =
      to_array({-2.0, -2.0, 0.0, 1.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0});
  CHECK(empirical_var(s, 0.2) == -2.0);
  // Both -2 observations sit at or below the var, so the tail has two
  // points even though the rank asked for the second one.
  CHECK(empirical_es(s, 0.2) == doctest::Approx(-2.0));
  CHECK(empirical_es(s, 0.1) == doctest::Approx(-2.0));
}

TEST_CASE("empirical tail functions reject bad alphas and short samples") {
  const Eigen::ArrayXd s = to_array({1.0, 2.0, 3.0, 4.0, 5.0});
  CHECK_THROWS_AS(empirical_var(s, 0.0), InputError);
  CHECK_THROWS_AS(empirical_var(s, 0.51), InputError);
  CHECK_THROWS_WITH_AS(empirical_var(s, 0.05), doctest::Contains("too small"),
                       InputError);
  CHECK_NOTHROW(empirical_var(s, 0.2));
  CHECK_THROWS_AS(empirical_es(s, 0.1), InputError);
}

TEST_CASE("default block length is the cube-root rule") {
  CHECK(default_block_len(476) == 8);
  CHECK(default_block_len(1000) == 10);
  CHECK(default_block_len(1420) == 12);
  CHECK(default_block_len(27) == 3);
  CHECK(default_block_len(8) == 2);
  CHECK(default_block_len(125) == 5);
  CHECK(default_block_len(64) == 4);
  CHECK(default_block_len(2) == 2);
  CHECK(default_block_len(1) == 1);
  CHECK_THROWS_AS(default_block_len(0), InputError);
}

TEST_CASE("block resample stitches contiguous circular blocks") {
  const int t = 37;
  const int block_len = 5;
  Eigen::ArrayXd indices(t);
  for (int i = 0; i < t; ++i) indices[i] = static_cast<double>(i);

  Rng rng(99);
  const Eigen::ArrayXd out = block_resample(indices, block_len, rng);
  REQUIRE(out.size() == t);
  for (int i = 0; i < t; ++i) {
    const int v = static_cast<int>(out[i]);
    CHECK(out[i] == v);
    CHECK(v >= 0);
    CHECK(v < t);
    // Inside a block each value advances by one step around the circle.
    if (i % block_len != 0) {
      CHECK(v == (static_cast<int>(out[i - 1]) + 1) % t);
    }
  }

  Rng replay(99);
  const Eigen::ArrayXd again = block_resample(indices, block_len, replay);
  CHECK((again == out).all());

  Rng other(100);
  const Eigen::ArrayXd different = block_resample(indices, block_len, other);
  CHECK_FALSE((different == out).all());
}

TEST_CASE("block resample with full-length blocks rotates the series") {
  const int t = 12;
  Eigen::ArrayXd indices(t);
  for (int i = 0; i < t; ++i) indices[i] = static_cast<double>(i);

  Rng rng(5);
  const Eigen::ArrayXd out = block_resample(indices, t, rng);
  const int start = static_cast<int>(out[0]);
  for (int i = 0; i < t; ++i) CHECK(out[i] == (start + i) % t);
}

TEST_CASE("block resample rejects bad block lengths") {
  const Eigen::ArrayXd s = to_array({1.0, 2.0, 3.0});
  Rng rng(1);
  CHECK_THROWS_AS(block_resample(s, 0, rng), InputError);
  CHECK_THROWS_AS(block_resample(s, 4, rng), InputError);
  CHECK_THROWS_AS(block_resample(Eigen::ArrayXd(0), 1, rng), InputError);
}

TEST_CASE("block bootstrap reproduces its percentile convention") {
  const Eigen::ArrayXd sample = normal_draws(404, 500);
  const auto var05 = [](const Eigen::ArrayXd& s) {
    return empirical_var(s, 0.05);
  };
  const int b = 200;
  const BootstrapInterval out =
      block_bootstrap(sample, var05, b, default_block_len(500), 0.95, 7);
  REQUIRE(out.replicates.size() == b);
  CHECK(out.lower <= out.upper);

  // 2.5% of 200 replicates is an exact rank: the 5th and 195th order
  // statistics bound the interval.
  std::vector<double> sorted(out.replicates.data(),
                             out.replicates.data() + b);
  std::sort(sorted.begin(), sorted.end());
  CHECK(out.lower == sorted[4]);
  CHECK(out.upper == sorted[194]);

  // Frozen seed: the interval straddles both the sample statistic and the
  // normal tail value it estimates.
  const double point = var05(sample);
  CHECK(out.lower < point);
  CHECK(point < out.upper);
  CHECK(out.lower < -1.6448536269514729);
  CHECK(-1.6448536269514729 < out.upper);

  const BootstrapInterval replay =
      block_bootstrap(sample, var05, b, default_block_len(500), 0.95, 7);
  CHECK(replay.lower == out.lower);
  CHECK(replay.upper == out.upper);
  CHECK((replay.replicates == out.replicates).all());

  // Fractional ranks round up: 5% of 150 is 7.5, so the 8th and 143rd
  // order statistics bound the 90% interval.
  const BootstrapInterval uneven =
      block_bootstrap(sample, var05, 150, default_block_len(500), 0.9, 7);
  std::vector<double> usorted(uneven.replicates.data(),
                              uneven.replicates.data() + 150);
  std::sort(usorted.begin(), usorted.end());
  CHECK(uneven.lower == usorted[7]);
  CHECK(uneven.upper == usorted[142]);
}

TEST_CASE("full-length blocks collapse the interval onto the statistic") {
  const Eigen::ArrayXd sample = normal_draws(11, 64);
  const auto mean = [](const Eigen::ArrayXd& s) { return s.mean(); };
  const BootstrapInterval out =
      block_bootstrap(sample, mean, 50, static_cast<int>(sample.size()),
                      0.9, 3);
  // Every resample is a rotation, and the mean is rotation-invariant.
  CHECK(out.lower == doctest::Approx(sample.mean()).epsilon(1e-12));
  CHECK(out.upper == doctest::Approx(sample.mean()).epsilon(1e-12));
}

TEST_CASE("block bootstrap validates replicates and confidence") {
  const Eigen::ArrayXd sample = normal_draws(2, 40);
  const auto mean = [](const Eigen::ArrayXd& s) { return s.mean(); };
  CHECK_THROWS_AS(block_bootstrap(sample, mean, 1, 4, 0.9, 1), InputError);
  CHECK_THROWS_AS(block_bootstrap(sample, mean, 50, 4, 0.0, 1), InputError);
  CHECK_THROWS_AS(block_bootstrap(sample, mean, 50, 4, 1.0, 1), InputError);
}
