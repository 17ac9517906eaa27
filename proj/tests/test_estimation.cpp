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
#include <vector>

#include <doctest.h>

#include "lepto/copula.hpp"
#include "lepto/errors.hpp"
#include "lepto/estimation.hpp"
#include "lepto/margins.hpp"
#include "lepto/numeric/special.hpp"
#include "lepto/sums.hpp"
#include "support/oracles.hpp"

using namespace lepto;

namespace {

// Five copies of a short hand vector; tiling preserves every central
// moment, so the frozen six-point values apply.
Eigen::ArrayXd tiled_hand_vector() {
  const std::vector<double> base = {0.1, -0.3, 0.7, 1.2, -0.9, 0.4};
  Eigen::ArrayXd x(30);
  for (int i = 0; i < 30; ++i) x[i] = base[i % 6];
  return x;
}

Eigen::ArrayXd hs_column(std::uint64_t seed, double beta, int t) {
  return sample(MarginSpec{Family::HS, beta}, seed, t);
}

}  // namespace

TEST_CASE("sample_stats frozen hand values") {
  const SeriesStats st = sample_stats(tiled_hand_vector());
  CHECK(st.mean == doctest::Approx(0.19999999999999998).epsilon(1e-13));
  CHECK(st.sd == doctest::Approx(0.6782329983125268).epsilon(1e-13));
  CHECK(st.skewness ==
        doctest::Approx(-0.1730840354861838).epsilon(1e-12));
  CHECK(st.kurtosis == doctest::Approx(2.040642722117202).epsilon(1e-13));
}

TEST_CASE("sample_stats guards") {
  Eigen::ArrayXd short_x = Eigen::ArrayXd::LinSpaced(29, -1.0, 1.0);
  CHECK_THROWS_AS(sample_stats(short_x), InputError);
  CHECK_THROWS_WITH_AS(sample_stats(short_x),
                       doctest::Contains("at least 30"), InputError);
  Eigen::ArrayXd flat = Eigen::ArrayXd::Constant(40, 3.25);
  CHECK_THROWS_AS(sample_stats(flat), InputError);
}

TEST_CASE("standardize recovers location and scale") {
  const Eigen::ArrayXd x = 2.5 * tiled_hand_vector() - 1.75;
  const Standardized s = standardize(x);
  CHECK(s.values.mean() == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(s.values.square().mean() == doctest::Approx(1.0).epsilon(1e-13));
  const Eigen::ArrayXd back = s.location + s.scale * s.values;
  CHECK((back - x).abs().maxCoeff() < 1e-14);
  // Standardizing is affine, so shape statistics are untouched.
  const SeriesStats raw = sample_stats(x);
  const SeriesStats std = sample_stats(s.values);
  CHECK(std.kurtosis == doctest::Approx(raw.kurtosis).epsilon(1e-12));
  CHECK(std.skewness == doctest::Approx(raw.skewness).epsilon(1e-10));
}

TEST_CASE("make_panel shape, affine map, and guards") {
  const Eigen::ArrayXd a = hs_column(3, 4.0, 100);
  const Eigen::ArrayXd b = hs_column(4, 2.0, 100) * 0.01 + 0.0005;
  const ReturnPanel panel = make_panel({a, b}, {"one", "two"});
  CHECK(panel.length() == 100);
  CHECK(panel.width() == 2);
  CHECK(panel.labels == std::vector<std::string>{"one", "two"});
  for (int i = 0; i < 2; ++i) {
    CAPTURE(i);
    CHECK(panel.column(i).mean() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(panel.column(i).square().mean() ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(panel.locations[1] == doctest::Approx(b.mean()).epsilon(1e-12));
  CHECK(panel.scales[1] ==
        doctest::Approx(sample_stats(b).sd).epsilon(1e-12));
  const Eigen::ArrayXd sums = panel.sums();
  CHECK(sums[0] ==
        doctest::Approx(panel.series(0, 0) + panel.series(0, 1))
            .epsilon(1e-14));

  CHECK_THROWS_AS(make_panel({}, {}), InputError);
  CHECK_THROWS_AS(make_panel({a}, {"x", "y"}), InputError);
  CHECK_THROWS_AS(make_panel({a, b}, {"x", "x"}), InputError);
  CHECK_THROWS_AS(make_panel({a, hs_column(5, 2.0, 99)}, {"x", "y"}),
                  InputError);
}

TEST_CASE("method names round-trip") {
  CHECK(method_name(FitMethod::Mom) == "mom");
  CHECK(method_name(FitMethod::Ifm) == "ifm");
  CHECK(method_from_name("mom") == FitMethod::Mom);
  CHECK(method_from_name("ifm") == FitMethod::Ifm);
  CHECK_THROWS_AS(method_from_name("mle"), InputError);
}

TEST_CASE("mom_beta is the raw kurtosis shift") {
  CHECK(mom_beta(10.592, Family::HS) == 10.592 - 5.0);
  CHECK(mom_beta(8.306, Family::HS) == 8.306 - 5.0);
  CHECK(mom_beta(4.873, Family::Gaussian) == 4.873 - 3.0);
  CHECK(std::abs(mom_beta(10.592, Family::HS) - 5.592) < 1e-12);
  // Unclamped on both sides.
  CHECK(mom_beta(4.2, Family::HS) == doctest::Approx(-0.8).epsilon(1e-14));
  CHECK(mom_beta(10.592, Family::Gaussian) ==
        doctest::Approx(7.592).epsilon(1e-14));
}

TEST_CASE("estimate_mom reproduces the documented statistics") {
  // Dependent draws keep the gamma estimate inside its feasibility
  // interval, so the log-likelihood is reportable.
  const Eigen::MatrixXd draws = joint_sample(
      SumSpec::with_copula({{Family::HS, 6.0}, {Family::HS, 2.0}}, {0.4}),
      11, 5000);
  const ReturnPanel panel = make_panel(
      {draws.col(0).array(), draws.col(1).array()}, {"a", "b"});
  const FitReport fit = estimate_mom(panel, {Family::HS, Family::HS}, true);

  REQUIRE(fit.n_params() == 3);
  CHECK(fit.method == FitMethod::Mom);
  CHECK(fit.sample_size == 5000);
  CHECK(fit.params[0].name == "beta[a]");
  CHECK(fit.params[1].name == "beta[b]");
  CHECK(fit.params[2].name == "gamma[a,b]");

  // Margin betas are exactly kurtosis minus five on the panel columns.
  for (int i = 0; i < 2; ++i) {
    CAPTURE(i);
    const double kurt = sample_stats(panel.column(i)).kurtosis;
    CHECK(fit.params[i].estimate == kurt - 5.0);
  }
  // Gamma is exactly the squares cross-moment minus one.
  const double g = (panel.column(0).square() * panel.column(1).square())
                       .mean() -
                   1.0;
  CHECK(fit.params[2].estimate == doctest::Approx(g).epsilon(1e-13));
  CHECK(std::isfinite(fit.log_lik));
  CHECK_NOTHROW(fit.fitted_spec().validate());
}

TEST_CASE("estimate_mom flags infeasible estimates and withholds loglik") {
  // Alternating signs have kurtosis 1, far below the HS parent's 5; a few
  // large spikes against a small base push the other column well past it.
  Eigen::ArrayXd thin(40), fat(40);
  for (int i = 0; i < 40; ++i) {
    thin[i] = (i % 2 == 0) ? 1.0 : -1.0;
    fat[i] = (i % 2 == 0) ? 0.5 : -0.5;
  }
  thin[0] = 1.05;  // break exact ties so the variance is clean
  fat[10] = 4.0;
  fat[25] = -4.0;
  const ReturnPanel panel = make_panel({thin, fat}, {"thin", "fat"});
  const FitReport fit = estimate_mom(panel, {Family::HS, Family::HS}, false);
  CHECK_FALSE(fit.params[0].feasible);
  CHECK(fit.params[0].estimate < 0.0);
  CHECK(fit.params[1].feasible);
  CHECK_FALSE(fit.feasible());
  CHECK(std::isnan(fit.log_lik));
  CHECK_THROWS_AS(fit.fitted_spec(), FeasibilityError);

  // Gaussian parent keeps the same column feasible.
  const FitReport gfit =
      estimate_mom(panel, {Family::Gaussian, Family::HS}, false);
  CHECK_FALSE(gfit.params[0].feasible);  // kurtosis 1 is below 3 as well
  CHECK(gfit.params[0].lower == 0.0);
}

TEST_CASE("composite_loglik matches a direct evaluation") {
  const Eigen::ArrayXd a = hs_column(31, 5.0, 120);
  const Eigen::ArrayXd b = hs_column(32, 3.0, 120);
  const ReturnPanel panel = make_panel({a, b}, {"a", "b"});
  const std::vector<Family> fams{Family::HS, Family::HS};
  Eigen::VectorXd theta(3);
  theta << 5.0, 3.0, 0.4;

  const RPolynomial r0(MarginSpec{Family::HS, 5.0});
  const RPolynomial r1(MarginSpec{Family::HS, 3.0});
  double want = 0.0;
  for (int t = 0; t < panel.length(); ++t) {
    const double x0 = panel.series(t, 0);
    const double x1 = panel.series(t, 1);
    want += gchs_log_pdf(x0, 5.0) + gchs_log_pdf(x1, 3.0) +
            std::log1p(0.4 * r0(x0) * r1(x1));
  }
  CHECK(composite_loglik(panel, fams, theta, true) ==
        doctest::Approx(want).epsilon(1e-12));

  Eigen::VectorXd ind = theta.head(2);
  double want_ind = 0.0;
  for (int t = 0; t < panel.length(); ++t) {
    want_ind += gchs_log_pdf(panel.series(t, 0), 5.0) +
                gchs_log_pdf(panel.series(t, 1), 3.0);
  }
  CHECK(composite_loglik(panel, fams, ind, false) ==
        doctest::Approx(want_ind).epsilon(1e-12));

  // Probes just outside the feasible box stay finite.
  Eigen::VectorXd outside = theta;
  outside[0] = 14.41;
  CHECK(std::isfinite(composite_loglik(panel, fams, outside, true)));

  CHECK_THROWS_AS(composite_loglik(panel, {Family::HS}, theta, true),
                  InputError);
  CHECK_THROWS_AS(composite_loglik(panel, fams, ind, true), InputError);
}

TEST_CASE("ifm_fit maximizes the likelihood it reports") {
  const Eigen::MatrixXd draws = joint_sample(
      SumSpec::with_copula({{Family::HS, 4.0}, {Family::HS, 3.0}}, {0.5}),
      77, 2000);
  const ReturnPanel panel = make_panel(
      {draws.col(0).array(), draws.col(1).array()}, {"a", "b"});
  const std::vector<Family> fams{Family::HS, Family::HS};
  const FitReport fit = ifm_fit(panel, fams, true);

  REQUIRE(fit.n_params() == 3);
  CHECK(fit.feasible());
  CHECK(std::isfinite(fit.log_lik));
  CHECK(fit.log_lik ==
        doctest::Approx(composite_loglik(panel, fams, fit.estimates(), true))
            .epsilon(1e-12));

  // Single-seed smoke bounds; the distributional recovery statement
  // needs replication and lives with the simulation studies.
  CHECK(std::abs(fit.params[0].estimate - 4.0) < 2.5);
  CHECK(std::abs(fit.params[1].estimate - 3.0) < 2.5);
  CHECK(std::abs(fit.params[2].estimate - 0.5) < 0.25);

  // Margin likelihoods are maximized coordinate-wise on the independent
  // fit, and the gamma profile is maximized at the copula fit.
  const FitReport ind = ifm_fit(panel, fams, false);
  const Eigen::VectorXd at = ind.estimates();
  for (int i = 0; i < 2; ++i) {
    for (double eps : {-0.08, 0.08}) {
      Eigen::VectorXd probe = at;
      probe[i] = std::clamp(probe[i] + eps, 0.0, 14.4);
      CHECK(composite_loglik(panel, fams, probe, false) <=
            composite_loglik(panel, fams, at, false) + 1e-9);
    }
  }
  const Eigen::VectorXd atc = fit.estimates();
  for (double eps : {-0.05, 0.05}) {
    Eigen::VectorXd probe = atc;
    probe[2] = probe[2] + eps;
    if (probe[2] <= fit.params[2].lower || probe[2] >= fit.params[2].upper)
      continue;
    CHECK(composite_loglik(panel, fams, probe, true) <=
          fit.log_lik + 1e-9);
  }

  // The ML point dominates the moment point in likelihood.
  const FitReport mom = estimate_mom(panel, fams, true);
  if (mom.feasible()) CHECK(fit.log_lik >= mom.log_lik - 1e-9);
}

TEST_CASE("ifm_fit pins gamma to zero when a margin interval collapses") {
  // A beta = 0 margin leaves r unbounded, so the only feasible gamma is 0.
  const Eigen::ArrayXd a = sample(MarginSpec{Family::HS, 0.0}, 51, 400);
  const Eigen::ArrayXd b = hs_column(52, 4.0, 400);
  const ReturnPanel panel = make_panel({a, b}, {"a", "b"});
  const FitReport fit = ifm_fit(panel, {Family::HS, Family::HS}, true);
  // The margin fit may land on a tiny positive beta; only a genuinely
  // collapsed interval forces the pin, so probe through the params.
  if (fit.params[0].estimate == 0.0) {
    CHECK(fit.params[2].estimate == 0.0);
    CHECK(fit.params[2].lower == 0.0);
    CHECK(fit.params[2].upper == 0.0);
  }
  CHECK(fit.feasible());
}

TEST_CASE("godambe_jackknife equals a manual leave-one-out loop") {
  const Eigen::ArrayXd a = hs_column(61, 6.0, 40);
  const ReturnPanel panel = make_panel({a}, {"a"});
  const FitReport fit = estimate_mom(panel, {Family::HS}, false);
  const Eigen::MatrixXd v = godambe_jackknife(panel, fit);
  REQUIRE(v.rows() == 1);
  REQUIRE(v.cols() == 1);

  const int t_len = panel.length();
  Eigen::ArrayXd thetas(t_len);
  for (int t = 0; t < t_len; ++t) {
    Eigen::ArrayXd loo(t_len - 1);
    int k = 0;
    for (int s = 0; s < t_len; ++s)
      if (s != t) loo[k++] = panel.series(s, 0);
    // Re-standardize the reduced sample exactly as the refit does.
    const Standardized z = standardize(loo);
    thetas[t] = sample_stats(z.values).kurtosis - 5.0;
  }
  const double mean = thetas.mean();
  const double want =
      (double(t_len - 1) / t_len) * (thetas - mean).square().sum();
  CHECK(v(0, 0) == doctest::Approx(want).epsilon(1e-10));
}

TEST_CASE("godambe_jackknife covariance shape on a copula fit") {
  const Eigen::MatrixXd draws = joint_sample(
      SumSpec::with_copula({{Family::HS, 4.0}, {Family::HS, 4.0}}, {0.4}),
      71, 150);
  const ReturnPanel panel = make_panel(
      {draws.col(0).array(), draws.col(1).array()}, {"a", "b"});
  const FitReport fit = estimate_mom(panel, {Family::HS, Family::HS}, true);
  const Eigen::MatrixXd v = godambe_jackknife(panel, fit);
  REQUIRE(v.rows() == 3);
  REQUIRE(v.cols() == 3);
  CHECK((v - v.transpose()).cwiseAbs().maxCoeff() < 1e-14);
  for (int k = 0; k < 3; ++k) CHECK(v(k, k) > 0.0);
  // Cauchy-Schwarz on the off-diagonals.
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < i; ++j)
      CHECK(v(i, j) * v(i, j) <= v(i, i) * v(j, j) * (1.0 + 1e-12));
}

TEST_CASE("claic penalizes with the jackknife trace") {
  const Eigen::ArrayXd a = hs_column(81, 5.0, 300);
  const ReturnPanel panel = make_panel({a}, {"a"});
  FitReport fit = ifm_fit(panel, {Family::HS}, false);
  fit.jack_cov = godambe_jackknife(panel, fit);
  const double c = claic(fit, panel);
  CHECK(std::isfinite(c));
  // The criterion sits near AIC when the model is correctly specified:
  // penalty of one parameter, give or take estimation noise.
  const double aic = -2.0 * fit.log_lik + 2.0;
  CHECK(std::abs(c - aic) < 4.0);

  // Without a precomputed covariance the criterion runs the jackknife
  // itself and lands on the same value.
  FitReport no_cov = ifm_fit(panel, {Family::HS}, false);
  CHECK(claic(no_cov, panel) == doctest::Approx(c).epsilon(1e-12));
}

TEST_CASE("lrt_gamma_zero statistic and guards") {
  const Eigen::MatrixXd draws = joint_sample(
      SumSpec::with_copula({{Family::HS, 4.0}, {Family::HS, 4.0}}, {0.6}),
      91, 800);
  const ReturnPanel panel = make_panel(
      {draws.col(0).array(), draws.col(1).array()}, {"a", "b"});
  const std::vector<Family> fams{Family::HS, Family::HS};
  const FitReport with = ifm_fit(panel, fams, true);
  const FitReport without = ifm_fit(panel, fams, false);

  const LrtResult lrt = lrt_gamma_zero(with, without);
  CHECK(lrt.statistic ==
        doctest::Approx(
            std::max(0.0, 2.0 * (with.log_lik - without.log_lik)))
            .epsilon(1e-12));
  CHECK(lrt.p_value == doctest::Approx(chisq_sf(lrt.statistic, 1))
                           .epsilon(1e-12));
  // Strong generated dependence should reject clearly.
  CHECK(lrt.p_value < 0.01);

  CHECK_THROWS_AS(lrt_gamma_zero(without, with), InputError);
  FitReport other = without;
  other.sample_size = 799;
  CHECK_THROWS_AS(lrt_gamma_zero(with, other), InputError);
}

TEST_CASE("fit_model fills errors, claic, and the copula lrt") {
  const Eigen::MatrixXd draws = joint_sample(
      SumSpec::with_copula({{Family::HS, 5.0}, {Family::HS, 3.0}}, {0.5}),
      101, 400);
  const ReturnPanel panel = make_panel(
      {draws.col(0).array(), draws.col(1).array()}, {"a", "b"});
  const std::vector<Family> fams{Family::HS, Family::HS};

  const FitReport bare = fit_model(panel, fams, true, FitMethod::Ifm, false);
  CHECK(bare.jack_cov.size() == 0);
  CHECK(std::isnan(bare.claic_value));

  const FitReport fit = fit_model(panel, fams, true, FitMethod::Ifm);
  CHECK(fit.jack_cov.rows() == 3);
  for (const auto& p : fit.params) {
    CAPTURE(p.name);
    CHECK(std::isfinite(p.std_err));
    CHECK(p.std_err > 0.0);
    CHECK(std::isfinite(p.z_value));
    CHECK(p.p_value >= 0.0);
    CHECK(p.p_value <= 1.0);
  }
  CHECK(std::isfinite(fit.claic_value));
  CHECK(std::isfinite(fit.lrt_stat));
  CHECK(fit.lrt_p >= 0.0);
  CHECK(fit.model() == "SGCHS-C");

  const FitReport mom = fit_model(panel, fams, false, FitMethod::Mom);
  CHECK(std::isnan(mom.claic_value));
  CHECK(std::isnan(mom.lrt_stat));
  CHECK(mom.model() == "SGCHS");
}

TEST_CASE("fixture panel moment fits match the designed kurtoses") {
  const ReturnPanel panel =
      lepto::testing::fixture_panel(lepto::testing::fixture_returns());
  REQUIRE(panel.width() == 3);
  CHECK(panel.length() == 1420);
  CHECK(panel.labels ==
        std::vector<std::string>{"msft", "n225", "nem"});

  const std::vector<Family> fams{Family::HS, Family::HS, Family::Gaussian};
  const FitReport mom = estimate_mom(panel, fams, true);
  CHECK(mom.params[0].estimate == doctest::Approx(5.592).epsilon(1e-8));
  CHECK(mom.params[1].estimate == doctest::Approx(3.306).epsilon(1e-8));
  CHECK(mom.params[2].estimate == doctest::Approx(1.873).epsilon(1e-8));
  for (const auto& p : mom.params) {
    CAPTURE(p.name);
    CHECK(p.feasible);
  }
  CHECK(mom.params[3].estimate ==
        doctest::Approx(0.60045277145121889).epsilon(1e-9));
  CHECK(mom.params[4].estimate ==
        doctest::Approx(0.7329225150243186).epsilon(1e-9));

  // The HS parent on the heaviest column is infeasible under a Gaussian
  // parent: kurtosis 10.592 maps to beta 7.592, past the bound of 4.
  const FitReport gm =
      estimate_mom(panel, {Family::Gaussian, Family::HS, Family::Gaussian},
                   false);
  CHECK(gm.params[0].estimate == doctest::Approx(7.592).epsilon(1e-8));
  CHECK_FALSE(gm.params[0].feasible);
  CHECK_THROWS_AS(gm.fitted_spec(), FeasibilityError);

  // The likelihood fit beats the moment fit on its own criterion.
  const FitReport ifm = ifm_fit(panel, fams, true);
  CHECK(ifm.log_lik > estimate_mom(panel, fams, true).log_lik);
}
