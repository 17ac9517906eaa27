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

#ifndef LEPTO_BACKTEST_HPP
#define LEPTO_BACKTEST_HPP

#include <vector>

#include "lepto/portfolio.hpp"
#include "lepto/risk.hpp"

namespace lepto {

struct GofResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

// Kolmogorov-Smirnov and Anderson-Darling fit of the in-sample portfolio
// sums against the model CDF. p-values come from parametric simulation:
// b_draws samples of equal size from the fitted model, no refitting, p =
// fraction of simulated statistics at least as large as the observed one.
GofResult ks_test(const Eigen::Ref<const Eigen::ArrayXd>& sample,
                  const PortfolioModel& model, int b_draws,
                  std::uint64_t seed);
GofResult ad_test(const Eigen::Ref<const Eigen::ArrayXd>& sample,
                  const PortfolioModel& model, int b_draws,
                  std::uint64_t seed);

// Both tests over one shared set of simulated samples.
struct GofPair {
  GofResult ks;
  GofResult ad;
};
GofPair gof_tests(const Eigen::Ref<const Eigen::ArrayXd>& sample,
                  const PortfolioModel& model, int b_draws,
                  std::uint64_t seed);

struct KupiecResult {
  int exceedances = 0;
  double lr = 0.0;
  double p_value = 1.0;
};

// Unconditional coverage likelihood ratio with a chi-squared(1) reference;
// 0 log 0 terms are dropped, so zero exceedances stay finite.
KupiecResult kupiec(int exceedances, int sample_size, double alpha);

struct LossPair {
  double ablf = 0.0;  // average binary loss, the exceedance rate
  double aqlf = 0.0;  // average quadratic loss, 1 + squared exceedance depth
};

LossPair loss_functions(const Eigen::Ref<const Eigen::ArrayXd>& returns,
                        double var);

// ES backtest statistics on out-of-sample returns, both centered at zero
// when the model tail is right. Exceedances are taken against the
// empirical in-sample VaR while the ES scale is the model's (signed)
// value. z1 compares the mean exceedance against ES and needs at least
// one exceedance; z2 compares the summed exceedances against their
// expected count times ES and is 1 when none occur.
double z1_statistic(const Eigen::Ref<const Eigen::ArrayXd>& returns,
                    double var_emp, double es_model);
double z2_statistic(const Eigen::Ref<const Eigen::ArrayXd>& returns,
                    double var_emp, double es_model, double alpha);

enum class EsStatistic { Z1, Z2 };

// Circular moving-block bootstrap p-value: fraction of resampled
// statistics strictly below the observed one. Replicates where the
// statistic is undefined (no exceedances under z1) are not counted.
double bootstrap_pvalue(double z_observed,
                        const Eigen::Ref<const Eigen::ArrayXd>& returns,
                        double var_emp, double es_model, double alpha,
                        EsStatistic kind, int b, int block_len,
                        std::uint64_t seed);

struct BacktestAlphaRow {
  double alpha = 0.0;
  double var_model = 0.0;
  double es_model = 0.0;
  double var_emp = 0.0;
  int exceedances = 0;  // against the model VaR
  double kupiec_lr = 0.0;
  double kupiec_p = 1.0;
  double ablf = 0.0;
  double aqlf = 0.0;
  double z1 = std::numeric_limits<double>::quiet_NaN();
  double z1_p = std::numeric_limits<double>::quiet_NaN();
  double z2 = 0.0;
  double z2_p = 1.0;
};

struct BacktestInput {
  std::vector<double> alphas;
  // Per-alpha in-sample quantities, aligned with alphas.
  Eigen::ArrayXd var_model;
  Eigen::ArrayXd es_model;
  Eigen::ArrayXd var_emp;
  Eigen::ArrayXd out_of_sample;
  int b_draws = 1000;
  int block_len = 0;  // 0 picks ceil(T^(1/3))
  std::uint64_t seed = 0;
};

struct BacktestReport {
  std::string model;
  GofResult ks;
  GofResult ad;
  std::vector<BacktestAlphaRow> rows;
};

// Full out-of-sample evaluation of one fitted model: in-sample fit tests
// plus the per-alpha coverage, loss, and ES statistics. Coverage counts
// (Kupiec and the loss functions) use the model VaR; the ES statistics
// keep the empirical-VaR exceedance set.
BacktestReport backtest_model(
    const PortfolioModel& model,
    const Eigen::Ref<const Eigen::ArrayXd>& in_sample,
    const BacktestInput& input);

}  // namespace lepto

#endif  // LEPTO_BACKTEST_HPP
