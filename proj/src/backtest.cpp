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

#include "lepto/backtest.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "lepto/errors.hpp"
#include "lepto/numeric/special.hpp"

namespace lepto {

namespace {

// Both statistics need the sorted model-CDF transforms; probabilities are
// clamped away from {0, 1} so the AD logs stay finite.
Eigen::ArrayXd sorted_transforms(const Eigen::Ref<const Eigen::ArrayXd>& x,
                                 const PortfolioModel& model) {
  std::vector<double> u(x.size());
  for (int i = 0; i < x.size(); ++i)
    u[i] = std::clamp(model.cdf(x[i]), 1e-15, 1.0 - 1e-15);
  std::sort(u.begin(), u.end());
  return Eigen::Map<Eigen::ArrayXd>(u.data(), u.size());
}

double ks_from_sorted(const Eigen::ArrayXd& u) {
  const int t = static_cast<int>(u.size());
  double d = 0.0;
  for (int i = 0; i < t; ++i) {
    d = std::max(d, (i + 1.0) / t - u[i]);
    d = std::max(d, u[i] - i * 1.0 / t);
  }
  return d;
}

double ad_from_sorted(const Eigen::ArrayXd& u) {
  const int t = static_cast<int>(u.size());
  double s = 0.0;
  for (int i = 0; i < t; ++i)
    s += (2.0 * i + 1.0) * (std::log(u[i]) + std::log1p(-u[t - 1 - i]));
  return -t - s / t;
}

void check_gof_input(const Eigen::Ref<const Eigen::ArrayXd>& sample,
                     int b_draws) {
  if (sample.size() < 2) throw InputError("fit test: sample too small");
  if (b_draws < 1) throw InputError("fit test: needs simulation draws");
}

}  // namespace

GofPair gof_tests(const Eigen::Ref<const Eigen::ArrayXd>& sample,
                  const PortfolioModel& model, int b_draws,
                  std::uint64_t seed) {
  check_gof_input(sample, b_draws);
  const Eigen::ArrayXd u = sorted_transforms(sample, model);
  GofPair out;
  out.ks.statistic = ks_from_sorted(u);
  out.ad.statistic = ad_from_sorted(u);
  const int t = static_cast<int>(sample.size());
  Rng root(seed);
  int ks_hits = 0;
  int ad_hits = 0;
  for (int b = 0; b < b_draws; ++b) {
    Rng rng = root.substream(static_cast<std::uint64_t>(b));
    Eigen::ArrayXd sim(t);
    for (int i = 0; i < t; ++i) sim[i] = model.quantile(rng.u01());
    const Eigen::ArrayXd su = sorted_transforms(sim, model);
    if (ks_from_sorted(su) >= out.ks.statistic) ++ks_hits;
    if (ad_from_sorted(su) >= out.ad.statistic) ++ad_hits;
  }
  out.ks.p_value = static_cast<double>(ks_hits) / b_draws;
  out.ad.p_value = static_cast<double>(ad_hits) / b_draws;
  return out;
}

GofResult ks_test(const Eigen::Ref<const Eigen::ArrayXd>& sample,
                  const PortfolioModel& model, int b_draws,
                  std::uint64_t seed) {
  return gof_tests(sample, model, b_draws, seed).ks;
}

GofResult ad_test(const Eigen::Ref<const Eigen::ArrayXd>& sample,
                  const PortfolioModel& model, int b_draws,
                  std::uint64_t seed) {
  return gof_tests(sample, model, b_draws, seed).ad;
}

KupiecResult kupiec(int exceedances, int sample_size, double alpha) {
  if (sample_size < 1) throw InputError("kupiec: empty sample");
  if (exceedances < 0 || exceedances > sample_size)
    throw InputError("kupiec: exceedance count out of range");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw InputError("kupiec: alpha must lie in (0, 1)");
  const int n = exceedances;
  const int t = sample_size;
  const double rate = static_cast<double>(n) / t;
  // x log x with the 0 log 0 = 0 convention.
  const auto xlog = [](double w, double p) {
    return w == 0.0 ? 0.0 : w * std::log(p);
  };
  const double null_ll = xlog(t - n, 1.0 - alpha) + xlog(n, alpha);
  const double alt_ll = xlog(t - n, 1.0 - rate) + xlog(n, rate);
  KupiecResult out;
  out.exceedances = n;
  out.lr = std::max(0.0, 2.0 * (alt_ll - null_ll));
  out.p_value = chisq_sf(out.lr, 1.0);
  return out;
}

LossPair loss_functions(const Eigen::Ref<const Eigen::ArrayXd>& returns,
                        double var) {
  if (returns.size() < 1) throw InputError("loss_functions: empty sample");
  LossPair out;
  double binary = 0.0, quad = 0.0;
  for (int t = 0; t < returns.size(); ++t) {
    if (returns[t] <= var) {
      binary += 1.0;
      const double depth = returns[t] - var;
      quad += 1.0 + depth * depth;
    }
  }
  out.ablf = binary / returns.size();
  out.aqlf = quad / returns.size();
  return out;
}

double z1_statistic(const Eigen::Ref<const Eigen::ArrayXd>& returns,
                    double var_emp, double es_model) {
  if (es_model == 0.0) throw InputError("z1: zero expected shortfall");
  double sum = 0.0;
  int count = 0;
  for (int t = 0; t < returns.size(); ++t) {
    if (returns[t] <= var_emp) {
      sum += returns[t];
      ++count;
    }
  }
  if (count == 0)
    throw UndefinedStatisticError("z1: no exceedances out of sample");
  return 1.0 - (sum / count) / es_model;
}

double z2_statistic(const Eigen::Ref<const Eigen::ArrayXd>& returns,
                    double var_emp, double es_model, double alpha) {
  if (es_model == 0.0) throw InputError("z2: zero expected shortfall");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw InputError("z2: alpha must lie in (0, 1)");
  double sum = 0.0;
  for (int t = 0; t < returns.size(); ++t)
    if (returns[t] <= var_emp) sum += returns[t];
  return 1.0 - sum / (returns.size() * alpha * es_model);
}

double bootstrap_pvalue(double z_observed,
                        const Eigen::Ref<const Eigen::ArrayXd>& returns,
                        double var_emp, double es_model, double alpha,
                        EsStatistic kind, int b, int block_len,
                        std::uint64_t seed) {
  if (b < 1) throw InputError("bootstrap_pvalue: needs replicates");
  if (block_len == 0)
    block_len = default_block_len(static_cast<int>(returns.size()));
  Rng root(seed);
  int hits = 0;
  for (int r = 0; r < b; ++r) {
    Rng rng = root.substream(static_cast<std::uint64_t>(r));
    const Eigen::ArrayXd res = block_resample(returns, block_len, rng);
    double z;
    if (kind == EsStatistic::Z1) {
      try {
        z = z1_statistic(res, var_emp, es_model);
      } catch (const UndefinedStatisticError&) {
        continue;
      }
    } else {
      z = z2_statistic(res, var_emp, es_model, alpha);
    }
    if (z < z_observed) ++hits;
  }
  return static_cast<double>(hits) / b;
}

BacktestReport backtest_model(
    const PortfolioModel& model,
    const Eigen::Ref<const Eigen::ArrayXd>& in_sample,
    const BacktestInput& input) {
  const int t2 = static_cast<int>(input.out_of_sample.size());
  if (t2 < 1) throw InputError("backtest: empty out-of-sample period");
  if (input.b_draws < 100)
    throw InputError("backtest: needs at least 100 bootstrap replications");
  const int n_alpha = static_cast<int>(input.alphas.size());
  if (input.var_model.size() != n_alpha || input.es_model.size() != n_alpha ||
      input.var_emp.size() != n_alpha)
    throw InputError("backtest: risk arrays must align with the alpha grid");
  BacktestReport report;
  report.model = model.name();
  const GofPair gof = gof_tests(in_sample, model, input.b_draws, input.seed);
  report.ks = gof.ks;
  report.ad = gof.ad;
  const int block =
      input.block_len == 0 ? default_block_len(t2) : input.block_len;
  for (int a = 0; a < n_alpha; ++a) {
    BacktestAlphaRow row;
    row.alpha = input.alphas[a];
    row.var_model = input.var_model[a];
    row.es_model = input.es_model[a];
    row.var_emp = input.var_emp[a];
    int n_exc = 0;
    for (int t = 0; t < t2; ++t)
      if (input.out_of_sample[t] <= row.var_model) ++n_exc;
    const KupiecResult kp = kupiec(n_exc, t2, row.alpha);
    row.exceedances = kp.exceedances;
    row.kupiec_lr = kp.lr;
    row.kupiec_p = kp.p_value;
    const LossPair loss = loss_functions(input.out_of_sample, row.var_model);
    row.ablf = loss.ablf;
    row.aqlf = loss.aqlf;
    // Distinct substreams per alpha and statistic keep the p-values stable
    // under changes to the alpha grid.
    const std::uint64_t tag = input.seed + 1000003u * (a + 1);
    try {
      row.z1 = z1_statistic(input.out_of_sample, row.var_emp, row.es_model);
      row.z1_p = bootstrap_pvalue(row.z1, input.out_of_sample, row.var_emp,
                                  row.es_model, row.alpha, EsStatistic::Z1,
                                  input.b_draws, block, tag);
    } catch (const UndefinedStatisticError&) {
      // Reported as NaN; nothing exceeded the empirical VaR out of sample.
    }
    row.z2 = z2_statistic(input.out_of_sample, row.var_emp, row.es_model,
                          row.alpha);
    row.z2_p = bootstrap_pvalue(row.z2, input.out_of_sample, row.var_emp,
                                row.es_model, row.alpha, EsStatistic::Z2,
                                input.b_draws, block, tag + 1);
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace lepto
