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

#ifndef LEPTO_RISK_HPP
#define LEPTO_RISK_HPP

#include <functional>

#include "lepto/numeric/rng.hpp"
#include "lepto/portfolio.hpp"

namespace lepto {

// Model-implied distribution quantities for the portfolio sum. VaR and ES
// are signed lower-tail values (negative for the usual alphas); ES_alpha
// is the mean of the tail at or below VaR_alpha, so ES <= VaR always.
double model_cdf(const SumSpec& spec, double x);
double model_quantile(const SumSpec& spec, double u);
double model_var(const SumSpec& spec, double alpha);
double model_es(const SumSpec& spec, double alpha);

// Inverse-ECDF order statistic: the ceil(alpha T)-th smallest observation.
// Requires T >= 1/alpha. The empirical ES averages the observations at or
// below the empirical VaR.
double empirical_var(const Eigen::Ref<const Eigen::ArrayXd>& sample,
                     double alpha);
double empirical_es(const Eigen::Ref<const Eigen::ArrayXd>& sample,
                    double alpha);

// ceil(T^(1/3)), the default bootstrap block length.
int default_block_len(int t);

// One circular moving-block resample of the series, deterministic given
// the generator state.
Eigen::ArrayXd block_resample(const Eigen::Ref<const Eigen::ArrayXd>& sample,
                              int block_len, Rng& rng);

struct BootstrapInterval {
  double lower = 0.0;
  double upper = 0.0;
  Eigen::ArrayXd replicates;
};

// Percentile interval of the statistic over circular moving-block
// resamples. block_len = sample size degenerates to cyclic copies of the
// data, collapsing the interval onto the point statistic.
BootstrapInterval block_bootstrap(
    const Eigen::Ref<const Eigen::ArrayXd>& sample,
    const std::function<double(const Eigen::ArrayXd&)>& statistic,
    int replicates, int block_len, double confidence, std::uint64_t seed);

}  // namespace lepto

#endif  // LEPTO_RISK_HPP
