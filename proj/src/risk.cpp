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

#include "lepto/risk.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "lepto/errors.hpp"

namespace lepto {

double model_cdf(const SumSpec& spec, double x) {
  return PortfolioModel(spec).cdf(x);
}

double model_quantile(const SumSpec& spec, double u) {
  return PortfolioModel(spec).quantile(u);
}

double model_var(const SumSpec& spec, double alpha) {
  return PortfolioModel(spec).var(alpha);
}

double model_es(const SumSpec& spec, double alpha) {
  return PortfolioModel(spec).es(alpha);
}

namespace {

void check_alpha(double alpha, int t) {
  if (!(alpha > 0.0 && alpha <= 0.5))
    throw InputError("alpha must lie in (0, 0.5]");
  if (t < static_cast<int>(std::ceil(1.0 / alpha)))
    throw InputError("sample of " + std::to_string(t) +
                     " too small for alpha = " + std::to_string(alpha));
}

// Index (0-based) of the ceil(alpha T)-th order statistic.
int tail_rank(double alpha, int t) {
  const int k = static_cast<int>(std::ceil(alpha * t));
  return std::max(1, k) - 1;
}

}  // namespace

double empirical_var(const Eigen::Ref<const Eigen::ArrayXd>& sample,
                     double alpha) {
  const int t = static_cast<int>(sample.size());
  check_alpha(alpha, t);
  std::vector<double> v(sample.data(), sample.data() + t);
  const int k = tail_rank(alpha, t);
  std::nth_element(v.begin(), v.begin() + k, v.end());
  return v[k];
}

double empirical_es(const Eigen::Ref<const Eigen::ArrayXd>& sample,
                    double alpha) {
  const double var = empirical_var(sample, alpha);
  double sum = 0.0;
  int count = 0;
  for (int i = 0; i < sample.size(); ++i) {
    if (sample[i] <= var) {
      sum += sample[i];
      ++count;
    }
  }
  return sum / count;
}

int default_block_len(int t) {
  if (t < 1) throw InputError("default_block_len: empty sample");
  const double root = std::cbrt(static_cast<double>(t));
  const double nearest = std::round(root);
  // cbrt can land an ulp above an exact integer root, where ceil would
  // overshoot by one.
  if (nearest * nearest * nearest == static_cast<double>(t))
    return static_cast<int>(nearest);
  return static_cast<int>(std::ceil(root));
}

Eigen::ArrayXd block_resample(const Eigen::Ref<const Eigen::ArrayXd>& sample,
                              int block_len, Rng& rng) {
  const int t = static_cast<int>(sample.size());
  if (t < 1) throw InputError("block_resample: empty sample");
  if (block_len < 1 || block_len > t)
    throw InputError("block_resample: block length must lie in [1, T]");
  Eigen::ArrayXd out(t);
  int filled = 0;
  while (filled < t) {
    const int start = static_cast<int>(rng.below(t));
    for (int j = 0; j < block_len && filled < t; ++j, ++filled)
      out[filled] = sample[(start + j) % t];
  }
  return out;
}

BootstrapInterval block_bootstrap(
    const Eigen::Ref<const Eigen::ArrayXd>& sample,
    const std::function<double(const Eigen::ArrayXd&)>& statistic,
    int replicates, int block_len, double confidence, std::uint64_t seed) {
  if (replicates < 2) throw InputError("block_bootstrap: needs replicates");
  if (!(confidence > 0.0 && confidence < 1.0))
    throw InputError("block_bootstrap: confidence must lie in (0, 1)");
  Rng root(seed);
  BootstrapInterval out;
  out.replicates.resize(replicates);
  for (int r = 0; r < replicates; ++r) {
    Rng rng = root.substream(static_cast<std::uint64_t>(r));
    out.replicates[r] = statistic(block_resample(sample, block_len, rng));
  }
  std::vector<double> sorted(out.replicates.data(),
                             out.replicates.data() + replicates);
  std::sort(sorted.begin(), sorted.end());
  const auto pick = [&](double u) {
    const double rank = u * replicates;
    const double nearest = std::round(rank);
    // (1 - confidence) / 2 carries a few ulps of noise; when the exact
    // rank is an integer, ceil of the noisy product must not shift the
    // pick by one.
    const int k = std::abs(rank - nearest) < 1e-9 * replicates
                      ? static_cast<int>(nearest)
                      : static_cast<int>(std::ceil(rank));
    return sorted[std::clamp(k, 1, replicates) - 1];
  };
  out.lower = pick(0.5 * (1.0 - confidence));
  out.upper = pick(0.5 * (1.0 + confidence));
  return out;
}

}  // namespace lepto
