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

#ifndef LEPTO_ESTIMATION_HPP
#define LEPTO_ESTIMATION_HPP

#include <Eigen/Dense>
#include <limits>
#include <string>
#include <vector>

#include "lepto/sums.hpp"

namespace lepto {

// Biased (1/T) central moments. Requires length >= 30 and nonzero
// variance.
struct SeriesStats {
  double mean = 0.0;
  double sd = 0.0;
  double skewness = 0.0;
  double kurtosis = 0.0;
};

SeriesStats sample_stats(const Eigen::Ref<const Eigen::ArrayXd>& x);

struct Standardized {
  Eigen::ArrayXd values;
  double location = 0.0;
  double scale = 1.0;
};

Standardized standardize(const Eigen::Ref<const Eigen::ArrayXd>& x);

// Aligned panel of standardized return series, one column per asset.
// locations/scales hold the affine map back to raw returns.
struct ReturnPanel {
  Eigen::MatrixXd series;
  std::vector<std::string> labels;
  Eigen::ArrayXd locations;
  Eigen::ArrayXd scales;

  int length() const { return static_cast<int>(series.rows()); }
  int width() const { return static_cast<int>(series.cols()); }
  Eigen::ArrayXd column(int i) const { return series.col(i).array(); }
  // Equal-weight portfolio sums of the standardized columns.
  Eigen::ArrayXd sums() const { return series.rowwise().sum().array(); }
};

ReturnPanel make_panel(const std::vector<Eigen::ArrayXd>& columns,
                       std::vector<std::string> labels);

enum class FitMethod { Mom, Ifm };

std::string method_name(FitMethod m);
FitMethod method_from_name(const std::string& name);

struct ParamEstimate {
  std::string name;
  double estimate = 0.0;
  double std_err = std::numeric_limits<double>::quiet_NaN();
  double z_value = std::numeric_limits<double>::quiet_NaN();
  double p_value = std::numeric_limits<double>::quiet_NaN();
  bool feasible = true;
  // Feasible interval the estimate was checked (Mom) or constrained (IFM)
  // against.
  double lower = 0.0;
  double upper = 0.0;
};

struct FitReport {
  FitMethod method = FitMethod::Ifm;
  std::vector<Family> families;
  bool with_copula = false;
  std::vector<std::string> labels;
  int sample_size = 0;
  // n margin betas followed by the n-1 gammas when with_copula.
  std::vector<ParamEstimate> params;
  // Composite log-likelihood at the estimates; NaN when any estimate is
  // infeasible.
  double log_lik = std::numeric_limits<double>::quiet_NaN();
  Eigen::MatrixXd jack_cov;  // empty until godambe_jackknife has run
  double claic_value = std::numeric_limits<double>::quiet_NaN();
  double lrt_stat = std::numeric_limits<double>::quiet_NaN();
  double lrt_p = std::numeric_limits<double>::quiet_NaN();

  std::string model() const;
  int n_params() const { return static_cast<int>(params.size()); }
  Eigen::VectorXd estimates() const;
  bool feasible() const;
  // The fitted model; throws FeasibilityError when an estimate fell
  // outside its interval.
  SumSpec fitted_spec() const;
};

// Moment map for one margin: beta = kurtosis - 5 (HS parent) or
// kurtosis - 3 (Gaussian parent), unclamped.
double mom_beta(double kurtosis, Family family);

FitReport estimate_mom(const ReturnPanel& panel,
                       const std::vector<Family>& families, bool with_copula);

// Two-step inference-for-margins fit: per-margin likelihood in beta over
// [0, max_beta], then per-pair likelihood in gamma over its feasibility
// interval at the fitted betas. A collapsed interval (beta = 0 margin)
// pins gamma to zero; the interval is reported rather than hidden.
FitReport ifm_fit(const ReturnPanel& panel,
                  const std::vector<Family>& families, bool with_copula);

// Leave-one-out jackknife covariance of the point estimator, refitting on
// each re-standardized leave-one-out panel.
Eigen::MatrixXd godambe_jackknife(const ReturnPanel& panel,
                                  const FitReport& fit);

// Composite log-likelihood of a raw parameter stack (betas then gammas).
// No feasibility checks: derivative probes evaluate just outside the
// feasible box, where the expression is still well defined.
double composite_loglik(const ReturnPanel& panel,
                        const std::vector<Family>& families,
                        const Eigen::VectorXd& theta, bool with_copula);

// Takeuchi-style criterion -2 loglik + 2 tr(H V) with H the negative
// Hessian of the composite log-likelihood and V the jackknife covariance.
// For a correctly specified independent likelihood the trace approaches
// the parameter count and the criterion reduces to AIC.
double claic(const FitReport& fit, const ReturnPanel& panel);

struct LrtResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

// Likelihood ratio test of all gammas = 0 against the copula fit;
// chi-squared reference with one df per gamma.
LrtResult lrt_gamma_zero(const FitReport& with_copula,
                         const FitReport& without_copula);

// Fit with standard errors filled in; IFM fits also get CLAIC and, for
// copula models, the gamma = 0 LRT against the independent nested fit.
FitReport fit_model(const ReturnPanel& panel,
                    const std::vector<Family>& families, bool with_copula,
                    FitMethod method, bool with_errors = true);

}  // namespace lepto

#endif  // LEPTO_ESTIMATION_HPP
