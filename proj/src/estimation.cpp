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

#include "lepto/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "lepto/copula.hpp"
#include "lepto/errors.hpp"
#include "lepto/numeric/log_sum.hpp"
#include "lepto/numeric/roots.hpp"
#include "lepto/numeric/special.hpp"

namespace lepto {

namespace {

constexpr int kMinLength = 30;
constexpr double kBadLogLik = -1e300;
constexpr double kParamTol = 1e-8;

void check_length(int t, const char* what) {
  if (t < kMinLength)
    throw InputError(std::string(what) + ": needs at least " +
                     std::to_string(kMinLength) + " observations, got " +
                     std::to_string(t));
}

// Sum of log1p(theta * q_t); -inf (as a large negative) when any factor is
// annihilated, which acts as a barrier for the bounded optimizer.
double log1p_loglik(double theta, const Eigen::ArrayXd& q) {
  double s = 0.0;
  for (int t = 0; t < q.size(); ++t) {
    const double v = theta * q[t];
    if (v <= -1.0) return kBadLogLik;
    s += std::log1p(v);
  }
  return s;
}

double argmax_log1p(const Eigen::ArrayXd& q, double lo, double hi) {
  if (hi - lo < kParamTol) return 0.5 * (lo + hi);
  return minimize([&](double b) { return -log1p_loglik(b, q); }, lo, hi,
                  kParamTol)
      .first;
}

Eigen::ArrayXd margin_q(const Eigen::ArrayXd& x, const MarginSpec& shape) {
  Eigen::ArrayXd q(x.size());
  for (int t = 0; t < x.size(); ++t)
    q[t] = margin_p4(x[t], shape.family) / shape.p4_scale();
  return q;
}

double biased_kurtosis(const Eigen::ArrayXd& x) {
  const double mean = x.mean();
  const Eigen::ArrayXd c = x - mean;
  const double m2 = c.square().mean();
  if (m2 <= 0.0) throw InputError("kurtosis: zero variance");
  return c.square().square().mean() / (m2 * m2);
}

// Point estimators on a standardized matrix; no names, no feasibility
// bookkeeping. These are what the jackknife refits.
Eigen::VectorXd mom_point(const Eigen::MatrixXd& s,
                          const std::vector<Family>& families,
                          bool with_copula) {
  const int n = static_cast<int>(s.cols());
  Eigen::VectorXd theta(n + (with_copula ? n - 1 : 0));
  for (int i = 0; i < n; ++i)
    theta[i] = mom_beta(biased_kurtosis(s.col(i).array()), families[i]);
  if (with_copula)
    for (int j = 0; j + 1 < n; ++j)
      theta[n + j] = (s.col(j).array().square() *
                      s.col(j + 1).array().square())
                         .mean() -
                     1.0;
  return theta;
}

Eigen::VectorXd ifm_point(const Eigen::MatrixXd& s,
                          const std::vector<Family>& families,
                          bool with_copula) {
  const int n = static_cast<int>(s.cols());
  Eigen::VectorXd theta(n + (with_copula ? n - 1 : 0));
  for (int i = 0; i < n; ++i) {
    const MarginSpec shape{families[i], 0.0};
    theta[i] = argmax_log1p(margin_q(s.col(i).array(), shape), 0.0,
                            shape.max_beta());
  }
  if (with_copula) {
    std::vector<RPolynomial> r;
    r.reserve(n);
    for (int i = 0; i < n; ++i)
      r.emplace_back(MarginSpec{families[i], theta[i]});
    for (int j = 0; j + 1 < n; ++j) {
      const GammaBounds gb = gamma_bounds(r[j], r[j + 1]);
      if (gb.upper - gb.lower < 1e-14) {
        theta[n + j] = 0.0;
        continue;
      }
      Eigen::ArrayXd w(s.rows());
      for (int t = 0; t < s.rows(); ++t)
        w[t] = r[j](s(t, j)) * r[j + 1](s(t, j + 1));
      theta[n + j] = argmax_log1p(w, gb.lower, gb.upper);
    }
  }
  return theta;
}

Eigen::VectorXd point_estimate(const Eigen::MatrixXd& s,
                               const std::vector<Family>& families,
                               bool with_copula, FitMethod method) {
  return method == FitMethod::Mom ? mom_point(s, families, with_copula)
                                  : ifm_point(s, families, with_copula);
}

Eigen::MatrixXd standardized_columns(const Eigen::MatrixXd& raw) {
  Eigen::MatrixXd out(raw.rows(), raw.cols());
  for (int i = 0; i < raw.cols(); ++i)
    out.col(i) = standardize(raw.col(i).array()).values.matrix();
  return out;
}

void check_panel_match(const FitReport& fit, const ReturnPanel& panel) {
  if (fit.sample_size != panel.length() ||
      static_cast<int>(fit.families.size()) != panel.width())
    throw InputError("fit does not match the panel it is evaluated on");
}

std::string pair_name(const std::string& a, const std::string& b) {
  return "gamma[" + a + "," + b + "]";
}

FitReport report_skeleton(const ReturnPanel& panel,
                          const std::vector<Family>& families,
                          bool with_copula, FitMethod method) {
  if (static_cast<int>(families.size()) != panel.width())
    throw InputError("one family per panel column required");
  if (with_copula && panel.width() < 2)
    throw InputError("copula fit needs at least two columns");
  FitReport fit;
  fit.method = method;
  fit.families = families;
  fit.with_copula = with_copula;
  fit.labels = panel.labels;
  fit.sample_size = panel.length();
  return fit;
}

}  // namespace

SeriesStats sample_stats(const Eigen::Ref<const Eigen::ArrayXd>& x) {
  check_length(static_cast<int>(x.size()), "sample_stats");
  SeriesStats st;
  st.mean = x.mean();
  const Eigen::ArrayXd c = x - st.mean;
  const double m2 = c.square().mean();
  if (m2 <= 0.0) throw InputError("sample_stats: zero variance");
  st.sd = std::sqrt(m2);
  st.skewness = c.cube().mean() / (m2 * st.sd);
  st.kurtosis = c.square().square().mean() / (m2 * m2);
  return st;
}

Standardized standardize(const Eigen::Ref<const Eigen::ArrayXd>& x) {
  const SeriesStats st = sample_stats(x);
  return {(x - st.mean) / st.sd, st.mean, st.sd};
}

ReturnPanel make_panel(const std::vector<Eigen::ArrayXd>& columns,
                       std::vector<std::string> labels) {
  if (columns.empty()) throw InputError("make_panel: no columns");
  if (labels.size() != columns.size())
    throw InputError("make_panel: one label per column required");
  if (std::set<std::string>(labels.begin(), labels.end()).size() !=
      labels.size())
    throw InputError("make_panel: duplicate labels");
  const int t = static_cast<int>(columns[0].size());
  ReturnPanel panel;
  panel.series.resize(t, static_cast<int>(columns.size()));
  panel.locations.resize(static_cast<int>(columns.size()));
  panel.scales.resize(static_cast<int>(columns.size()));
  panel.labels = std::move(labels);
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i].size() != t)
      throw InputError("make_panel: columns must share a common length");
    const Standardized s = standardize(columns[i]);
    panel.series.col(static_cast<int>(i)) = s.values.matrix();
    panel.locations[static_cast<int>(i)] = s.location;
    panel.scales[static_cast<int>(i)] = s.scale;
  }
  return panel;
}

std::string method_name(FitMethod m) {
  return m == FitMethod::Mom ? "mom" : "ifm";
}

FitMethod method_from_name(const std::string& name) {
  if (name == "mom") return FitMethod::Mom;
  if (name == "ifm") return FitMethod::Ifm;
  throw InputError("unknown fit method: " + name);
}

std::string FitReport::model() const {
  const int n = static_cast<int>(families.size());
  SumSpec shape;
  for (int i = 0; i < n; ++i) {
    const MarginSpec m{families[i], 0.0};
    shape.margins.push_back(
        {families[i], std::clamp(params[i].estimate, 0.0, m.max_beta())});
  }
  if (with_copula) shape.gammas.assign(n - 1, 0.0);
  return model_name(shape);
}

Eigen::VectorXd FitReport::estimates() const {
  Eigen::VectorXd theta(n_params());
  for (int k = 0; k < n_params(); ++k) theta[k] = params[k].estimate;
  return theta;
}

bool FitReport::feasible() const {
  return std::all_of(params.begin(), params.end(),
                     [](const ParamEstimate& p) { return p.feasible; });
}

SumSpec FitReport::fitted_spec() const {
  const int n = static_cast<int>(families.size());
  for (const ParamEstimate& p : params)
    if (!p.feasible)
      throw FeasibilityError("fitted model is infeasible: " + p.name + " = " +
                             std::to_string(p.estimate) + " outside [" +
                             std::to_string(p.lower) + ", " +
                             std::to_string(p.upper) + "]");
  SumSpec spec;
  for (int i = 0; i < n; ++i)
    spec.margins.push_back({families[i], params[i].estimate});
  if (with_copula)
    for (int j = 0; j + 1 < n; ++j)
      spec.gammas.push_back(params[n + j].estimate);
  return spec;
}

double mom_beta(double kurtosis, Family family) {
  return kurtosis - (family == Family::HS ? 5.0 : 3.0);
}

FitReport estimate_mom(const ReturnPanel& panel,
                       const std::vector<Family>& families, bool with_copula) {
  FitReport fit = report_skeleton(panel, families, with_copula,
                                  FitMethod::Mom);
  const int n = panel.width();
  const Eigen::VectorXd theta = mom_point(panel.series, families, with_copula);
  for (int i = 0; i < n; ++i) {
    ParamEstimate p;
    p.name = "beta[" + panel.labels[i] + "]";
    p.estimate = theta[i];
    p.lower = 0.0;
    p.upper = MarginSpec{families[i], 0.0}.max_beta();
    p.feasible = theta[i] >= p.lower && theta[i] <= p.upper;
    fit.params.push_back(p);
  }
  if (with_copula) {
    // Gamma feasibility intervals need in-range betas; infeasible ones are
    // clamped for the interval only, the estimate itself stays raw.
    std::vector<RPolynomial> r;
    for (int i = 0; i < n; ++i)
      r.emplace_back(MarginSpec{
          families[i],
          std::clamp(theta[i], 0.0, fit.params[i].upper)});
    for (int j = 0; j + 1 < n; ++j) {
      const GammaBounds gb = gamma_bounds(r[j], r[j + 1]);
      ParamEstimate p;
      p.name = pair_name(panel.labels[j], panel.labels[j + 1]);
      p.estimate = theta[n + j];
      p.lower = gb.lower;
      p.upper = gb.upper;
      p.feasible = gb.contains(p.estimate);
      fit.params.push_back(p);
    }
  }
  if (fit.feasible())
    fit.log_lik = composite_loglik(panel, families, theta, with_copula);
  return fit;
}

FitReport ifm_fit(const ReturnPanel& panel,
                  const std::vector<Family>& families, bool with_copula) {
  FitReport fit = report_skeleton(panel, families, with_copula,
                                  FitMethod::Ifm);
  const int n = panel.width();
  const Eigen::VectorXd theta = ifm_point(panel.series, families, with_copula);
  for (int i = 0; i < n; ++i) {
    ParamEstimate p;
    p.name = "beta[" + panel.labels[i] + "]";
    p.estimate = theta[i];
    p.lower = 0.0;
    p.upper = MarginSpec{families[i], 0.0}.max_beta();
    fit.params.push_back(p);
  }
  if (with_copula) {
    std::vector<RPolynomial> r;
    for (int i = 0; i < n; ++i)
      r.emplace_back(MarginSpec{families[i], theta[i]});
    for (int j = 0; j + 1 < n; ++j) {
      const GammaBounds gb = gamma_bounds(r[j], r[j + 1]);
      ParamEstimate p;
      p.name = pair_name(panel.labels[j], panel.labels[j + 1]);
      p.estimate = theta[n + j];
      p.lower = gb.lower;
      p.upper = gb.upper;
      fit.params.push_back(p);
    }
  }
  fit.log_lik = composite_loglik(panel, families, theta, with_copula);
  return fit;
}

Eigen::MatrixXd godambe_jackknife(const ReturnPanel& panel,
                                  const FitReport& fit) {
  check_panel_match(fit, panel);
  const int t_len = panel.length();
  const int n = panel.width();
  const int p = fit.n_params();
  check_length(t_len - 1, "godambe_jackknife");
  Eigen::MatrixXd thetas(t_len, p);
  Eigen::MatrixXd loo(t_len - 1, n);
  for (int t = 0; t < t_len; ++t) {
    if (t > 0) loo.topRows(t) = panel.series.topRows(t);
    if (t + 1 < t_len)
      loo.bottomRows(t_len - 1 - t) = panel.series.bottomRows(t_len - 1 - t);
    thetas.row(t) =
        point_estimate(standardized_columns(loo), fit.families,
                       fit.with_copula, fit.method)
            .transpose();
  }
  const Eigen::RowVectorXd mean = thetas.colwise().mean();
  const Eigen::MatrixXd centered = thetas.rowwise() - mean;
  return (double(t_len - 1) / t_len) * centered.transpose() * centered;
}

double composite_loglik(const ReturnPanel& panel,
                        const std::vector<Family>& families,
                        const Eigen::VectorXd& theta, bool with_copula) {
  const int n = panel.width();
  if (static_cast<int>(families.size()) != n)
    throw InputError("one family per panel column required");
  if (theta.size() != n + (with_copula ? n - 1 : 0))
    throw InputError("composite_loglik: parameter stack size mismatch");
  CompensatedSum total;
  for (int i = 0; i < n; ++i) {
    const Family f = families[i];
    const double scale = MarginSpec{f, 0.0}.p4_scale();
    for (int t = 0; t < panel.length(); ++t) {
      const double x = panel.series(t, i);
      const double v = (theta[i] / scale) * margin_p4(x, f);
      if (v <= -1.0) return kBadLogLik;
      const double parent =
          f == Family::HS
              ? hs_log_pdf(x)
              : -0.5 * x * x - 0.91893853320467274178032973640562;
      total.add(parent + std::log1p(v));
    }
  }
  if (with_copula) {
    // r evaluated from the raw betas so derivative probes see the full
    // dependence of the copula term on beta.
    for (int j = 0; j + 1 < n; ++j) {
      const Family fa = families[j];
      const Family fb = families[j + 1];
      const double ca = fa == Family::HS ? 4.0 : 2.0;
      const double cb = fb == Family::HS ? 4.0 : 2.0;
      const double sa = MarginSpec{fa, 0.0}.p4_scale();
      const double sb = MarginSpec{fb, 0.0}.p4_scale();
      for (int t = 0; t < panel.length(); ++t) {
        const double xa = panel.series(t, j);
        const double xb = panel.series(t, j + 1);
        const double ra = (xa * xa - 1.0) /
                          (ca * (1.0 + (theta[j] / sa) * margin_p4(xa, fa)));
        const double rb =
            (xb * xb - 1.0) /
            (cb * (1.0 + (theta[j + 1] / sb) * margin_p4(xb, fb)));
        const double v = theta[n + j] * ra * rb;
        if (v <= -1.0) return kBadLogLik;
        total.add(std::log1p(v));
      }
    }
  }
  return total.value();
}

double claic(const FitReport& fit, const ReturnPanel& panel) {
  check_panel_match(fit, panel);
  if (!fit.feasible() || !std::isfinite(fit.log_lik))
    throw FeasibilityError("claic: fit has no usable log-likelihood");
  const Eigen::MatrixXd v =
      fit.jack_cov.size() > 0 ? fit.jack_cov : godambe_jackknife(panel, fit);
  const int p = fit.n_params();
  const Eigen::VectorXd theta = fit.estimates();
  const auto loglik = [&](const Eigen::VectorXd& th) {
    return composite_loglik(panel, fit.families, th, fit.with_copula);
  };
  Eigen::VectorXd h(p);
  for (int k = 0; k < p; ++k) h[k] = 1e-4 * std::max(1.0, std::abs(theta[k]));
  const double f0 = loglik(theta);
  Eigen::MatrixXd hess(p, p);
  for (int a = 0; a < p; ++a) {
    Eigen::VectorXd th = theta;
    th[a] = theta[a] + h[a];
    const double fp = loglik(th);
    th[a] = theta[a] - h[a];
    const double fm = loglik(th);
    hess(a, a) = (fp - 2.0 * f0 + fm) / (h[a] * h[a]);
    for (int b = a + 1; b < p; ++b) {
      th = theta;
      th[a] += h[a];
      th[b] += h[b];
      const double fpp = loglik(th);
      th[b] -= 2.0 * h[b];
      const double fpm = loglik(th);
      th[a] -= 2.0 * h[a];
      const double fmm = loglik(th);
      th[b] += 2.0 * h[b];
      const double fmp = loglik(th);
      hess(a, b) = hess(b, a) = (fpp - fpm - fmp + fmm) / (4.0 * h[a] * h[b]);
    }
  }
  const double penalty = (-hess * v).trace();
  return -2.0 * fit.log_lik + 2.0 * penalty;
}

LrtResult lrt_gamma_zero(const FitReport& with_copula,
                         const FitReport& without_copula) {
  if (!with_copula.with_copula || without_copula.with_copula)
    throw InputError("lrt_gamma_zero: needs a copula fit and its nested fit");
  if (with_copula.families != without_copula.families ||
      with_copula.labels != without_copula.labels ||
      with_copula.sample_size != without_copula.sample_size)
    throw InputError("lrt_gamma_zero: fits come from different data");
  if (!std::isfinite(with_copula.log_lik) ||
      !std::isfinite(without_copula.log_lik))
    throw InputError("lrt_gamma_zero: log-likelihood unavailable");
  LrtResult out;
  out.statistic =
      std::max(0.0, 2.0 * (with_copula.log_lik - without_copula.log_lik));
  const int df = static_cast<int>(with_copula.families.size()) - 1;
  out.p_value = chisq_sf(out.statistic, df);
  return out;
}

FitReport fit_model(const ReturnPanel& panel,
                    const std::vector<Family>& families, bool with_copula,
                    FitMethod method, bool with_errors) {
  FitReport fit = method == FitMethod::Mom
                      ? estimate_mom(panel, families, with_copula)
                      : ifm_fit(panel, families, with_copula);
  if (!with_errors) return fit;
  fit.jack_cov = godambe_jackknife(panel, fit);
  for (int k = 0; k < fit.n_params(); ++k) {
    ParamEstimate& p = fit.params[k];
    p.std_err = std::sqrt(std::max(0.0, fit.jack_cov(k, k)));
    if (p.std_err > 0.0) {
      p.z_value = p.estimate / p.std_err;
      p.p_value = std::erfc(std::abs(p.z_value) / std::sqrt(2.0));
    }
  }
  if (method == FitMethod::Ifm) {
    fit.claic_value = claic(fit, panel);
    if (with_copula) {
      const FitReport nested = ifm_fit(panel, families, false);
      const LrtResult lrt = lrt_gamma_zero(fit, nested);
      fit.lrt_stat = lrt.statistic;
      fit.lrt_p = lrt.p_value;
    }
  }
  return fit;
}

}  // namespace lepto
