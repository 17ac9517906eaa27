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

#ifndef LEPTO_PIPELINE_HPP
#define LEPTO_PIPELINE_HPP

#include <string>
#include <vector>

#include "lepto/backtest.hpp"
#include "lepto/estimation.hpp"

namespace lepto {

// Dates are integer keys yyyymmdd; prices are closing prices.
struct PriceSeries {
  std::string label;
  std::string source;
  std::vector<int> dates;
  std::vector<double> prices;
};

struct PriceTable {
  std::vector<PriceSeries> assets;
};

int parse_date(const std::string& iso);  // "2016-12-30" -> 20161230
std::string format_date(int key);

// One delimited text file per asset with a header row naming Date and
// Close columns; the label defaults to the file stem. Parse failures name
// the file and line.
PriceTable ingest(const std::vector<std::string>& paths,
                  const std::vector<std::string>& labels = {});

// Log returns on the cross-asset date intersection; a date missing in any
// asset drops from all of them before differencing.
struct AlignedReturns {
  std::vector<int> dates;  // date of P_t for each return row
  Eigen::MatrixXd returns;
  std::vector<std::string> labels;

  int length() const { return static_cast<int>(returns.rows()); }
  int width() const { return static_cast<int>(returns.cols()); }
};

AlignedReturns compute_returns(const PriceTable& table);

struct ModelConfig {
  std::vector<Family> families;
  bool copula = false;
  FitMethod method = FitMethod::Ifm;
};

struct RunConfig {
  std::vector<std::string> asset_paths;
  std::vector<std::string> labels;  // empty = derive from paths
  std::vector<ModelConfig> models;
  std::vector<double> alphas{0.005, 0.01, 0.025, 0.05};
  int boot_r = 1000;
  int boot_b = 1000;
  int block_len = 0;  // 0 picks ceil(T^(1/3))
  double confidence = 0.99;
  int split_date = 0;  // yyyymmdd starting period 2; 0 = single period
  std::uint64_t seed = 0;
  std::string out_dir = "out";

  void validate() const;
};

RunConfig load_config(const std::string& path);

// Per-alpha risk table across the configured models plus empirical
// quantities with bootstrap percentile bounds.
struct RiskReport {
  std::vector<double> alphas;
  std::vector<std::string> model_ids;
  Eigen::MatrixXd var_model;  // n_alpha x n_models
  Eigen::MatrixXd es_model;
  Eigen::ArrayXd var_emp, var_emp_lower, var_emp_upper;
  Eigen::ArrayXd es_emp, es_emp_lower, es_emp_upper;
};

// Orchestration behind the subcommands. Each writes its report files under
// config.out_dir and returns the paths written, deterministically for a
// fixed config and seed.
std::vector<std::string> run_ingest(const RunConfig& config);
std::vector<std::string> run_fit(const RunConfig& config);
std::vector<std::string> run_risk(const RunConfig& config);
std::vector<std::string> run_backtest(const RunConfig& config);
std::vector<std::string> run_plotdata(const RunConfig& config);

// Report serialization: tab-separated tables with %.17g numbers so values
// round-trip exactly; NaN is written as NA. Parsers reverse the writers
// (the jackknife covariance stays in memory only).
void write_fit_reports(const std::string& path,
                       const std::vector<FitReport>& reports);
std::vector<FitReport> parse_fit_reports(const std::string& path);

void write_risk_report(const std::string& path, const RiskReport& report);
RiskReport parse_risk_report(const std::string& path);

void write_backtest_reports(const std::string& path,
                            const std::vector<BacktestReport>& reports);
std::vector<BacktestReport> parse_backtest_reports(const std::string& path);

}  // namespace lepto

#endif  // LEPTO_PIPELINE_HPP
