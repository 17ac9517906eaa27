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

#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lepto/errors.hpp"
#include "lepto/pipeline.hpp"

namespace {

struct CliOptions {
  std::string config;
  std::vector<std::string> files;
  std::string method;
  std::string family;
  std::string copula;
  std::vector<double> alphas;
  int boot_r = -1;
  int boot_b = -1;
  int block_len = -1;
  double confidence = -1.0;
  std::string split_date;
  long long seed = -1;
  std::string out;
};

void add_common_flags(CLI::App* cmd, CliOptions* opt) {
  cmd->add_option("files", opt->files, "price files (Date/Close columns)");
  cmd->add_option("--config", opt->config, "JSON run configuration");
  cmd->add_option("--method", opt->method, "fit method: mom or ifm")
      ->check(CLI::IsMember({"mom", "ifm"}));
  cmd->add_option("--family", opt->family,
                  "margin families, e.g. hs,hs,gaussian (defines one model)");
  cmd->add_option("--copula", opt->copula, "between-squares copula: on or off")
      ->check(CLI::IsMember({"on", "off"}));
  cmd->add_option("--alphas", opt->alphas, "tail levels in (0, 0.5)")
      ->delimiter(',');
  cmd->add_option("--boot-r", opt->boot_r, "bootstrap replicates for intervals");
  cmd->add_option("--boot-b", opt->boot_b, "simulation draws for test p-values");
  cmd->add_option("--block-len", opt->block_len,
                  "bootstrap block length (0 = ceil(T^(1/3)))");
  cmd->add_option("--confidence", opt->confidence,
                  "bootstrap interval confidence");
  cmd->add_option("--split-date", opt->split_date,
                  "first out-of-sample date, yyyy-mm-dd");
  cmd->add_option("--seed", opt->seed, "random seed");
  cmd->add_option("--out", opt->out, "output directory");
}

lepto::RunConfig build_config(const CliOptions& opt) {
  lepto::RunConfig cfg;
  if (!opt.config.empty()) cfg = lepto::load_config(opt.config);
  if (!opt.files.empty()) {
    cfg.asset_paths = opt.files;
    cfg.labels.clear();
  }
  if (!opt.family.empty()) {
    lepto::ModelConfig model;
    std::istringstream in(opt.family);
    std::string name;
    while (std::getline(in, name, ','))
      model.families.push_back(lepto::family_from_name(name));
    model.copula = opt.copula == "on";
    if (!opt.method.empty())
      model.method = lepto::method_from_name(opt.method);
    cfg.models = {model};
  } else if (!opt.method.empty() || !opt.copula.empty()) {
    throw lepto::InputError("--method and --copula need --family");
  }
  if (!opt.alphas.empty()) cfg.alphas = opt.alphas;
  if (opt.boot_r >= 0) cfg.boot_r = opt.boot_r;
  if (opt.boot_b >= 0) cfg.boot_b = opt.boot_b;
  if (opt.block_len >= 0) cfg.block_len = opt.block_len;
  if (opt.confidence >= 0.0) cfg.confidence = opt.confidence;
  if (!opt.split_date.empty()) cfg.split_date = lepto::parse_date(opt.split_date);
  if (opt.seed >= 0) cfg.seed = static_cast<std::uint64_t>(opt.seed);
  if (!opt.out.empty()) cfg.out_dir = opt.out;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"portfolio return sums under kurtosis-corrected laws"};
  app.require_subcommand(1);
  CliOptions opt;
  std::vector<std::pair<CLI::App*, std::function<std::vector<std::string>(
                                       const lepto::RunConfig&)>>>
      commands = {
          {app.add_subcommand("ingest", "align prices into log returns"),
           lepto::run_ingest},
          {app.add_subcommand("fit", "estimate model parameters"),
           lepto::run_fit},
          {app.add_subcommand("risk", "VaR/ES table with bootstrap bounds"),
           lepto::run_risk},
          {app.add_subcommand("backtest", "out-of-sample coverage and ES tests"),
           lepto::run_backtest},
          {app.add_subcommand("plotdata", "density grids and histogram bins"),
           lepto::run_plotdata},
      };
  for (auto& [cmd, fn] : commands) add_common_flags(cmd, &opt);

  try {
    app.parse(argc, argv);
    for (auto& [cmd, fn] : commands) {
      if (!cmd->parsed()) continue;
      const std::vector<std::string> written = fn(build_config(opt));
      for (const std::string& path : written) std::printf("%s\n", path.c_str());
    }
    return 0;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const lepto::InputError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
