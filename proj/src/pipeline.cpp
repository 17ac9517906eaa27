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

#include "lepto/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "lepto/errors.hpp"

namespace lepto {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::vector<std::string> split(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, delim)) out.push_back(field);
  if (!line.empty() && line.back() == delim) out.push_back("");
  return out;
}

std::string num(double v) {
  if (std::isnan(v)) return "NA";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_num(const std::string& s, const std::string& where) {
  if (s == "NA") return std::numeric_limits<double>::quiet_NaN();
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0')
    throw InputError(where + ": malformed number '" + s + "'");
  return v;
}

int parse_int(const std::string& s, const std::string& where) {
  const double v = parse_num(s, where);
  if (v != std::floor(v)) throw InputError(where + ": expected an integer");
  return static_cast<int>(v);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path);
  return in;
}

}  // namespace

int parse_date(const std::string& iso) {
  const std::string s = trim(iso);
  if (s.size() != 10 || s[4] != '-' || s[7] != '-')
    throw InputError("date '" + s + "' is not ISO-8601 (yyyy-mm-dd)");
  for (int i : {0, 1, 2, 3, 5, 6, 8, 9})
    if (!std::isdigit(static_cast<unsigned char>(s[i])))
      throw InputError("date '" + s + "' is not ISO-8601 (yyyy-mm-dd)");
  const int y = std::stoi(s.substr(0, 4));
  const int m = std::stoi(s.substr(5, 2));
  const int d = std::stoi(s.substr(8, 2));
  if (m < 1 || m > 12 || d < 1 || d > 31)
    throw InputError("date '" + s + "' is out of range");
  return y * 10000 + m * 100 + d;
}

std::string format_date(int key) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", key / 10000,
                (key / 100) % 100, key % 100);
  return buf;
}

namespace {

PriceSeries parse_price_file(const std::string& path,
                             const std::string& label) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line))
    throw InputError(path + ": empty file");
  char delim = ',';
  if (line.find('\t') != std::string::npos)
    delim = '\t';
  else if (line.find(',') == std::string::npos &&
           line.find(';') != std::string::npos)
    delim = ';';
  const std::vector<std::string> header = split(trim(line), delim);
  int date_col = -1, close_col = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    const std::string name = lower(trim(header[i]));
    if (name == "date") date_col = static_cast<int>(i);
    if (name == "close") close_col = static_cast<int>(i);
  }
  if (date_col < 0 || close_col < 0)
    throw InputError(path + ": header must name Date and Close columns");
  PriceSeries series;
  series.label = label;
  series.source = path;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string row = trim(line);
    if (row.empty()) continue;
    const std::string where = path + ":" + std::to_string(line_no);
    const std::vector<std::string> fields = split(row, delim);
    if (static_cast<int>(fields.size()) <= std::max(date_col, close_col))
      throw InputError(where + ": too few columns");
    int date;
    try {
      date = parse_date(fields[date_col]);
    } catch (const InputError& e) {
      throw InputError(where + ": " + e.what());
    }
    const double price = parse_num(trim(fields[close_col]), where);
    if (!(price > 0.0)) throw InputError(where + ": price must be positive");
    if (!series.dates.empty() && date <= series.dates.back())
      throw InputError(where + ": dates must be strictly increasing");
    series.dates.push_back(date);
    series.prices.push_back(price);
  }
  if (series.dates.size() < 2)
    throw InputError(path + ": needs at least two price rows");
  return series;
}

}  // namespace

PriceTable ingest(const std::vector<std::string>& paths,
                  const std::vector<std::string>& labels) {
  if (paths.empty()) throw InputError("ingest: no input files");
  if (!labels.empty() && labels.size() != paths.size())
    throw InputError("ingest: one label per file required");
  PriceTable table;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const std::string label =
        labels.empty() ? std::filesystem::path(paths[i]).stem().string()
                       : labels[i];
    table.assets.push_back(parse_price_file(paths[i], label));
  }
  return table;
}

AlignedReturns compute_returns(const PriceTable& table) {
  if (table.assets.empty()) throw InputError("compute_returns: no assets");
  std::vector<int> common = table.assets[0].dates;
  for (std::size_t i = 1; i < table.assets.size(); ++i) {
    std::vector<int> next;
    std::set_intersection(common.begin(), common.end(),
                          table.assets[i].dates.begin(),
                          table.assets[i].dates.end(),
                          std::back_inserter(next));
    common = std::move(next);
  }
  if (common.size() < 2)
    throw InputError("compute_returns: fewer than two dates shared by all "
                     "assets");
  const int t = static_cast<int>(common.size()) - 1;
  const int n = static_cast<int>(table.assets.size());
  AlignedReturns out;
  out.returns.resize(t, n);
  out.dates.assign(common.begin() + 1, common.end());
  for (int i = 0; i < n; ++i) {
    const PriceSeries& asset = table.assets[i];
    out.labels.push_back(asset.label);
    std::size_t k = 0;
    double prev = 0.0;
    for (std::size_t c = 0; c < common.size(); ++c) {
      while (asset.dates[k] != common[c]) ++k;
      const double price = asset.prices[k];
      if (c > 0) out.returns(static_cast<int>(c) - 1, i) = std::log(price / prev);
      prev = price;
    }
  }
  return out;
}

void RunConfig::validate() const {
  if (asset_paths.empty()) throw InputError("config: no asset files");
  if (!labels.empty() && labels.size() != asset_paths.size())
    throw InputError("config: one label per asset required");
  if (alphas.empty()) throw InputError("config: empty alpha grid");
  for (double a : alphas)
    if (!(a > 0.0 && a < 0.5))
      throw InputError("config: alpha " + num(a) + " outside (0, 0.5)");
  if (!(confidence > 0.0 && confidence < 1.0))
    throw InputError("config: confidence must lie in (0, 1)");
  if (boot_r < 2) throw InputError("config: boot_r too small");
  if (boot_b < 100) throw InputError("config: boot_b must be at least 100");
  if (block_len < 0) throw InputError("config: negative block length");
  if (out_dir.empty()) throw InputError("config: empty output directory");
  for (const ModelConfig& m : models) {
    if (m.families.empty()) throw InputError("config: model without families");
    if (m.copula && m.families.size() < 2)
      throw InputError("config: copula model needs at least two margins");
  }
}

RunConfig load_config(const std::string& path) {
  std::ifstream in = open_in(path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
  static const std::vector<std::string> known = {
      "assets",    "models",     "alphas", "boot_r", "boot_b",
      "block_len", "confidence", "split_date", "seed", "out"};
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw InputError(path + ": unknown config key '" + key + "'");
  }
  RunConfig cfg;
  try {
    if (j.contains("assets")) {
      for (const auto& a : j["assets"]) {
        if (a.is_string()) {
          cfg.asset_paths.push_back(a.get<std::string>());
          cfg.labels.push_back(
              std::filesystem::path(cfg.asset_paths.back()).stem().string());
        } else {
          cfg.asset_paths.push_back(a.at("path").get<std::string>());
          cfg.labels.push_back(
              a.contains("label")
                  ? a.at("label").get<std::string>()
                  : std::filesystem::path(cfg.asset_paths.back())
                        .stem()
                        .string());
        }
      }
    }
    if (j.contains("models")) {
      for (const auto& m : j["models"]) {
        ModelConfig mc;
        for (const auto& f : m.at("families"))
          mc.families.push_back(family_from_name(f.get<std::string>()));
        mc.copula = m.value("copula", false);
        mc.method = method_from_name(m.value("method", std::string("ifm")));
        cfg.models.push_back(mc);
      }
    }
    if (j.contains("alphas"))
      cfg.alphas = j["alphas"].get<std::vector<double>>();
    cfg.boot_r = j.value("boot_r", cfg.boot_r);
    cfg.boot_b = j.value("boot_b", cfg.boot_b);
    cfg.block_len = j.value("block_len", cfg.block_len);
    cfg.confidence = j.value("confidence", cfg.confidence);
    if (j.contains("split_date"))
      cfg.split_date = parse_date(j["split_date"].get<std::string>());
    cfg.seed = j.value("seed", cfg.seed);
    cfg.out_dir = j.value("out", cfg.out_dir);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
  return cfg;
}

namespace {

struct Workspace {
  AlignedReturns all;
  ReturnPanel panel1;
  Eigen::ArrayXd sums1;
  Eigen::ArrayXd sums2;  // empty without a split
  int t1 = 0;
  int t2 = 0;
};

Workspace prepare(const RunConfig& cfg, bool need_period2) {
  cfg.validate();
  Workspace ws;
  ws.all = compute_returns(ingest(cfg.asset_paths, cfg.labels));
  int t1 = ws.all.length();
  if (cfg.split_date != 0) {
    if (cfg.split_date <= ws.all.dates.front() ||
        cfg.split_date > ws.all.dates.back())
      throw InputError("split date " + format_date(cfg.split_date) +
                       " outside the data range");
    t1 = static_cast<int>(
        std::lower_bound(ws.all.dates.begin(), ws.all.dates.end(),
                         cfg.split_date) -
        ws.all.dates.begin());
  } else if (need_period2) {
    throw InputError("backtest needs a split date");
  }
  ws.t1 = t1;
  ws.t2 = ws.all.length() - t1;
  if (need_period2 && ws.t2 == 0)
    throw InputError("split leaves no out-of-sample data");
  std::vector<Eigen::ArrayXd> cols;
  for (int i = 0; i < ws.all.width(); ++i)
    cols.push_back(ws.all.returns.col(i).head(t1).array());
  ws.panel1 = make_panel(cols, ws.all.labels);
  ws.sums1 = ws.panel1.sums();
  if (ws.t2 > 0) {
    Eigen::MatrixXd raw2 = ws.all.returns.bottomRows(ws.t2);
    ws.sums2.setZero(ws.t2);
    for (int i = 0; i < ws.all.width(); ++i)
      ws.sums2 += (raw2.col(i).array() - ws.panel1.locations[i]) /
                  ws.panel1.scales[i];
  }
  return ws;
}

void require_models(const RunConfig& cfg) {
  if (cfg.models.empty())
    throw InputError("no models configured; pass --family or a config file");
}

std::string model_id(int index, const FitReport& fit) {
  return std::to_string(index + 1) + "_" + fit.model() + "_" +
         method_name(fit.method);
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
  std::filesystem::create_directories(cfg.out_dir);
  return (std::filesystem::path(cfg.out_dir) / name).string();
}

constexpr char kFitHeader[] =
    "id\tmodel\tmethod\tn_obs\tparameter\tfamily\testimate\tstd_err\t"
    "z_value\tp_value\tfeasible\tlower\tupper\tlog_lik\tclaic\tlrt_stat\t"
    "lrt_p";

}  // namespace

void write_fit_reports(const std::string& path,
                       const std::vector<FitReport>& reports) {
  std::ofstream out = open_out(path);
  out << kFitHeader << "\n";
  for (std::size_t m = 0; m < reports.size(); ++m) {
    const FitReport& fit = reports[m];
    const int n = static_cast<int>(fit.families.size());
    for (int k = 0; k < fit.n_params(); ++k) {
      const ParamEstimate& p = fit.params[k];
      out << m + 1 << '\t' << fit.model() << '\t' << method_name(fit.method)
          << '\t' << fit.sample_size << '\t' << p.name << '\t'
          << (k < n ? family_name(fit.families[k]) : "-") << '\t'
          << num(p.estimate) << '\t' << num(p.std_err) << '\t'
          << num(p.z_value) << '\t' << num(p.p_value) << '\t'
          << (p.feasible ? 1 : 0) << '\t' << num(p.lower) << '\t'
          << num(p.upper) << '\t' << num(fit.log_lik) << '\t'
          << num(fit.claic_value) << '\t' << num(fit.lrt_stat) << '\t'
          << num(fit.lrt_p) << "\n";
    }
  }
}

std::vector<FitReport> parse_fit_reports(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || trim(line) != kFitHeader)
    throw InputError(path + ": unexpected fit report header");
  std::vector<FitReport> reports;
  int current_id = 0;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::string where = path + ":" + std::to_string(line_no);
    const std::vector<std::string> f = split(line, '\t');
    if (f.size() != 17) throw InputError(where + ": wrong column count");
    const int id = parse_int(f[0], where);
    if (id != current_id) {
      if (id != current_id + 1)
        throw InputError(where + ": report ids must be consecutive");
      current_id = id;
      FitReport fit;
      fit.method = method_from_name(f[2]);
      fit.sample_size = parse_int(f[3], where);
      fit.log_lik = parse_num(f[13], where);
      fit.claic_value = parse_num(f[14], where);
      fit.lrt_stat = parse_num(f[15], where);
      fit.lrt_p = parse_num(f[16], where);
      reports.push_back(std::move(fit));
    }
    FitReport& fit = reports.back();
    ParamEstimate p;
    p.name = f[4];
    p.estimate = parse_num(f[6], where);
    p.std_err = parse_num(f[7], where);
    p.z_value = parse_num(f[8], where);
    p.p_value = parse_num(f[9], where);
    p.feasible = parse_int(f[10], where) != 0;
    p.lower = parse_num(f[11], where);
    p.upper = parse_num(f[12], where);
    if (p.name.rfind("beta[", 0) == 0) {
      fit.families.push_back(family_from_name(f[5]));
      fit.labels.push_back(p.name.substr(5, p.name.size() - 6));
    } else {
      fit.with_copula = true;
    }
    fit.params.push_back(std::move(p));
  }
  return reports;
}

namespace {

std::vector<FitReport> fit_all(const RunConfig& cfg, const Workspace& ws,
                               bool with_errors) {
  std::vector<FitReport> fits;
  for (const ModelConfig& m : cfg.models)
    fits.push_back(
        fit_model(ws.panel1, m.families, m.copula, m.method, with_errors));
  return fits;
}

void write_fit_summary(const std::string& path,
                       const std::vector<FitReport>& fits,
                       const Workspace& ws) {
  std::ofstream out = open_out(path);
  char buf[160];
  out << "fit summary\n";
  std::snprintf(buf, sizeof(buf), "assets: %d, in-sample T = %d\n\n",
                ws.panel1.width(), ws.panel1.length());
  out << buf;
  for (std::size_t m = 0; m < fits.size(); ++m) {
    const FitReport& fit = fits[m];
    out << "[" << m + 1 << "] " << fit.model() << " ("
        << method_name(fit.method) << ")\n";
    for (const ParamEstimate& p : fit.params) {
      std::snprintf(buf, sizeof(buf),
                    "  %-24s = %9.4f  (se %.4f, z %.2f, p %.4f)",
                    p.name.c_str(), p.estimate, p.std_err, p.z_value,
                    p.p_value);
      out << buf;
      if (!p.feasible) {
        std::snprintf(buf, sizeof(buf), "  INFEASIBLE: outside [%.4g, %.4g]",
                      p.lower, p.upper);
        out << buf;
      }
      out << "\n";
    }
    if (std::isfinite(fit.log_lik)) {
      std::snprintf(buf, sizeof(buf), "  log-likelihood = %.4f\n",
                    fit.log_lik);
      out << buf;
    }
    if (std::isfinite(fit.claic_value)) {
      std::snprintf(buf, sizeof(buf), "  CLAIC = %.4f\n", fit.claic_value);
      out << buf;
    }
    if (fit.with_copula && std::isfinite(fit.lrt_stat)) {
      std::snprintf(buf, sizeof(buf), "  LRT gamma=0: stat %.4f, p %.4f\n",
                    fit.lrt_stat, fit.lrt_p);
      out << buf;
    }
    out << "\n";
  }
}

}  // namespace

std::vector<std::string> run_ingest(const RunConfig& cfg) {
  const Workspace ws = prepare(cfg, false);
  const std::string returns_path = out_path(cfg, "returns.tsv");
  std::ofstream out = open_out(returns_path);
  out << "date";
  for (const std::string& label : ws.all.labels) out << '\t' << label;
  out << "\n";
  for (int t = 0; t < ws.all.length(); ++t) {
    out << format_date(ws.all.dates[t]);
    for (int i = 0; i < ws.all.width(); ++i)
      out << '\t' << num(ws.all.returns(t, i));
    out << "\n";
  }
  const std::string stats_path = out_path(cfg, "stats.tsv");
  std::ofstream st = open_out(stats_path);
  st << "label\tn\tmean\tsd\tskewness\tkurtosis\n";
  for (int i = 0; i < ws.all.width(); ++i) {
    const SeriesStats s =
        sample_stats(ws.all.returns.col(i).head(ws.t1).array());
    st << ws.all.labels[i] << '\t' << ws.t1 << '\t' << num(s.mean) << '\t'
       << num(s.sd) << '\t' << num(s.skewness) << '\t' << num(s.kurtosis)
       << "\n";
  }
  return {returns_path, stats_path};
}

std::vector<std::string> run_fit(const RunConfig& cfg) {
  require_models(cfg);
  const Workspace ws = prepare(cfg, false);
  const std::vector<FitReport> fits = fit_all(cfg, ws, true);
  const std::string report_path = out_path(cfg, "fit_report.tsv");
  write_fit_reports(report_path, fits);
  const std::string summary_path = out_path(cfg, "fit_summary.txt");
  write_fit_summary(summary_path, fits, ws);
  return {report_path, summary_path};
}

void write_risk_report(const std::string& path, const RiskReport& report) {
  std::ofstream out = open_out(path);
  out << "alpha\tvar_emp\tvar_emp_lower\tvar_emp_upper\tes_emp\t"
         "es_emp_lower\tes_emp_upper";
  for (const std::string& id : report.model_ids)
    out << "\tvar_" << id << "\tes_" << id;
  out << "\n";
  for (std::size_t a = 0; a < report.alphas.size(); ++a) {
    out << num(report.alphas[a]) << '\t' << num(report.var_emp[a]) << '\t'
        << num(report.var_emp_lower[a]) << '\t' << num(report.var_emp_upper[a])
        << '\t' << num(report.es_emp[a]) << '\t' << num(report.es_emp_lower[a])
        << '\t' << num(report.es_emp_upper[a]);
    for (std::size_t m = 0; m < report.model_ids.size(); ++m)
      out << '\t' << num(report.var_model(a, m)) << '\t'
          << num(report.es_model(a, m));
    out << "\n";
  }
}

RiskReport parse_risk_report(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw InputError(path + ": empty report");
  const std::vector<std::string> header = split(trim(line), '\t');
  if (header.size() < 7 || header.size() % 2 != 1 || header[0] != "alpha")
    throw InputError(path + ": unexpected risk report header");
  RiskReport report;
  for (std::size_t c = 7; c < header.size(); c += 2) {
    if (header[c].rfind("var_", 0) != 0 || header[c + 1].rfind("es_", 0) != 0)
      throw InputError(path + ": unexpected model columns");
    report.model_ids.push_back(header[c].substr(4));
  }
  std::vector<std::vector<double>> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::string where = path + ":" + std::to_string(line_no);
    const std::vector<std::string> f = split(line, '\t');
    if (f.size() != header.size())
      throw InputError(where + ": wrong column count");
    std::vector<double> row;
    for (const std::string& s : f) row.push_back(parse_num(s, where));
    rows.push_back(std::move(row));
  }
  const int n_alpha = static_cast<int>(rows.size());
  const int n_models = static_cast<int>(report.model_ids.size());
  report.var_model.resize(n_alpha, n_models);
  report.es_model.resize(n_alpha, n_models);
  report.var_emp.resize(n_alpha);
  report.var_emp_lower.resize(n_alpha);
  report.var_emp_upper.resize(n_alpha);
  report.es_emp.resize(n_alpha);
  report.es_emp_lower.resize(n_alpha);
  report.es_emp_upper.resize(n_alpha);
  for (int a = 0; a < n_alpha; ++a) {
    report.alphas.push_back(rows[a][0]);
    report.var_emp[a] = rows[a][1];
    report.var_emp_lower[a] = rows[a][2];
    report.var_emp_upper[a] = rows[a][3];
    report.es_emp[a] = rows[a][4];
    report.es_emp_lower[a] = rows[a][5];
    report.es_emp_upper[a] = rows[a][6];
    for (int m = 0; m < n_models; ++m) {
      report.var_model(a, m) = rows[a][7 + 2 * m];
      report.es_model(a, m) = rows[a][8 + 2 * m];
    }
  }
  return report;
}

std::vector<std::string> run_risk(const RunConfig& cfg) {
  require_models(cfg);
  const Workspace ws = prepare(cfg, false);
  const std::vector<FitReport> fits = fit_all(cfg, ws, false);
  RiskReport report;
  report.alphas = cfg.alphas;
  const int n_alpha = static_cast<int>(cfg.alphas.size());
  const int n_models = static_cast<int>(fits.size());
  report.var_model.resize(n_alpha, n_models);
  report.es_model.resize(n_alpha, n_models);
  for (int m = 0; m < n_models; ++m) {
    report.model_ids.push_back(model_id(m, fits[m]));
    const PortfolioModel pm(fits[m].fitted_spec());
    for (int a = 0; a < n_alpha; ++a) {
      report.var_model(a, m) = pm.var(cfg.alphas[a]);
      report.es_model(a, m) = pm.es(cfg.alphas[a]);
    }
  }
  report.var_emp.resize(n_alpha);
  report.var_emp_lower.resize(n_alpha);
  report.var_emp_upper.resize(n_alpha);
  report.es_emp.resize(n_alpha);
  report.es_emp_lower.resize(n_alpha);
  report.es_emp_upper.resize(n_alpha);
  const int block =
      cfg.block_len == 0 ? default_block_len(ws.t1) : cfg.block_len;
  for (int a = 0; a < n_alpha; ++a) {
    const double alpha = cfg.alphas[a];
    report.var_emp[a] = empirical_var(ws.sums1, alpha);
    report.es_emp[a] = empirical_es(ws.sums1, alpha);
    const BootstrapInterval var_b = block_bootstrap(
        ws.sums1,
        [alpha](const Eigen::ArrayXd& s) { return empirical_var(s, alpha); },
        cfg.boot_r, block, cfg.confidence, cfg.seed + 2 * a);
    const BootstrapInterval es_b = block_bootstrap(
        ws.sums1,
        [alpha](const Eigen::ArrayXd& s) { return empirical_es(s, alpha); },
        cfg.boot_r, block, cfg.confidence, cfg.seed + 2 * a + 1);
    report.var_emp_lower[a] = var_b.lower;
    report.var_emp_upper[a] = var_b.upper;
    report.es_emp_lower[a] = es_b.lower;
    report.es_emp_upper[a] = es_b.upper;
  }
  const std::string path = out_path(cfg, "risk_report.tsv");
  write_risk_report(path, report);
  return {path};
}

namespace {

constexpr char kBacktestHeader[] =
    "model\tks_d\tks_p\tad_a2\tad_p\talpha\tvar_model\tes_model\tvar_emp\t"
    "exceedances\tkupiec_lr\tkupiec_p\tablf\taqlf\tz1\tz1_p\tz2\tz2_p";

}  // namespace

void write_backtest_reports(const std::string& path,
                            const std::vector<BacktestReport>& reports) {
  std::ofstream out = open_out(path);
  out << kBacktestHeader << "\n";
  for (const BacktestReport& rep : reports) {
    for (const BacktestAlphaRow& row : rep.rows) {
      out << rep.model << '\t' << num(rep.ks.statistic) << '\t'
          << num(rep.ks.p_value) << '\t' << num(rep.ad.statistic) << '\t'
          << num(rep.ad.p_value) << '\t' << num(row.alpha) << '\t'
          << num(row.var_model) << '\t' << num(row.es_model) << '\t'
          << num(row.var_emp) << '\t' << row.exceedances << '\t'
          << num(row.kupiec_lr) << '\t' << num(row.kupiec_p) << '\t'
          << num(row.ablf) << '\t' << num(row.aqlf) << '\t' << num(row.z1)
          << '\t' << num(row.z1_p) << '\t' << num(row.z2) << '\t'
          << num(row.z2_p) << "\n";
    }
  }
}

std::vector<BacktestReport> parse_backtest_reports(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || trim(line) != kBacktestHeader)
    throw InputError(path + ": unexpected backtest report header");
  std::vector<BacktestReport> reports;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::string where = path + ":" + std::to_string(line_no);
    const std::vector<std::string> f = split(line, '\t');
    if (f.size() != 18) throw InputError(where + ": wrong column count");
    if (reports.empty() || reports.back().model != f[0]) {
      BacktestReport rep;
      rep.model = f[0];
      rep.ks.statistic = parse_num(f[1], where);
      rep.ks.p_value = parse_num(f[2], where);
      rep.ad.statistic = parse_num(f[3], where);
      rep.ad.p_value = parse_num(f[4], where);
      reports.push_back(std::move(rep));
    }
    BacktestAlphaRow row;
    row.alpha = parse_num(f[5], where);
    row.var_model = parse_num(f[6], where);
    row.es_model = parse_num(f[7], where);
    row.var_emp = parse_num(f[8], where);
    row.exceedances = parse_int(f[9], where);
    row.kupiec_lr = parse_num(f[10], where);
    row.kupiec_p = parse_num(f[11], where);
    row.ablf = parse_num(f[12], where);
    row.aqlf = parse_num(f[13], where);
    row.z1 = parse_num(f[14], where);
    row.z1_p = parse_num(f[15], where);
    row.z2 = parse_num(f[16], where);
    row.z2_p = parse_num(f[17], where);
    reports.back().rows.push_back(row);
  }
  return reports;
}

std::vector<std::string> run_backtest(const RunConfig& cfg) {
  require_models(cfg);
  const Workspace ws = prepare(cfg, true);
  const std::vector<FitReport> fits = fit_all(cfg, ws, false);
  const int n_alpha = static_cast<int>(cfg.alphas.size());
  std::vector<BacktestReport> reports;
  for (std::size_t m = 0; m < fits.size(); ++m) {
    const PortfolioModel pm(fits[m].fitted_spec());
    BacktestInput input;
    input.alphas = cfg.alphas;
    input.var_model.resize(n_alpha);
    input.es_model.resize(n_alpha);
    input.var_emp.resize(n_alpha);
    for (int a = 0; a < n_alpha; ++a) {
      input.var_model[a] = pm.var(cfg.alphas[a]);
      input.es_model[a] = pm.es(cfg.alphas[a]);
      input.var_emp[a] = empirical_var(ws.sums1, cfg.alphas[a]);
    }
    input.out_of_sample = ws.sums2;
    input.b_draws = cfg.boot_b;
    input.block_len = cfg.block_len;
    input.seed = cfg.seed + 7919 * (m + 1);
    BacktestReport rep = backtest_model(pm, ws.sums1, input);
    rep.model = model_id(static_cast<int>(m), fits[m]);
    reports.push_back(std::move(rep));
  }
  const std::string path = out_path(cfg, "backtest_report.tsv");
  write_backtest_reports(path, reports);
  return {path};
}

std::vector<std::string> run_plotdata(const RunConfig& cfg) {
  require_models(cfg);
  const Workspace ws = prepare(cfg, false);
  const std::vector<FitReport> fits = fit_all(cfg, ws, false);
  const double lo = ws.sums1.minCoeff();
  const double hi = ws.sums1.maxCoeff();
  const double pad = 0.2 * (hi - lo);
  std::vector<std::string> written;
  for (std::size_t m = 0; m < fits.size(); ++m) {
    const PortfolioModel pm(fits[m].fitted_spec());
    const std::string path =
        out_path(cfg, "density_" + model_id(static_cast<int>(m), fits[m]) +
                          ".tsv");
    std::ofstream out = open_out(path);
    out << "x\tdensity\n";
    for (int k = 0; k < 1001; ++k) {
      const double x = lo - pad + (hi - lo + 2 * pad) * k / 1000.0;
      out << num(x) << '\t' << num(pm.pdf(x)) << "\n";
    }
    written.push_back(path);
  }
  // Freedman-Diaconis bins over the in-sample sums.
  std::vector<double> sorted(ws.sums1.data(), ws.sums1.data() + ws.t1);
  std::sort(sorted.begin(), sorted.end());
  const auto quantile_at = [&](double u) {
    const double pos = u * (ws.t1 - 1);
    const int k = static_cast<int>(pos);
    const double frac = pos - k;
    return k + 1 < ws.t1 ? sorted[k] * (1.0 - frac) + sorted[k + 1] * frac
                         : sorted[k];
  };
  const double iqr = quantile_at(0.75) - quantile_at(0.25);
  const double width = 2.0 * iqr / std::cbrt(static_cast<double>(ws.t1));
  const int bins = std::max(
      1, static_cast<int>(std::ceil((hi - lo) / std::max(width, 1e-12))));
  const std::string hist_path = out_path(cfg, "histogram.tsv");
  std::ofstream out = open_out(hist_path);
  out << "bin_left\tbin_right\tdensity\n";
  for (int b = 0; b < bins; ++b) {
    const double left = lo + (hi - lo) * b / bins;
    const double right = lo + (hi - lo) * (b + 1) / bins;
    int count = 0;
    for (int t = 0; t < ws.t1; ++t)
      if (ws.sums1[t] >= left && (ws.sums1[t] < right || b + 1 == bins))
        ++count;
    out << num(left) << '\t' << num(right) << '\t'
        << num(count / (ws.t1 * (right - left))) << "\n";
  }
  written.push_back(hist_path);
  return written;
}

}  // namespace lepto
