#include "scalecpt/cli.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "scalecpt/asymptotics.hpp"
#include "scalecpt/cpt.hpp"
#include "scalecpt/simharness.hpp"

namespace scalecpt {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  std::string t = s.substr(a, b - a);
  if (t.size() >= 2 && t.front() == '"' && t.back() == '"') t = t.substr(1, t.size() - 2);
  return t;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(trim(cur));
  return out;
}

bool parse_double(const std::string& tok, double& out) {
  if (tok.empty()) return false;
  std::size_t used = 0;
  try {
    out = std::stod(tok, &used);
  } catch (const std::exception&) {
    return false;
  }
  return used == tok.size();
}

bool is_index(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(),
                                   [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

std::size_t resolve_column(const std::string& spec, const std::vector<std::string>& header,
                           bool has_header, std::size_t width) {
  if (is_index(spec)) {
    const std::size_t idx = std::stoul(spec);
    if (idx >= width)
      throw std::invalid_argument("column index " + spec + " out of range (row width " +
                                  std::to_string(width) + ")");
    return idx;
  }
  if (!has_header)
    throw std::invalid_argument("column '" + spec + "' requested by name but no header row found");
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == spec) return i;
  throw std::invalid_argument("no column named '" + spec + "' in header");
}

}  // namespace

InputSeries read_csv_series(std::istream& in, const std::string& value_column,
                            const std::string& label_column) {
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    rows.push_back(split_csv_line(line));
  }
  if (rows.empty()) throw std::invalid_argument("empty CSV input");

  const std::size_t width = rows.front().size();
  // Header heuristics: a named column forces a header; otherwise probe the
  // value column of the first row.
  bool has_header = !is_index(value_column) || (!label_column.empty() && !is_index(label_column));
  if (!has_header) {
    const std::size_t vc = std::stoul(value_column);
    double probe = 0.0;
    has_header = vc < width && !parse_double(rows.front()[vc], probe);
  }
  const std::vector<std::string>& header = rows.front();
  const std::size_t vc = resolve_column(value_column, header, has_header, width);
  const bool want_labels = !label_column.empty();
  const std::size_t lc = want_labels ? resolve_column(label_column, header, has_header, width) : 0;

  InputSeries series;
  for (std::size_t r = has_header ? 1 : 0; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() <= vc || (want_labels && row.size() <= lc))
      throw std::invalid_argument("row " + std::to_string(r + 1) + " has only " +
                                  std::to_string(row.size()) + " fields");
    double v = 0.0;
    if (!parse_double(row[vc], v))
      throw std::invalid_argument("row " + std::to_string(r + 1) + ": '" + row[vc] +
                                  "' is not numeric");
    if (!std::isfinite(v))
      throw std::invalid_argument("row " + std::to_string(r + 1) + ": non-finite value");
    series.values.push_back(v);
    if (want_labels) series.labels.push_back(row[lc]);
  }
  if (series.values.empty()) throw std::invalid_argument("CSV contains no data rows");
  return series;
}

std::vector<double> log_returns(std::span<const double> raw) {
  if (raw.size() < 2) throw std::invalid_argument("log_returns: needs at least 2 values");
  std::vector<double> out;
  out.reserve(raw.size() - 1);
  for (std::size_t i = 0; i + 1 < raw.size(); ++i) {
    if (!(raw[i] > 0.0) || !(raw[i + 1] > 0.0))
      throw std::invalid_argument("log_returns: non-positive value at position " +
                                  std::to_string(raw[i] > 0.0 ? i + 2 : i + 1));
    out.push_back(std::log(raw[i + 1] / raw[i]));
  }
  return out;
}

namespace {

LrvConfig lrv_config_from(const DetectOptions& opt) {
  LrvConfig cfg;
  if (opt.kernel == "bartlett")
    cfg.hac_kernel = HacKernel::bartlett;
  else if (opt.kernel == "quartic")
    cfg.hac_kernel = HacKernel::quartic;
  else
    throw std::invalid_argument("unknown HAC kernel '" + opt.kernel + "'");
  if (opt.bandwidth != 0.0 && opt.andrews_rho)
    throw std::invalid_argument("--bandwidth and --andrews-rho are mutually exclusive");
  if (opt.bandwidth != 0.0)
    cfg.hac_bandwidth = HacBandwidth::fixed(opt.bandwidth);
  else if (opt.andrews_rho)
    cfg.hac_bandwidth = HacBandwidth::andrews(*opt.andrews_rho);
  return cfg;
}

EstimatorKind estimator_from(const DetectOptions& opt) {
  EstimatorKind kind = parse_estimator(opt.estimator);
  if (kind.kind == ScaleKind::qn_alpha) kind = EstimatorKind::qn(opt.alpha);
  kind.validate();
  return kind;
}

}  // namespace

int cmd_detect(const DetectOptions& opt, std::ostream& out, std::ostream& err) {
  InputSeries series;
  EstimatorKind kind;
  LrvConfig cfg;
  TestResult result;
  try {
    kind = estimator_from(opt);
    cfg = lrv_config_from(opt);
    std::ifstream file(opt.csv_path);
    if (!file) throw std::invalid_argument("cannot open '" + opt.csv_path + "'");
    series = read_csv_series(file, opt.value_column, opt.label_column);
    if (opt.use_log_returns) {
      series.values = log_returns(series.values);
      if (!series.labels.empty()) series.labels.erase(series.labels.begin());
    }
    if (series.values.size() < 4)
      throw std::invalid_argument("need at least 4 observations, got " +
                                  std::to_string(series.values.size()));
    result = detect(series.values, kind, cfg);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  const bool reject = result.p_value < opt.level;
  const std::string change_label =
      series.labels.empty() ? std::string() : series.labels.at(result.change_index - 1);

  if (opt.format == "csv") {
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "# estimator=%s n=%zu statistic=%.10g p_value=%.10g change_index=%zu%s%s "
                  "lrv=%.10g reject=%d\n",
                  kind.name().c_str(), series.values.size(), result.statistic, result.p_value,
                  result.change_index, change_label.empty() ? "" : " change_label=",
                  change_label.c_str(), result.lrv, reject ? 1 : 0);
    out << buf << "k,label,studentized\n";
    for (std::size_t i = 0; i < result.curve.size(); ++i) {
      const std::size_t k = 2 + i;
      const std::string label = series.labels.empty() ? std::string() : series.labels.at(k - 1);
      std::snprintf(buf, sizeof(buf), "%zu,%s,%.10g\n", k, label.c_str(), result.curve[i]);
      out << buf;
    }
  } else {
    json j;
    j["estimator"] = kind.name();
    if (kind.kind == ScaleKind::qn_alpha) j["alpha"] = kind.alpha;
    j["n"] = series.values.size();
    j["statistic"] = result.statistic;
    j["p_value"] = result.p_value;
    j["change_index"] = result.change_index;
    if (!change_label.empty()) j["change_label"] = change_label;
    j["lrv"] = result.lrv;
    j["level"] = opt.level;
    j["reject"] = reject;
    j["diagnostics"] = {{"lrv_clamped", result.lrv_clamped},
                        {"short_series", result.short_series}};
    j["curve"] = result.curve;
    out << j.dump(2) << '\n';
  }
  return (reject && opt.exit_on_reject) ? 2 : 0;
}

int cmd_simulate(const SimulateOptions& opt, std::ostream& out, std::ostream& err) {
  SimTable table;
  try {
    CampaignConfig cfg = load_campaign_config_file(opt.config_path);
    if (opt.seed_override) cfg.base_seed = *opt.seed_override;
    if (opt.threads_override) cfg.threads = *opt.threads_override;
    table = run_campaign(cfg);

    if (opt.csv_out.empty()) {
      write_table_csv(table, out);
    } else {
      std::ofstream f(opt.csv_out);
      if (!f) throw std::invalid_argument("cannot write '" + opt.csv_out + "'");
      write_table_csv(table, f);
    }
    if (!opt.json_out.empty()) {
      std::ofstream f(opt.json_out);
      if (!f) throw std::invalid_argument("cannot write '" + opt.json_out + "'");
      write_table_json(table, f);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  std::size_t total_errors = 0;
  for (const auto& c : table.cells) total_errors += c.errors;
  if (total_errors > 0) {
    err << "error: " << total_errors << " replication(s) failed; see the errors column\n";
    return 1;
  }
  return 0;
}

int cmd_are(const AreOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    const DistributionSpec dist = parse_distribution(opt.dist);
    if (!(opt.alpha_step > 0.0) || !(opt.alpha_min > 0.0) || !(opt.alpha_max < 1.0) ||
        !(opt.alpha_min <= opt.alpha_max))
      throw std::invalid_argument("alpha grid must satisfy 0 < min <= max < 1, step > 0");
    std::vector<double> grid;
    for (double a = opt.alpha_min; a <= opt.alpha_max + 1e-12; a += opt.alpha_step)
      grid.push_back(std::min(a, opt.alpha_max));
    const auto curve = are_curve(dist, grid);
    out << "alpha,are\n";
    char buf[64];
    for (const auto& p : curve) {
      std::snprintf(buf, sizeof(buf), "%.6g,%.8g\n", p.alpha, p.are);
      out << buf;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace scalecpt
