#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace scalecpt {

struct InputSeries {
  std::vector<double> values;
  std::vector<std::string> labels;  // empty when no label column was selected
};

/// Reads one numeric column (by 0-based index or by header name) from a CSV
/// stream; a header row is auto-detected from a non-numeric first token in
/// the value column.  label_column may be empty.
InputSeries read_csv_series(std::istream& in, const std::string& value_column,
                            const std::string& label_column);

/// out[i] = ln(raw[i+1] / raw[i]); rejects non-positive inputs.
std::vector<double> log_returns(std::span<const double> raw);

struct DetectOptions {
  std::string csv_path;
  std::string estimator = "gmd";
  double alpha = 0.8;
  std::string kernel = "quartic";
  double bandwidth = 0.0;  // fixed HAC bandwidth; 0 selects the 2 n^{1/3} rule
  std::optional<double> andrews_rho;
  double level = 0.05;
  bool exit_on_reject = false;
  bool use_log_returns = false;
  std::string value_column = "0";
  std::string label_column;
  std::string format = "json";  // json | csv
};

/// Exit codes: 0 success, 1 input/configuration error, 2 rejection at the
/// chosen level when exit_on_reject is set.
int cmd_detect(const DetectOptions& opt, std::ostream& out, std::ostream& err);

struct SimulateOptions {
  std::string config_path;
  std::string csv_out;   // empty: CSV to stdout
  std::string json_out;  // empty: no JSON file
  std::optional<std::uint64_t> seed_override;
  std::optional<int> threads_override;
};

int cmd_simulate(const SimulateOptions& opt, std::ostream& out, std::ostream& err);

struct AreOptions {
  std::string dist = "normal";
  double alpha_min = 0.01;
  double alpha_max = 0.99;
  double alpha_step = 0.005;
};

int cmd_are(const AreOptions& opt, std::ostream& out, std::ostream& err);

}  // namespace scalecpt
