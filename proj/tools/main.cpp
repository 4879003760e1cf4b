// Command-line interface for scale change-point detection:
//   scalecpt detect <csv>      test a series for a change in scale
//   scalecpt simulate <config> run a Monte Carlo rejection-rate campaign
//   scalecpt are               tabulate asymptotic relative efficiencies

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "scalecpt/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"CUSUM tests for scale changes built on robust scale estimators"};
  app.require_subcommand(1);

  scalecpt::DetectOptions det;
  std::string det_output;
  double andrews_rho = 0.0;
  auto* detect = app.add_subcommand("detect", "Detect a scale change in a CSV series");
  detect->add_option("csv", det.csv_path, "input CSV file")->required();
  detect->add_option("--estimator", det.estimator,
                     "scale estimator: var|md|gmd|mad|qn|qn-orig (default gmd)");
  detect->add_option("--alpha", det.alpha, "pairwise-difference quantile level for qn");
  detect->add_option("--kernel", det.kernel, "HAC kernel: quartic|bartlett");
  detect->add_option("--bandwidth", det.bandwidth, "fixed HAC bandwidth (default 2 n^{1/3})");
  auto* rho_opt = detect->add_option("--andrews-rho", andrews_rho,
                                     "AR(1)-optimal bandwidth with this autocorrelation estimate");
  detect->add_option("--level", det.level, "significance level (default 0.05)");
  detect->add_option("--column", det.value_column, "value column index or header name");
  detect->add_option("--label-column", det.label_column, "label column index or header name");
  detect->add_flag("--log-returns", det.use_log_returns, "transform to log returns first");
  detect->add_option("--format", det.format, "output format: json|csv");
  detect->add_flag("--exit-on-reject", det.exit_on_reject,
                   "exit with status 2 when the test rejects at --level");
  detect->add_option("--output", det_output, "write the report to a file instead of stdout");

  scalecpt::SimulateOptions sim;
  std::uint64_t sim_seed = 0;
  int sim_threads = -1;
  auto* simulate = app.add_subcommand("simulate", "Run a Monte Carlo campaign from a JSON config");
  simulate->add_option("config", sim.config_path, "campaign config (JSON)")->required();
  simulate->add_option("--out-csv", sim.csv_out, "write the table as CSV to this file");
  simulate->add_option("--out-json", sim.json_out, "write the table as JSON to this file");
  auto* seed_opt = simulate->add_option("--seed", sim_seed, "override the config seed");
  auto* threads_opt = simulate->add_option("--threads", sim_threads, "override the thread count");

  scalecpt::AreOptions are;
  std::string are_output;
  auto* arecmd = app.add_subcommand("are", "Efficiency of Q^alpha vs the family's reference");
  arecmd->add_option("--dist", are.dist, "normal|laplace|t<nu> (e.g. t3, t(0.5))");
  arecmd->add_option("--alpha-min", are.alpha_min, "grid start (default 0.01)");
  arecmd->add_option("--alpha-max", are.alpha_max, "grid end (default 0.99)");
  arecmd->add_option("--alpha-step", are.alpha_step, "grid step (default 0.005)");
  arecmd->add_option("--output", are_output, "write the CSV to a file instead of stdout");

  CLI11_PARSE(app, argc, argv);

  auto with_output = [&](const std::string& path, auto&& fn) -> int {
    if (path.empty()) return fn(std::cout);
    std::ofstream f(path);
    if (!f) {
      std::cerr << "error: cannot write '" << path << "'\n";
      return 1;
    }
    return fn(f);
  };

  if (detect->parsed()) {
    if (rho_opt->count() > 0) det.andrews_rho = andrews_rho;
    return with_output(det_output,
                       [&](std::ostream& out) { return scalecpt::cmd_detect(det, out, std::cerr); });
  }
  if (simulate->parsed()) {
    if (seed_opt->count() > 0) sim.seed_override = sim_seed;
    if (threads_opt->count() > 0) sim.threads_override = sim_threads;
    return scalecpt::cmd_simulate(sim, std::cout, std::cerr);
  }
  if (arecmd->parsed())
    return with_output(are_output,
                       [&](std::ostream& out) { return scalecpt::cmd_are(are, out, std::cerr); });
  return 1;
}
