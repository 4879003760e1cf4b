#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "scalecpt/cpt.hpp"
#include "scalecpt/dgp.hpp"
#include "scalecpt/estimators.hpp"
#include "scalecpt/lrv.hpp"

namespace scalecpt {

struct CampaignConfig {
  std::vector<SeriesSpec> grid;  // one entry per simulated setting; seed fields unused
  std::vector<EstimatorKind> estimators;
  LrvConfig lrv;
  int reps = 1000;
  double level = 0.05;
  std::uint64_t base_seed = 1;
  double critical_value = 1.358;  // 95% quantile of sup|B|
  int threads = 0;                // 0 = hardware concurrency

  void validate() const;
};

struct SimCell {
  SeriesSpec series;
  EstimatorKind estimator;
  std::size_t rejections = 0;
  std::size_t errors = 0;
  double rate = 0.0;  // rejections / reps
};

struct SimTable {
  std::vector<SimCell> cells;
  int reps = 0;
  std::uint64_t base_seed = 0;
  double critical_value = 0.0;
  double elapsed_seconds = 0.0;  // informational only; never serialized

  const SimCell& cell(const SeriesSpec& series, const EstimatorKind& estimator) const;
};

/// Deterministic per-replication seed: a stable 64-bit hash of the base seed,
/// the series setting, and the replication index.  Estimators share the
/// replication's series.
std::uint64_t series_seed(std::uint64_t base_seed, const SeriesSpec& spec, int rep);

/// Runs reps independent series per grid entry, applies every estimator's
/// test to each series, and tabulates exceedances of critical_value.  Output
/// is bit-identical for a fixed config regardless of the thread count.
SimTable run_campaign(const CampaignConfig& cfg);

/// Variance / Gini / original-Qn rejection rates for an i.i.d. standard
/// normal sample with the scale multiplied by lambda in the second half.
SimTable run_pathology(std::size_t n, std::span<const double> lambdas, int reps,
                       std::uint64_t base_seed = 1, int threads = 0);

void write_table_csv(const SimTable& table, std::ostream& out);
void write_table_json(const SimTable& table, std::ostream& out);

/// Reads a JSON campaign description (schema documented in the README).
CampaignConfig load_campaign_config(std::istream& in);
CampaignConfig load_campaign_config_file(const std::string& path);

}  // namespace scalecpt
