#include "scalecpt/simharness.hpp"

#include <nlohmann/json.hpp>

#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace scalecpt {

namespace {

using nlohmann::json;

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t combine(std::uint64_t h, std::uint64_t v) { return splitmix64(h ^ splitmix64(v)); }

std::uint64_t double_bits(double v) { return std::bit_cast<std::uint64_t>(v); }

bool same_setting(const SeriesSpec& a, const SeriesSpec& b) {
  return a.dist.family == b.dist.family && a.dist.p1 == b.dist.p1 && a.dist.p2 == b.dist.p2 &&
         a.rho == b.rho && a.n == b.n && a.lambda == b.lambda && a.theta == b.theta &&
         a.mu == b.mu;
}

bool same_estimator(const EstimatorKind& a, const EstimatorKind& b) {
  return a.kind == b.kind && (a.kind != ScaleKind::qn_alpha || a.alpha == b.alpha);
}

json cell_to_json(const SimCell& c) {
  return json{{"dist", c.series.dist.name()},
              {"rho", c.series.rho},
              {"lambda", c.series.lambda},
              {"theta", c.series.theta},
              {"n", c.series.n},
              {"mu", c.series.mu},
              {"estimator", c.estimator.name()},
              {"rate", c.rate},
              {"rejections", c.rejections},
              {"errors", c.errors}};
}

}  // namespace

void CampaignConfig::validate() const {
  if (grid.empty()) throw std::invalid_argument("campaign: grid must not be empty");
  if (estimators.empty()) throw std::invalid_argument("campaign: estimators must not be empty");
  if (reps < 1) throw std::invalid_argument("campaign: reps must be >= 1");
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("campaign: level in (0,1)");
  if (!(critical_value > 0.0)) throw std::invalid_argument("campaign: critical_value > 0");
  if (threads < 0) throw std::invalid_argument("campaign: threads must be >= 0");
  for (const auto& s : grid) s.validate();
  for (const auto& e : estimators) e.validate();
}

const SimCell& SimTable::cell(const SeriesSpec& series, const EstimatorKind& estimator) const {
  for (const auto& c : cells)
    if (same_setting(c.series, series) && same_estimator(c.estimator, estimator)) return c;
  throw std::out_of_range("SimTable::cell: no such cell");
}

std::uint64_t series_seed(std::uint64_t base_seed, const SeriesSpec& spec, int rep) {
  std::uint64_t h = splitmix64(base_seed);
  h = combine(h, static_cast<std::uint64_t>(spec.dist.family));
  h = combine(h, double_bits(spec.dist.p1));
  h = combine(h, double_bits(spec.dist.p2));
  h = combine(h, double_bits(spec.rho));
  h = combine(h, static_cast<std::uint64_t>(spec.n));
  h = combine(h, double_bits(spec.lambda));
  h = combine(h, double_bits(spec.theta));
  h = combine(h, double_bits(spec.mu));
  h = combine(h, static_cast<std::uint64_t>(rep));
  return h;
}

SimTable run_campaign(const CampaignConfig& cfg) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();

  const std::size_t n_settings = cfg.grid.size();
  const std::size_t n_estimators = cfg.estimators.size();
  const std::size_t n_cells = n_settings * n_estimators;
  std::vector<std::atomic<std::size_t>> rejections(n_cells);
  std::vector<std::atomic<std::size_t>> errors(n_cells);
  for (auto& a : rejections) a.store(0);
  for (auto& a : errors) a.store(0);

  const std::size_t total_tasks = n_settings * static_cast<std::size_t>(cfg.reps);
  std::atomic<std::size_t> next_task{0};

  auto worker = [&]() {
    for (;;) {
      const std::size_t t = next_task.fetch_add(1);
      if (t >= total_tasks) return;
      const std::size_t gi = t / static_cast<std::size_t>(cfg.reps);
      const int rep = static_cast<int>(t % static_cast<std::size_t>(cfg.reps));
      SeriesSpec spec = cfg.grid[gi];
      spec.seed = series_seed(cfg.base_seed, spec, rep);
      const std::vector<double> x = sample_series(spec);
      for (std::size_t ei = 0; ei < n_estimators; ++ei) {
        const std::size_t cell = gi * n_estimators + ei;
        try {
          const TestResult r = detect(x, cfg.estimators[ei], cfg.lrv);
          if (r.statistic > cfg.critical_value) rejections[cell].fetch_add(1);
        } catch (const std::exception&) {
          errors[cell].fetch_add(1);
        }
      }
    }
  };

  unsigned n_threads = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads)
                                       : std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::min<std::size_t>(n_threads, total_tasks);
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  SimTable table;
  table.reps = cfg.reps;
  table.base_seed = cfg.base_seed;
  table.critical_value = cfg.critical_value;
  table.cells.reserve(n_cells);
  for (std::size_t gi = 0; gi < n_settings; ++gi) {
    for (std::size_t ei = 0; ei < n_estimators; ++ei) {
      SimCell c;
      c.series = cfg.grid[gi];
      c.series.seed = 0;
      c.estimator = cfg.estimators[ei];
      c.rejections = rejections[gi * n_estimators + ei].load();
      c.errors = errors[gi * n_estimators + ei].load();
      c.rate = static_cast<double>(c.rejections) / static_cast<double>(cfg.reps);
      table.cells.push_back(std::move(c));
    }
  }
  table.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return table;
}

SimTable run_pathology(std::size_t n, std::span<const double> lambdas, int reps,
                       std::uint64_t base_seed, int threads) {
  CampaignConfig cfg;
  cfg.reps = reps;
  cfg.base_seed = base_seed;
  cfg.threads = threads;
  cfg.estimators = {EstimatorKind::variance(), EstimatorKind::gini(),
                    EstimatorKind::qn_original()};
  for (double lambda : lambdas) {
    SeriesSpec s;
    s.dist = DistributionSpec::normal();
    s.rho = 0.0;
    s.n = n;
    s.lambda = lambda;
    s.theta = 0.5;
    s.mu = 0.0;
    cfg.grid.push_back(s);
  }
  return run_campaign(cfg);
}

void write_table_csv(const SimTable& table, std::ostream& out) {
  out << "dist,rho,lambda,theta,n,estimator,rate,rejections,errors,reps\n";
  char buf[160];
  for (const auto& c : table.cells) {
    std::snprintf(buf, sizeof(buf), "%s,%g,%g,%g,%zu,%s,%.6f,%zu,%zu,%d\n",
                  c.series.dist.name().c_str(), c.series.rho, c.series.lambda, c.series.theta,
                  c.series.n, c.estimator.name().c_str(), c.rate, c.rejections, c.errors,
                  table.reps);
    out << buf;
  }
}

void write_table_json(const SimTable& table, std::ostream& out) {
  json j;
  j["reps"] = table.reps;
  j["seed"] = table.base_seed;
  j["critical_value"] = table.critical_value;
  j["cells"] = json::array();
  for (const auto& c : table.cells) j["cells"].push_back(cell_to_json(c));
  out << j.dump(2) << '\n';
}

namespace {

LrvConfig parse_lrv_config(const json& j) {
  LrvConfig cfg;
  if (!j.is_object()) throw std::invalid_argument("config: \"lrv\" must be an object");
  if (j.contains("hac_kernel")) {
    const std::string k = j.at("hac_kernel").get<std::string>();
    if (k == "bartlett")
      cfg.hac_kernel = HacKernel::bartlett;
    else if (k == "quartic")
      cfg.hac_kernel = HacKernel::quartic;
    else
      throw std::invalid_argument("config: unknown hac_kernel '" + k + "'");
  }
  if (j.contains("hac_bandwidth")) {
    const auto& b = j.at("hac_bandwidth");
    if (b.is_number()) {
      cfg.hac_bandwidth = HacBandwidth::fixed(b.get<double>());
    } else if (b.is_string() && b.get<std::string>() == "2n13") {
      cfg.hac_bandwidth = HacBandwidth::default_rule();
    } else if (b.is_object() && b.contains("andrews_rho")) {
      cfg.hac_bandwidth = HacBandwidth::andrews(b.at("andrews_rho").get<double>());
    } else {
      throw std::invalid_argument(
          "config: hac_bandwidth must be a number, \"2n13\", or {\"andrews_rho\": r}");
    }
  }
  if (j.contains("density_bandwidth")) {
    const auto& b = j.at("density_bandwidth");
    if (b.is_number()) {
      cfg.density_bandwidth = DensityBandwidth::fixed(b.get<double>());
    } else if (b.is_string() && b.get<std::string>() == "iqr") {
      cfg.density_bandwidth = DensityBandwidth::iqr_rule();
    } else {
      throw std::invalid_argument("config: density_bandwidth must be a number or \"iqr\"");
    }
  }
  if (j.contains("floor")) {
    cfg.floor = j.at("floor").get<double>();
    if (!(cfg.floor > 0.0)) throw std::invalid_argument("config: lrv floor must be > 0");
  }
  return cfg;
}

template <class T>
std::vector<T> one_or_many(const json& j) {
  std::vector<T> out;
  if (j.is_array())
    for (const auto& v : j) out.push_back(v.get<T>());
  else
    out.push_back(j.get<T>());
  return out;
}

}  // namespace

CampaignConfig load_campaign_config(std::istream& in) {
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config: top level must be a JSON object");

  CampaignConfig cfg;
  try {
    if (j.contains("reps")) cfg.reps = j.at("reps").get<int>();
    if (j.contains("seed")) cfg.base_seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("level")) cfg.level = j.at("level").get<double>();
    if (j.contains("critical_value")) cfg.critical_value = j.at("critical_value").get<double>();
    if (j.contains("threads")) cfg.threads = j.at("threads").get<int>();
    if (j.contains("lrv")) cfg.lrv = parse_lrv_config(j.at("lrv"));

    const auto ns = one_or_many<std::size_t>(j.at("n"));
    const auto rhos = j.contains("rho") ? one_or_many<double>(j.at("rho")) : std::vector{0.0};
    const auto lambdas =
        j.contains("lambda") ? one_or_many<double>(j.at("lambda")) : std::vector{1.0};
    const auto thetas =
        j.contains("theta") ? one_or_many<double>(j.at("theta")) : std::vector{0.5};
    const double mu = j.contains("mu") ? j.at("mu").get<double>() : 0.0;

    std::vector<DistributionSpec> dists;
    for (const auto& name : one_or_many<std::string>(j.at("distributions")))
      dists.push_back(parse_distribution(name));
    for (const auto& name : one_or_many<std::string>(j.at("estimators")))
      cfg.estimators.push_back(parse_estimator(name));

    for (const auto& dist : dists)
      for (double rho : rhos)
        for (double lambda : lambdas)
          for (double theta : thetas)
            for (std::size_t n : ns) {
              SeriesSpec s;
              s.dist = dist;
              s.rho = rho;
              s.n = n;
              s.lambda = lambda;
              s.theta = theta;
              s.mu = mu;
              cfg.grid.push_back(s);
            }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

CampaignConfig load_campaign_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
  return load_campaign_config(in);
}

}  // namespace scalecpt
