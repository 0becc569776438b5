#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rootcause/dagma.hpp"
#include "rootcause/dataset.hpp"
#include "rootcause/errors.hpp"
#include "rootcause/graph.hpp"
#include "rootcause/io.hpp"
#include "rootcause/log.hpp"
#include "rootcause/metrics.hpp"
#include "rootcause/notears.hpp"
#include "rootcause/pc.hpp"
#include "rootcause/random.hpp"
#include "rootcause/simulate.hpp"

namespace rootcause {

enum class Algorithm { kPc, kNotears, kDagma };

inline Algorithm parse_algorithm(const std::string& name) {
  if (name == "pc") return Algorithm::kPc;
  if (name == "notears") return Algorithm::kNotears;
  if (name == "dagma") return Algorithm::kDagma;
  throw ParameterError("unknown algorithm '" + name + "' (expected pc, notears or dagma)");
}

inline const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kPc: return "pc";
    case Algorithm::kNotears: return "notears";
    case Algorithm::kDagma: return "dagma";
  }
  return "?";
}

inline std::vector<int> paper_m_grid() {
  return {500, 1000, 2000, 5000, 10000, 20000, 50000, 100000};
}
inline constexpr int kPaperTrials = 25;

struct BenchConfig {
  std::vector<Algorithm> algorithms = {Algorithm::kPc, Algorithm::kNotears, Algorithm::kDagma};
  std::vector<int> m_grid = {500, 2000, 10000};
  int trials = 10;
  std::uint64_t base_seed = 42;
  TierSpec tier_spec;
  PcConfig pc;
  NotearsConfig notears;
  DagmaConfig dagma;
  /// Draw a fresh dataset per m instead of taking prefixes of the largest.
  bool independent_datasets = false;
  int jobs = 1;
  std::string out_dir = "bench_out";

  void validate() const {
    if (algorithms.empty()) throw ParameterError("no algorithms selected");
    if (m_grid.empty()) throw ParameterError("m grid is empty");
    for (std::size_t i = 0; i < m_grid.size(); ++i) {
      if (m_grid[i] < 2) throw ParameterError("every m must be at least 2");
      if (i > 0 && m_grid[i] <= m_grid[i - 1]) {
        throw ParameterError("m grid must be strictly increasing");
      }
    }
    if (trials < 1) throw ParameterError("trials must be at least 1");
    if (jobs < 1) throw ParameterError("jobs must be at least 1");
    tier_spec.validate();
    pc.validate();
    notears.validate();
    dagma.validate();
  }
};

struct EvalRecord {
  Algorithm algorithm = Algorithm::kPc;
  int m = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  ConfusionCounts counts;
  long shd = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double runtime_seconds = 0.0;
  bool converged = true;
  std::vector<std::string> flags;
};

struct FailedCell {
  Algorithm algorithm = Algorithm::kPc;
  int m = 0;
  int trial = 0;
  std::string error;
};

struct BenchResult {
  std::vector<EvalRecord> records;
  std::vector<FailedCell> failures;
};

/// Seed for trial t; the ground truth and data streams hang off it.
inline std::uint64_t trial_seed(const BenchConfig& cfg, int trial) {
  return cfg.base_seed + static_cast<std::uint64_t>(trial);
}

struct TrialData {
  GroundTruth truth;
  std::vector<BinaryDataset> datasets;  // one per m in the grid
};

inline TrialData make_trial(const BenchConfig& cfg, int trial) {
  const std::uint64_t seed = trial_seed(cfg, trial);
  TierSpec spec = cfg.tier_spec;
  spec.seed = derive_seed(seed, 0);
  TrialData out{generate_ground_truth(spec), {}};
  if (cfg.independent_datasets) {
    for (std::size_t k = 0; k < cfg.m_grid.size(); ++k) {
      out.datasets.push_back(sample_dataset(out.truth, cfg.m_grid[k], derive_seed(seed, 2 + k)));
    }
  } else {
    const BinaryDataset full = sample_dataset(out.truth, cfg.m_grid.back(), derive_seed(seed, 1));
    for (int m : cfg.m_grid) out.datasets.push_back(full.head(m));
  }
  return out;
}

/// Runs one algorithm on one dataset and scores it against the truth. Only
/// the discovery call is timed.
inline EvalRecord run_cell(const BenchConfig& cfg, Algorithm algo, const GroundTruth& truth,
                           const BinaryDataset& data, int trial) {
  using Clock = std::chrono::steady_clock;
  EvalRecord rec;
  rec.algorithm = algo;
  rec.m = data.rows();
  rec.trial = trial;
  rec.seed = trial_seed(cfg, trial);

  BinaryGraph learned;
  Clock::time_point start;
  Clock::time_point stop;
  switch (algo) {
    case Algorithm::kPc: {
      start = Clock::now();
      const PcResult r = pc(data, cfg.pc);
      stop = Clock::now();
      const ResolvedGraph resolved = mixed_to_binary(r.graph, truth.graph);
      learned = resolved.graph;
      if (r.conflicts > 0) rec.flags.push_back("orientation_conflicts=" + std::to_string(r.conflicts));
      if (r.skeleton.low_power_tests > 0) {
        rec.flags.push_back("low_power_tests=" + std::to_string(r.skeleton.low_power_tests));
      }
      if (resolved.arbitrary > 0) {
        rec.flags.push_back("arbitrary_orientations=" + std::to_string(resolved.arbitrary));
      }
      break;
    }
    case Algorithm::kNotears: {
      start = Clock::now();
      const ContinuousResult r = notears(data, cfg.notears);
      stop = Clock::now();
      learned = threshold(r.weights, cfg.notears.omega);
      rec.converged = r.converged;
      break;
    }
    case Algorithm::kDagma: {
      start = Clock::now();
      const ContinuousResult r = dagma(data, cfg.dagma);
      stop = Clock::now();
      learned = threshold(r.weights, cfg.dagma.omega);
      rec.converged = r.converged;
      break;
    }
  }
  rec.runtime_seconds =
      std::max(std::chrono::duration<double>(stop - start).count(), 1e-9);
  if (!rec.converged) rec.flags.push_back("not_converged");

  rec.counts = confusion(learned, truth.graph);
  rec.shd = shd(rec.counts);
  const Score p = precision(rec.counts);
  const Score r = recall(rec.counts);
  const Score f = f1(rec.counts);
  rec.precision = p.value;
  rec.recall = r.value;
  rec.f1 = f.value;
  if (p.undefined) rec.flags.push_back("precision_undefined");
  if (r.undefined) rec.flags.push_back("recall_undefined");
  if (f.undefined) rec.flags.push_back("f1_undefined");
  return rec;
}

/// Every (trial, algorithm, m) cell, executed by a pool of cfg.jobs workers.
/// Records come back in (trial, algorithm, m) order whatever the pool size.
inline BenchResult run_benchmark(const BenchConfig& cfg) {
  cfg.validate();
  std::vector<TrialData> trials;
  trials.reserve(cfg.trials);
  for (int t = 0; t < cfg.trials; ++t) trials.push_back(make_trial(cfg, t));

  struct Cell {
    int trial;
    Algorithm algo;
    std::size_t m_index;
  };
  std::vector<Cell> cells;
  for (int t = 0; t < cfg.trials; ++t) {
    for (Algorithm a : cfg.algorithms) {
      for (std::size_t k = 0; k < cfg.m_grid.size(); ++k) cells.push_back({t, a, k});
    }
  }

  std::vector<std::optional<EvalRecord>> done(cells.size());
  std::vector<std::string> errors(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      const Cell& c = cells[i];
      const TrialData& td = trials[c.trial];
      try {
        done[i] = run_cell(cfg, c.algo, td.truth, td.datasets[c.m_index], c.trial);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
      log::debug(std::string("bench cell ") + to_string(c.algo) + " m=" +
                 std::to_string(cfg.m_grid[c.m_index]) + " trial=" + std::to_string(c.trial));
    }
  };
  const int workers = std::min<int>(cfg.jobs, static_cast<int>(cells.size()));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  BenchResult out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (done[i]) {
      out.records.push_back(std::move(*done[i]));
    } else {
      const Cell& c = cells[i];
      out.failures.push_back({c.algo, cfg.m_grid[c.m_index], c.trial, errors[i]});
      log::warn(std::string("bench: ") + to_string(c.algo) + " failed at m=" +
                std::to_string(cfg.m_grid[c.m_index]) + ", trial " + std::to_string(c.trial) +
                ": " + errors[i]);
    }
  }
  return out;
}

struct Aggregate {
  Algorithm algorithm = Algorithm::kPc;
  int m = 0;
  std::string metric;
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation
  int n = 0;
  bool single = false;  // n == 1, std reported as 0
};

inline const std::vector<std::string>& metric_names() {
  static const std::vector<std::string> names = {"shd", "precision", "recall", "f1",
                                                 "runtime_seconds"};
  return names;
}

inline double metric_value(const EvalRecord& r, const std::string& metric) {
  if (metric == "shd") return static_cast<double>(r.shd);
  if (metric == "precision") return r.precision;
  if (metric == "recall") return r.recall;
  if (metric == "f1") return r.f1;
  if (metric == "runtime_seconds") return r.runtime_seconds;
  throw ParameterError("unknown metric '" + metric + "'");
}

/// Mean and sample standard deviation per (algorithm, m, metric), sorted by
/// algorithm, then m, then metric name order.
inline std::vector<Aggregate> aggregate(const std::vector<EvalRecord>& records) {
  std::map<std::pair<int, int>, std::vector<const EvalRecord*>> groups;
  for (const auto& r : records) groups[{static_cast<int>(r.algorithm), r.m}].push_back(&r);
  std::vector<Aggregate> out;
  for (const auto& [key, group] : groups) {
    for (const auto& metric : metric_names()) {
      Aggregate a;
      a.algorithm = static_cast<Algorithm>(key.first);
      a.m = key.second;
      a.metric = metric;
      a.n = static_cast<int>(group.size());
      double sum = 0.0;
      for (const auto* r : group) sum += metric_value(*r, metric);
      a.mean = sum / a.n;
      if (a.n > 1) {
        double ss = 0.0;
        for (const auto* r : group) {
          const double dev = metric_value(*r, metric) - a.mean;
          ss += dev * dev;
        }
        a.std = std::sqrt(ss / (a.n - 1));
      } else {
        a.single = true;
      }
      out.push_back(std::move(a));
    }
  }
  return out;
}

inline const Aggregate* find_aggregate(const std::vector<Aggregate>& aggs, Algorithm algo, int m,
                                       const std::string& metric) {
  for (const auto& a : aggs) {
    if (a.algorithm == algo && a.m == m && a.metric == metric) return &a;
  }
  return nullptr;
}

// ---- serialization --------------------------------------------------------

inline void write_records_csv(std::ostream& out, const std::vector<EvalRecord>& records) {
  out << "algorithm,m,trial,seed,tp,fp,fn,tn,shd,precision,recall,f1,runtime_seconds,converged,"
         "flags\n";
  for (const auto& r : records) {
    std::string flags;
    for (std::size_t i = 0; i < r.flags.size(); ++i) flags += (i ? ";" : "") + r.flags[i];
    out << to_string(r.algorithm) << ',' << r.m << ',' << r.trial << ',' << r.seed << ','
        << r.counts.tp << ',' << r.counts.fp << ',' << r.counts.fn << ',' << r.counts.tn << ','
        << r.shd << ',' << io::detail::format_double(r.precision) << ','
        << io::detail::format_double(r.recall) << ',' << io::detail::format_double(r.f1) << ','
        << io::detail::format_double(r.runtime_seconds) << ',' << (r.converged ? 1 : 0) << ','
        << flags << '\n';
  }
}

inline std::vector<EvalRecord> read_records_csv(std::istream& in) {
  const io::CsvTable t = io::read_csv(in);
  auto col = [&](const std::string& name) { return io::detail::require_column(t, name); };
  const auto c_algo = col("algorithm"), c_m = col("m"), c_trial = col("trial"),
             c_seed = col("seed"), c_tp = col("tp"), c_fp = col("fp"), c_fn = col("fn"),
             c_tn = col("tn"), c_shd = col("shd"), c_p = col("precision"), c_r = col("recall"),
             c_f = col("f1"), c_rt = col("runtime_seconds"), c_conv = col("converged"),
             c_flags = col("flags");
  auto to_long = [](const std::string& s) {
    try {
      std::size_t pos = 0;
      const long v = std::stol(s, &pos);
      if (pos != s.size()) throw FormatError("trailing characters in '" + s + "'");
      return v;
    } catch (const std::logic_error&) {
      throw FormatError("cannot parse '" + s + "' as an integer");
    }
  };
  std::vector<EvalRecord> out;
  for (const auto& row : t.rows) {
    EvalRecord r;
    r.algorithm = parse_algorithm(row[c_algo]);
    r.m = static_cast<int>(to_long(row[c_m]));
    r.trial = static_cast<int>(to_long(row[c_trial]));
    r.seed = std::stoull(row[c_seed]);
    r.counts = {to_long(row[c_tp]), to_long(row[c_tn]), to_long(row[c_fp]), to_long(row[c_fn])};
    r.shd = to_long(row[c_shd]);
    r.precision = io::detail::parse_double(row[c_p], "precision");
    r.recall = io::detail::parse_double(row[c_r], "recall");
    r.f1 = io::detail::parse_double(row[c_f], "f1");
    r.runtime_seconds = io::detail::parse_double(row[c_rt], "runtime_seconds");
    r.converged = io::detail::parse_bit(row[c_conv], "converged");
    std::stringstream ss(row[c_flags]);
    std::string flag;
    while (std::getline(ss, flag, ';')) {
      if (!flag.empty()) r.flags.push_back(flag);
    }
    out.push_back(std::move(r));
  }
  return out;
}

inline void write_aggregates_csv(std::ostream& out, const std::vector<Aggregate>& aggs) {
  out << "algorithm,m,metric,mean,std,n\n";
  for (const auto& a : aggs) {
    out << to_string(a.algorithm) << ',' << a.m << ',' << a.metric << ','
        << io::detail::format_double(a.mean) << ',' << io::detail::format_double(a.std) << ','
        << a.n << '\n';
  }
}

/// One row per (record, metric); the shape plotting tools expect.
inline void write_long_csv(std::ostream& out, const std::vector<EvalRecord>& records) {
  out << "algorithm,m,trial,metric,value\n";
  for (const auto& r : records) {
    for (const auto& metric : metric_names()) {
      out << to_string(r.algorithm) << ',' << r.m << ',' << r.trial << ',' << metric << ','
          << io::detail::format_double(metric_value(r, metric)) << '\n';
    }
  }
}

/// One table per metric: algorithms as rows, m as columns, "mean ± std".
inline void write_markdown(std::ostream& out, const std::vector<Aggregate>& aggs) {
  std::vector<int> ms;
  std::vector<Algorithm> algos;
  for (const auto& a : aggs) {
    if (std::find(ms.begin(), ms.end(), a.m) == ms.end()) ms.push_back(a.m);
    if (std::find(algos.begin(), algos.end(), a.algorithm) == algos.end()) {
      algos.push_back(a.algorithm);
    }
  }
  std::sort(ms.begin(), ms.end());
  for (const auto& metric : metric_names()) {
    out << "### " << metric << "\n\n| algorithm |";
    for (int m : ms) out << " M=" << m << " |";
    out << "\n|---|";
    for (std::size_t i = 0; i < ms.size(); ++i) out << "---|";
    out << '\n';
    for (Algorithm algo : algos) {
      out << "| " << to_string(algo) << " |";
      for (int m : ms) {
        const Aggregate* a = find_aggregate(aggs, algo, m, metric);
        if (!a) {
          out << " - |";
          continue;
        }
        char buf[64];
        std::snprintf(buf, sizeof(buf), " %.3f ± %.3f |", a->mean, a->std);
        out << buf;
      }
      out << '\n';
    }
    out << '\n';
  }
}

// ---- configuration as JSON ------------------------------------------------

inline nlohmann::json to_json(const BenchConfig& cfg) {
  nlohmann::json j;
  std::vector<std::string> algos;
  for (Algorithm a : cfg.algorithms) algos.emplace_back(to_string(a));
  j["algorithms"] = algos;
  j["m_grid"] = cfg.m_grid;
  j["trials"] = cfg.trials;
  j["base_seed"] = cfg.base_seed;
  j["independent_datasets"] = cfg.independent_datasets;
  j["jobs"] = cfg.jobs;
  j["out_dir"] = cfg.out_dir;
  auto& t = j["tier_spec"];
  t["tiers"] = nlohmann::json::array();
  for (const auto& tier : cfg.tier_spec.tiers) {
    t["tiers"].push_back({{"name", tier.name}, {"count", tier.count}});
  }
  t["edge_probability"] = cfg.tier_spec.edge_probability;
  t["allow_skip_edges"] = cfg.tier_spec.allow_skip_edges;
  t["weight_low"] = cfg.tier_spec.weight_low;
  t["weight_high"] = cfg.tier_spec.weight_high;
  j["pc"] = {{"alpha", cfg.pc.alpha},
             {"max_cond_set", cfg.pc.max_cond_set ? nlohmann::json(*cfg.pc.max_cond_set)
                                                  : nlohmann::json(nullptr)},
             {"stable", cfg.pc.stable},
             {"statistic", cfg.pc.statistic == CiStatistic::kG2 ? "g2" : "pearson"},
             {"lowpower_delete", cfg.pc.lowpower_delete}};
  j["notears"] = {{"lambda1", cfg.notears.lambda1},
                  {"max_outer_iter", cfg.notears.max_outer_iter},
                  {"h_tol", cfg.notears.h_tol},
                  {"rho_max", cfg.notears.rho_max},
                  {"omega", cfg.notears.omega},
                  {"loss", to_string(cfg.notears.loss)},
                  {"center", cfg.notears.center},
                  {"tie_break", cfg.notears.tie_break}};
  j["dagma"] = {{"s", cfg.dagma.s},
                {"mu_schedule", cfg.dagma.mu_schedule},
                {"lambda1", cfg.dagma.lambda1},
                {"max_inner_iter", cfg.dagma.max_inner_iter},
                {"warm_inner_iter", cfg.dagma.warm_inner_iter},
                {"lr", cfg.dagma.lr},
                {"omega", cfg.dagma.omega},
                {"loss", to_string(cfg.dagma.loss)},
                {"center", cfg.dagma.center},
                {"tie_break", cfg.dagma.tie_break}};
  return j;
}

namespace detail {

template <typename T>
void read_if(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace detail

/// Overlays the keys present in `j` onto `cfg`. Unknown top-level keys are
/// rejected so typos do not pass silently.
inline void apply_json(const nlohmann::json& j, BenchConfig& cfg) {
  static const std::set<std::string> known = {
      "algorithms", "m_grid", "trials", "base_seed", "seed", "independent_datasets", "jobs",
      "out_dir", "tier_spec", "pc", "notears", "dagma"};
  if (!j.is_object()) throw ParameterError("bench config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw ParameterError("unknown bench config key '" + key + "'");
  }
  try {
    if (j.contains("algorithms")) {
      cfg.algorithms.clear();
      for (const auto& a : j.at("algorithms")) cfg.algorithms.push_back(parse_algorithm(a.get<std::string>()));
    }
    detail::read_if(j, "m_grid", cfg.m_grid);
    detail::read_if(j, "trials", cfg.trials);
    detail::read_if(j, "base_seed", cfg.base_seed);
    detail::read_if(j, "seed", cfg.base_seed);
    detail::read_if(j, "independent_datasets", cfg.independent_datasets);
    detail::read_if(j, "jobs", cfg.jobs);
    detail::read_if(j, "out_dir", cfg.out_dir);
    if (j.contains("tier_spec")) {
      const auto& t = j.at("tier_spec");
      if (t.contains("tiers")) {
        cfg.tier_spec.tiers.clear();
        for (const auto& tier : t.at("tiers")) {
          cfg.tier_spec.tiers.push_back({tier.at("name").get<std::string>(), tier.at("count").get<int>()});
        }
      }
      detail::read_if(t, "edge_probability", cfg.tier_spec.edge_probability);
      detail::read_if(t, "allow_skip_edges", cfg.tier_spec.allow_skip_edges);
      detail::read_if(t, "weight_low", cfg.tier_spec.weight_low);
      detail::read_if(t, "weight_high", cfg.tier_spec.weight_high);
    }
    if (j.contains("pc")) {
      const auto& p = j.at("pc");
      detail::read_if(p, "alpha", cfg.pc.alpha);
      if (p.contains("max_cond_set")) {
        if (p.at("max_cond_set").is_null()) {
          cfg.pc.max_cond_set.reset();
        } else {
          cfg.pc.max_cond_set = p.at("max_cond_set").get<int>();
        }
      }
      detail::read_if(p, "stable", cfg.pc.stable);
      if (p.contains("statistic")) {
        const auto s = p.at("statistic").get<std::string>();
        if (s == "g2") {
          cfg.pc.statistic = CiStatistic::kG2;
        } else if (s == "pearson") {
          cfg.pc.statistic = CiStatistic::kPearson;
        } else {
          throw ParameterError("unknown CI statistic '" + s + "'");
        }
      }
      detail::read_if(p, "lowpower_delete", cfg.pc.lowpower_delete);
    }
    if (j.contains("notears")) {
      const auto& n = j.at("notears");
      detail::read_if(n, "lambda1", cfg.notears.lambda1);
      detail::read_if(n, "max_outer_iter", cfg.notears.max_outer_iter);
      detail::read_if(n, "h_tol", cfg.notears.h_tol);
      detail::read_if(n, "rho_max", cfg.notears.rho_max);
      detail::read_if(n, "omega", cfg.notears.omega);
      if (n.contains("loss")) cfg.notears.loss = parse_score_type(n.at("loss").get<std::string>());
      detail::read_if(n, "center", cfg.notears.center);
      detail::read_if(n, "tie_break", cfg.notears.tie_break);
    }
    if (j.contains("dagma")) {
      const auto& d = j.at("dagma");
      detail::read_if(d, "s", cfg.dagma.s);
      detail::read_if(d, "mu_schedule", cfg.dagma.mu_schedule);
      detail::read_if(d, "lambda1", cfg.dagma.lambda1);
      detail::read_if(d, "max_inner_iter", cfg.dagma.max_inner_iter);
      detail::read_if(d, "warm_inner_iter", cfg.dagma.warm_inner_iter);
      detail::read_if(d, "lr", cfg.dagma.lr);
      detail::read_if(d, "omega", cfg.dagma.omega);
      if (d.contains("loss")) cfg.dagma.loss = parse_score_type(d.at("loss").get<std::string>());
      detail::read_if(d, "center", cfg.dagma.center);
      detail::read_if(d, "tie_break", cfg.dagma.tie_break);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(std::string("bad bench config: ") + e.what());
  }
}

inline std::string cpu_model() {
  std::ifstream in("/proc/cpuinfo");
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("model name", 0) == 0) {
      const auto colon = line.find(':');
      if (colon != std::string::npos) return io::detail::trim(line.substr(colon + 1));
    }
  }
  return "unknown";
}

inline nlohmann::json hardware_json() {
  nlohmann::json h;
  h["cpu"] = cpu_model();
  h["hardware_threads"] = std::thread::hardware_concurrency();
#if defined(__clang__)
  h["compiler"] = std::string("clang ") + __clang_version__;
#elif defined(__GNUC__)
  h["compiler"] = std::string("gcc ") + __VERSION__;
#endif
  return h;
}

/// Writes records.csv, aggregates.csv, long.csv, report.md and report.json
/// into `dir`.
inline void emit_report(const std::string& dir, const std::vector<EvalRecord>& records,
                        const std::vector<FailedCell>& failures,
                        const nlohmann::json& config_json) {
  std::filesystem::create_directories(dir);
  const auto path = [&](const char* name) { return (std::filesystem::path(dir) / name).string(); };
  const auto aggs = aggregate(records);
  {
    auto out = io::open_out(path("records.csv"));
    write_records_csv(out, records);
  }
  {
    auto out = io::open_out(path("aggregates.csv"));
    write_aggregates_csv(out, aggs);
  }
  {
    auto out = io::open_out(path("long.csv"));
    write_long_csv(out, records);
  }
  {
    auto out = io::open_out(path("report.md"));
    write_markdown(out, aggs);
    if (!failures.empty()) {
      out << "### failed cells\n\n";
      for (const auto& f : failures) {
        out << "- " << to_string(f.algorithm) << ", M=" << f.m << ", trial " << f.trial << ": "
            << f.error << '\n';
      }
    }
  }
  nlohmann::json header;
  header["hardware"] = hardware_json();
  header["config"] = config_json;
  header["records"] = records.size();
  header["failures"] = nlohmann::json::array();
  for (const auto& f : failures) {
    header["failures"].push_back(
        {{"algorithm", to_string(f.algorithm)}, {"m", f.m}, {"trial", f.trial}, {"error", f.error}});
  }
  header["single_trial_cells"] = nlohmann::json::array();
  for (const auto& a : aggs) {
    if (a.single && a.metric == "f1") {
      header["single_trial_cells"].push_back({{"algorithm", to_string(a.algorithm)}, {"m", a.m}});
    }
  }
  auto out = io::open_out(path("report.json"));
  out << header.dump(2) << '\n';
}

}  // namespace rootcause
