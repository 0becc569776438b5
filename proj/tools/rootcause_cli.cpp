// rootcause: command-line front end for simulation, preprocessing,
// structure learning, evaluation and benchmarking.
//
// Exit codes: 0 success, 1 run failure (including failed benchmark cells),
// 2 configuration or input error.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rootcause.hpp"

namespace rc = rootcause;
using json = nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kRunFailure = 1;
constexpr int kConfigError = 2;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

int parse_int(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(s, &pos);
    if (pos == s.size()) return v;
  } catch (const std::logic_error&) {
  }
  throw rc::ParameterError("cannot parse '" + s + "' as an integer in " + what);
}

/// "25,8,1" (names FaE, ErPz, Fe for three tiers, T1.. otherwise) or
/// "FaE:25,ErPz:8,Fe:1".
std::vector<rc::Tier> parse_tiers(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.empty()) throw rc::ParameterError("empty tier list");
  const std::vector<std::string> default_names = {"FaE", "ErPz", "Fe"};
  std::vector<rc::Tier> tiers;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const auto colon = parts[i].find(':');
    rc::Tier t;
    if (colon == std::string::npos) {
      t.name = parts.size() == 3 ? default_names[i] : "T" + std::to_string(i + 1);
      t.count = parse_int(parts[i], "--tiers");
    } else {
      t.name = parts[i].substr(0, colon);
      t.count = parse_int(parts[i].substr(colon + 1), "--tiers");
    }
    tiers.push_back(t);
  }
  return tiers;
}

std::vector<int> parse_int_list(const std::string& text, const std::string& what) {
  std::vector<int> out;
  for (const auto& p : split(text, ',')) out.push_back(parse_int(p, what));
  return out;
}

std::vector<double> parse_double_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  for (const auto& p : split(text, ',')) out.push_back(rc::io::detail::parse_double(p, what));
  return out;
}

std::string sidecar_path(const std::string& path) {
  std::filesystem::path p(path);
  p.replace_extension(".json");
  if (p.string() == path) p += ".sidecar.json";
  return p.string();
}

void write_json(const std::string& path, const json& j) {
  auto out = rc::io::open_out(path);
  out << j.dump(2) << '\n';
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const rc::ParameterError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const rc::FormatError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kConfigError;
  } catch (const rc::ComparisonError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRunFailure;
  }
}

// ---- simulate -------------------------------------------------------------

struct SimulateArgs {
  std::string tiers = "25,8,1";
  double edge_prob = 0.3;
  bool skip_edges = false;
  double weight_low = 0.5;
  double weight_high = 2.0;
  int m = 1000;
  std::uint64_t seed = 42;
  std::string out_data;
  std::string out_truth;
};

int run_simulate(const SimulateArgs& a) {
  rc::TierSpec spec;
  spec.tiers = parse_tiers(a.tiers);
  spec.edge_probability = a.edge_prob;
  spec.allow_skip_edges = a.skip_edges;
  spec.weight_low = a.weight_low;
  spec.weight_high = a.weight_high;
  spec.seed = rc::derive_seed(a.seed, 0);
  if (a.m < 1) throw rc::ParameterError("--m must be at least 1");
  const rc::GroundTruth gt = rc::generate_ground_truth(spec);
  const rc::BinaryDataset data = rc::sample_dataset(gt, a.m, rc::derive_seed(a.seed, 1));
  {
    auto out = rc::io::open_out(a.out_data);
    rc::io::write_dataset(out, data);
  }
  if (!a.out_truth.empty()) {
    auto out = rc::io::open_out(a.out_truth);
    rc::io::write_adjacency(out, gt.graph);
    json side = rc::io::ground_truth_json(gt);
    side["seed"] = a.seed;
    side["edge_probability"] = spec.edge_probability;
    side["allow_skip_edges"] = spec.allow_skip_edges;
    side["weight_range"] = {spec.weight_low, spec.weight_high};
    write_json(sidecar_path(a.out_truth), side);
  }
  std::cout << "simulated " << data.rows() << " x " << data.cols() << " dataset, "
            << gt.graph.edge_count() << " true edges\n";
  return kOk;
}

// ---- preprocess -----------------------------------------------------------

struct PreprocessArgs {
  std::string vehicles;
  std::string subops;
  int bins = 4;
  double phi_cutoff = 0.7;
  std::string bin_mode = "width";
  std::string out;
  std::string report;
};

int run_preprocess(const PreprocessArgs& a) {
  if (a.bin_mode != "width") {
    throw rc::ParameterError("--bin-mode '" + a.bin_mode + "' is not supported (only 'width')");
  }
  auto vin = rc::io::open_in(a.vehicles);
  auto sin = rc::io::open_in(a.subops);
  const auto vehicles = rc::io::read_vehicles(vin);
  const auto subops = rc::io::read_subops(sin);
  const rc::BinaryTable table = rc::build_binary_table(vehicles, subops, a.bins);
  const rc::FilterResult filtered =
      rc::filter_attributes(table.data, table.feature_labels, table.target_labels, a.phi_cutoff);
  {
    auto out = rc::io::open_out(a.out);
    rc::io::write_dataset(out, filtered.data);
  }
  if (!a.report.empty()) {
    json r;
    r["vehicles"] = vehicles.size();
    r["subops"] = subops.size();
    r["excluded_vehicles"] = table.excluded_vehicles;
    r["bins"] = a.bins;
    r["phi_cutoff"] = a.phi_cutoff;
    r["bin_boundaries"] = {
        {"ergonomics", {{"boundaries", table.ergonomics_bins.boundaries},
                        {"degenerate", table.ergonomics_bins.degenerate}}},
        {"plan_time", {{"boundaries", table.plan_time_bins.boundaries},
                       {"degenerate", table.plan_time_bins.degenerate}}}};
    r["features"] = json::array();
    for (const auto& s : filtered.scores) {
      r["features"].push_back(
          {{"label", s.label}, {"max_abs_phi", s.max_abs_phi}, {"constant", s.constant}});
    }
    r["kept"] = filtered.kept;
    r["dropped"] = filtered.dropped;
    r["columns"] = filtered.data.labels();
    write_json(a.report, r);
  }
  std::cout << "preprocessed " << filtered.data.rows() << " vehicles: kept "
            << filtered.kept.size() << " of " << table.feature_labels.size() << " features\n";
  return kOk;
}

// ---- discover -------------------------------------------------------------

struct DiscoverArgs {
  std::string algo;
  std::string in;
  std::string out;
  std::string diag;
  std::string weights_out;
  // pc
  double alpha = 0.05;
  int max_cond = 3;
  bool no_lowpower_delete = false;
  std::string statistic = "g2";
  // continuous
  double lambda1 = 0.1;
  double omega = 0.3;
  std::string loss = "l2";
  bool center = false;
  double tie_break = 1e-8;
  // notears
  double h_tol = 1e-8;
  double rho_max = 1e16;
  int max_outer_iter = 100;
  // dagma
  double s = 1.0;
  std::string mu = "1.0,0.1,0.01,0.001";
  double lr = 3e-4;
  int max_iter = 60000;
  int warm_iter = 30000;
};

int run_discover(const DiscoverArgs& a) {
  const rc::Algorithm algo = rc::parse_algorithm(a.algo);
  auto in = rc::io::open_in(a.in);
  const rc::BinaryDataset data = rc::io::read_dataset(in);
  json diag;
  diag["algorithm"] = a.algo;
  diag["input"] = {{"rows", data.rows()}, {"cols", data.cols()}};
  using Clock = std::chrono::steady_clock;

  if (algo == rc::Algorithm::kPc) {
    rc::PcConfig cfg;
    cfg.alpha = a.alpha;
    if (a.max_cond >= 0) {
      cfg.max_cond_set = a.max_cond;
    } else {
      cfg.max_cond_set.reset();
    }
    cfg.lowpower_delete = !a.no_lowpower_delete;
    if (a.statistic == "g2") {
      cfg.statistic = rc::CiStatistic::kG2;
    } else if (a.statistic == "pearson") {
      cfg.statistic = rc::CiStatistic::kPearson;
    } else {
      throw rc::ParameterError("unknown --statistic '" + a.statistic + "'");
    }
    const auto start = Clock::now();
    const rc::PcResult r = rc::pc(data, cfg);
    const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
    {
      auto out = rc::io::open_out(a.out);
      rc::io::write_adjacency(out, r.graph);
    }
    write_json(sidecar_path(a.out), rc::io::mixed_graph_json(r.graph));
    diag["tests"] = r.skeleton.tests;
    diag["low_power_tests"] = r.skeleton.low_power_tests;
    diag["orientation_conflicts"] = r.conflicts;
    diag["directed_edges"] = r.graph.directed().size();
    diag["undirected_edges"] = r.graph.undirected().size();
    diag["runtime_seconds"] = seconds;
    diag["config"] = {{"alpha", cfg.alpha},
                      {"max_cond_set", a.max_cond >= 0 ? json(a.max_cond) : json(nullptr)},
                      {"lowpower_delete", cfg.lowpower_delete},
                      {"statistic", a.statistic}};
  } else {
    rc::ContinuousResult r;
    double omega = a.omega;
    const auto start = Clock::now();
    if (algo == rc::Algorithm::kNotears) {
      rc::NotearsConfig cfg;
      cfg.lambda1 = a.lambda1;
      cfg.h_tol = a.h_tol;
      cfg.rho_max = a.rho_max;
      cfg.max_outer_iter = a.max_outer_iter;
      cfg.omega = a.omega;
      cfg.loss = rc::parse_score_type(a.loss);
      cfg.center = a.center;
      cfg.tie_break = a.tie_break;
      r = rc::notears(data, cfg);
      diag["config"] = {{"lambda1", cfg.lambda1}, {"h_tol", cfg.h_tol},
                        {"rho_max", cfg.rho_max}, {"max_outer_iter", cfg.max_outer_iter},
                        {"omega", cfg.omega},     {"loss", rc::to_string(cfg.loss)},
                        {"center", cfg.center},   {"tie_break", cfg.tie_break}};
      diag["rho"] = r.rho;
    } else {
      rc::DagmaConfig cfg;
      cfg.s = a.s;
      cfg.mu_schedule = parse_double_list(a.mu, "--mu");
      cfg.lambda1 = a.lambda1;
      cfg.lr = a.lr;
      cfg.max_inner_iter = a.max_iter;
      cfg.warm_inner_iter = a.warm_iter;
      cfg.omega = a.omega;
      cfg.loss = rc::parse_score_type(a.loss);
      cfg.center = a.center;
      cfg.tie_break = a.tie_break;
      r = rc::dagma(data, cfg);
      diag["config"] = {{"s", cfg.s},           {"mu_schedule", cfg.mu_schedule},
                        {"lambda1", cfg.lambda1}, {"lr", cfg.lr},
                        {"max_inner_iter", cfg.max_inner_iter},
                        {"warm_inner_iter", cfg.warm_inner_iter},
                        {"omega", cfg.omega},   {"loss", rc::to_string(cfg.loss)},
                        {"center", cfg.center},   {"tie_break", cfg.tie_break}};
      diag["rejected_steps"] = r.rejected_steps;
    }
    const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
    const rc::BinaryGraph g = rc::threshold(r.weights, omega);
    {
      auto out = rc::io::open_out(a.out);
      rc::io::write_adjacency(out, g);
    }
    if (!a.weights_out.empty()) {
      auto out = rc::io::open_out(a.weights_out);
      rc::io::write_adjacency(out, r.weights);
    }
    diag["h"] = r.h;
    diag["outer_iterations"] = r.outer_iterations;
    diag["inner_iterations"] = r.inner_iterations;
    diag["evaluations"] = r.evaluations;
    diag["converged"] = r.converged;
    diag["edges"] = g.edge_count();
    diag["runtime_seconds"] = seconds;
  }
  if (!a.diag.empty()) write_json(a.diag, diag);
  std::cout << a.algo << ": wrote " << a.out << '\n';
  return kOk;
}

// ---- evaluate -------------------------------------------------------------

struct EvaluateArgs {
  std::string learned;
  std::string truth;
  std::string out;
  bool include_diagonal = false;
};

int run_evaluate(const EvaluateArgs& a) {
  auto lin = rc::io::open_in(a.learned);
  auto tin = rc::io::open_in(a.truth);
  const rc::MixedGraph learned = rc::io::read_mixed_graph(lin);
  const rc::BinaryGraph truth = rc::io::read_binary_graph(tin);
  if (learned.labels() != truth.labels()) {
    throw rc::ComparisonError("learned and true graphs use different labels or label order");
  }
  const rc::ResolvedGraph resolved = rc::mixed_to_binary(learned, truth);
  const rc::ConfusionCounts c = rc::confusion(resolved.graph, truth, a.include_diagonal);
  const rc::Score p = rc::precision(c);
  const rc::Score r = rc::recall(c);
  const rc::Score f = rc::f1(c);
  json j;
  j["counts"] = {{"tp", c.tp}, {"tn", c.tn}, {"fp", c.fp}, {"fn", c.fn}};
  j["shd"] = rc::shd(c);
  j["precision"] = p.value;
  j["recall"] = r.value;
  j["f1"] = f.value;
  j["flags"] = {{"precision_undefined", p.undefined},
                {"recall_undefined", r.undefined},
                {"f1_undefined", f.undefined},
                {"include_diagonal", a.include_diagonal}};
  j["undirected_edges"] = {{"truth_resolved", resolved.truth_resolved},
                           {"arbitrary", resolved.arbitrary}};
  if (a.out.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    write_json(a.out, j);
    std::cout << "shd=" << rc::shd(c) << " precision=" << p.value << " recall=" << r.value
              << " f1=" << f.value << '\n';
  }
  return kOk;
}

// ---- bench / report -------------------------------------------------------

struct BenchArgs {
  std::string config;
  std::string algos;
  std::string m_grid;
  int trials = 0;
  std::uint64_t seed = 0;
  std::string tiers;
  double edge_prob = 0.0;
  bool skip_edges = false;
  std::string out_dir;
  int jobs = 0;
  bool paper_grid = false;
  bool independent = false;
};

int run_bench(const BenchArgs& a, const CLI::App& cmd) {
  rc::BenchConfig cfg;
  if (!a.config.empty()) {
    auto in = rc::io::open_in(a.config);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      throw rc::ParameterError("cannot parse " + a.config + ": " + e.what());
    }
    rc::apply_json(j, cfg);
  }
  if (a.paper_grid) {
    cfg.m_grid = rc::paper_m_grid();
    cfg.trials = rc::kPaperTrials;
  }
  if (cmd.count("--algos")) {
    cfg.algorithms.clear();
    for (const auto& name : split(a.algos, ',')) cfg.algorithms.push_back(rc::parse_algorithm(name));
  }
  if (cmd.count("--m-grid")) cfg.m_grid = parse_int_list(a.m_grid, "--m-grid");
  if (cmd.count("--trials")) cfg.trials = a.trials;
  if (cmd.count("--seed")) cfg.base_seed = a.seed;
  if (cmd.count("--tiers")) cfg.tier_spec.tiers = parse_tiers(a.tiers);
  if (cmd.count("--edge-prob")) cfg.tier_spec.edge_probability = a.edge_prob;
  if (cmd.count("--skip-edges")) cfg.tier_spec.allow_skip_edges = a.skip_edges;
  if (cmd.count("--out-dir")) cfg.out_dir = a.out_dir;
  if (cmd.count("--jobs")) cfg.jobs = a.jobs;
  if (cmd.count("--independent-datasets")) cfg.independent_datasets = a.independent;
  cfg.validate();

  const rc::BenchResult result = rc::run_benchmark(cfg);
  rc::emit_report(cfg.out_dir, result.records, result.failures, rc::to_json(cfg));
  rc::write_markdown(std::cout, rc::aggregate(result.records));
  std::cout << result.records.size() << " records, " << result.failures.size()
            << " failed cells, written to " << cfg.out_dir << '\n';
  return result.failures.empty() ? kOk : kRunFailure;
}

struct ReportArgs {
  std::string in_dir;
  std::string out_dir;
};

int run_report(const ReportArgs& a) {
  const auto dir = std::filesystem::path(a.in_dir);
  auto in = rc::io::open_in((dir / "records.csv").string());
  const auto records = rc::read_records_csv(in);
  const auto aggs = rc::aggregate(records);
  const auto out_dir = std::filesystem::path(a.out_dir.empty() ? a.in_dir : a.out_dir);
  std::filesystem::create_directories(out_dir);
  {
    auto out = rc::io::open_out((out_dir / "aggregates.csv").string());
    rc::write_aggregates_csv(out, aggs);
  }
  {
    auto out = rc::io::open_out((out_dir / "long.csv").string());
    rc::write_long_csv(out, records);
  }
  {
    auto out = rc::io::open_out((out_dir / "report.md").string());
    rc::write_markdown(out, aggs);
  }
  rc::write_markdown(std::cout, aggs);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Causal discovery toolkit for binary root-cause analysis data"};
  app.require_subcommand(1);
  bool verbose = false;
  bool quiet = false;
  app.add_flag("-v,--verbose", verbose, "Log progress and diagnostics");
  app.add_flag("-q,--quiet", quiet, "Only log errors");

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "Draw a tiered ground truth and sample a dataset");
  c_sim->add_option("--tiers", sim.tiers, "Tier sizes, e.g. 25,8,1 or FaE:25,ErPz:8,Fe:1")
      ->capture_default_str();
  c_sim->add_option("--edge-prob", sim.edge_prob, "Probability of each forward edge")
      ->capture_default_str();
  c_sim->add_flag("--skip-edges", sim.skip_edges, "Allow edges that skip a tier");
  c_sim->add_option("--weight-low", sim.weight_low)->capture_default_str();
  c_sim->add_option("--weight-high", sim.weight_high)->capture_default_str();
  c_sim->add_option("--m", sim.m, "Number of samples")->capture_default_str();
  c_sim->add_option("--seed", sim.seed)->capture_default_str();
  c_sim->add_option("--out-data", sim.out_data, "Dataset CSV")->required();
  c_sim->add_option("--out-truth", sim.out_truth,
                    "True adjacency CSV; weights, biases and tiers go to a .json sidecar");

  PreprocessArgs pre;
  auto* c_pre = app.add_subcommand("preprocess", "Build the filtered binary table");
  c_pre->add_option("--vehicles", pre.vehicles, "vehicle_id,properties,fault")->required();
  c_pre->add_option("--subops", pre.subops, "subop_id,properties,ergonomics,plan_time")
      ->required();
  c_pre->add_option("--bins", pre.bins)->capture_default_str();
  c_pre->add_option("--phi-cutoff", pre.phi_cutoff)->capture_default_str();
  c_pre->add_option("--bin-mode", pre.bin_mode, "Only 'width' is implemented")
      ->capture_default_str();
  c_pre->add_option("--out", pre.out)->required();
  c_pre->add_option("--report", pre.report);

  DiscoverArgs dis;
  auto* c_dis = app.add_subcommand("discover", "Learn a graph from a dataset CSV");
  c_dis->add_option("--algo", dis.algo, "pc, notears or dagma")->required();
  c_dis->add_option("--in", dis.in)->required();
  c_dis->add_option("--out", dis.out, "Adjacency CSV (row causes column)")->required();
  c_dis->add_option("--diag", dis.diag, "Diagnostics JSON");
  c_dis->add_option("--weights-out", dis.weights_out, "Unthresholded weights (notears, dagma)");
  c_dis->add_option("--alpha", dis.alpha)->capture_default_str();
  c_dis->add_option("--max-cond", dis.max_cond, "Negative for no cap")->capture_default_str();
  c_dis->add_flag("--no-lowpower-delete", dis.no_lowpower_delete,
                  "Keep edges whose test is underpowered");
  c_dis->add_option("--statistic", dis.statistic, "g2 or pearson")->capture_default_str();
  c_dis->add_option("--lambda1", dis.lambda1)->capture_default_str();
  c_dis->add_option("--omega", dis.omega)->capture_default_str();
  c_dis->add_option("--loss", dis.loss, "l2 or logistic")->capture_default_str();
  c_dis->add_flag("--center", dis.center, "Fit least squares on column-centred data");
  c_dis->add_option("--tie-break", dis.tie_break, "Initial value above the diagonal")
      ->capture_default_str();
  c_dis->add_option("--h-tol", dis.h_tol)->capture_default_str();
  c_dis->add_option("--rho-max", dis.rho_max)->capture_default_str();
  c_dis->add_option("--max-outer-iter", dis.max_outer_iter)->capture_default_str();
  c_dis->add_option("--s", dis.s)->capture_default_str();
  c_dis->add_option("--mu", dis.mu)->capture_default_str();
  c_dis->add_option("--lr", dis.lr)->capture_default_str();
  c_dis->add_option("--max-iter", dis.max_iter, "Last-stage iteration cap")->capture_default_str();
  c_dis->add_option("--warm-iter", dis.warm_iter, "Earlier-stage iteration cap")
      ->capture_default_str();

  EvaluateArgs ev;
  auto* c_ev = app.add_subcommand("evaluate", "Score a learned adjacency against the truth");
  c_ev->add_option("--learned", ev.learned)->required();
  c_ev->add_option("--truth", ev.truth)->required();
  c_ev->add_option("--out", ev.out, "Metrics JSON (stdout when omitted)");
  c_ev->add_flag("--include-diagonal", ev.include_diagonal);

  BenchArgs be;
  auto* c_be = app.add_subcommand("bench", "Run the algorithm comparison over an m grid");
  c_be->add_option("--config", be.config, "JSON config; flags given here override it");
  c_be->add_option("--algos", be.algos, "Default pc,notears,dagma");
  c_be->add_option("--m-grid", be.m_grid, "Default 500,2000,10000");
  c_be->add_option("--trials", be.trials, "Default 10");
  c_be->add_option("--seed", be.seed, "Base seed, default 42");
  c_be->add_option("--tiers", be.tiers, "Default 25,8,1");
  c_be->add_option("--edge-prob", be.edge_prob, "Default 0.3");
  c_be->add_flag("--skip-edges", be.skip_edges);
  c_be->add_option("--out-dir", be.out_dir, "Default bench_out");
  c_be->add_option("--jobs", be.jobs, "Worker threads, default 1");
  c_be->add_flag("--paper-grid", be.paper_grid, "Eight sample sizes from 500 to 100000, 25 trials");
  c_be->add_flag("--independent-datasets", be.independent,
                 "Fresh data per m instead of nested prefixes");

  ReportArgs rep;
  auto* c_rep = app.add_subcommand("report", "Rebuild tables from a bench records.csv");
  c_rep->add_option("--in-dir", rep.in_dir, "Directory holding records.csv")->required();
  c_rep->add_option("--out-dir", rep.out_dir, "Defaults to --in-dir");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  rc::log::set_level(verbose ? rc::log::Level::kDebug
                             : quiet ? rc::log::Level::kError : rc::log::Level::kWarning);

  if (*c_sim) return guarded([&] { return run_simulate(sim); });
  if (*c_pre) return guarded([&] { return run_preprocess(pre); });
  if (*c_dis) return guarded([&] { return run_discover(dis); });
  if (*c_ev) return guarded([&] { return run_evaluate(ev); });
  if (*c_be) return guarded([&] { return run_bench(be, *c_be); });
  if (*c_rep) return guarded([&] { return run_report(rep); });
  return kConfigError;
}
