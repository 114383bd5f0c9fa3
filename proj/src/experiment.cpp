#include "decopt/experiment.hpp"

#include <algorithm>
#include <fstream>
#include <future>
#include <set>
#include <sstream>

#include "decopt/dataio.hpp"
#include "decopt/diagnostics.hpp"
#include "decopt/error.hpp"
#include "decopt/gossip.hpp"
#include "decopt/runner.hpp"
#include "decopt/spectral.hpp"

namespace decopt {

using nlohmann::json;

namespace {

void reject_unknown_keys(const json& j, const std::string& where,
                         std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw InvalidArgument(where + " must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw InvalidArgument(where + ": unknown key '" + key + "'");
    }
  }
}

template <typename T>
T get_field(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw InvalidArgument(where + ": missing '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InvalidArgument(where + ": bad value for '" + key + "': " + e.what());
  }
}

template <typename T>
T get_or(const json& j, const char* key, T fallback, const std::string& where) {
  return j.contains(key) ? get_field<T>(j, key, where) : fallback;
}

double logistic_smoothness(const std::vector<NodeShard>& shards) {
  double lmax = 0.0;
  for (const auto& s : shards) {
    lmax = std::max(lmax, gram_lambda_max(s.features) / (4.0 * s.num_samples()));
  }
  return lmax;
}

json spectral_json(const TopologySpec& spec, const Graph& g, const SpectralSummary& s) {
  const ChebyshevParams c = chebyshev_params(s);
  json cheb = {{"T", c.T}, {"c1", c.c1}, {"c3", c.c3}, {"chi_eff", c.chi_eff}};
  cheb["c2"] = c.degenerate ? json(nullptr) : json(c.c2);
  json out = {{"n", g.num_nodes()},
              {"edges", g.num_edges()},
              {"lambda_max", s.lambda_max},
              {"lambda_min_plus", s.lambda_min_plus},
              {"chi", s.chi},
              {"chebyshev", cheb}};
  out["topology"] = to_string(spec.kind);
  return out;
}

std::string failed_checks(const ValidationReport& r) {
  std::string out;
  auto add = [&](bool ok, const char* name) {
    if (ok) return;
    if (!out.empty()) out += ", ";
    out += name;
  };
  add(r.symmetric, "symmetric");
  add(r.psd, "psd");
  add(r.sparsity_ok, "sparsity");
  add(r.kernel_is_consensus, "kernel");
  return out;
}

json fit_or_null(const Trace& t, RateAxis axis) {
  try {
    const RateFit fit = empirical_rate(t, 0.5, axis);
    return {{"rate", fit.rate}, {"r_squared", fit.r_squared}, {"converged", fit.converged}};
  } catch (const InvalidArgument&) {
    return nullptr;
  }
}

}  // namespace

TopologySpec parse_topology(const json& j) {
  const std::string where = "graph";
  reject_unknown_keys(j, where, {"kind", "n", "rows", "cols", "avg_degree", "seed", "max_retries"});
  TopologySpec spec;
  spec.kind = topology_kind_from_string(get_field<std::string>(j, "kind", where));
  if (spec.kind == TopologyKind::grid) {
    spec.rows = get_field<int>(j, "rows", where);
    spec.cols = get_field<int>(j, "cols", where);
  } else {
    spec.n = get_field<int>(j, "n", where);
  }
  if (spec.kind == TopologyKind::erdos_renyi) {
    spec.avg_degree = get_field<double>(j, "avg_degree", where);
    spec.seed = get_or<std::uint64_t>(j, "seed", 0, where);
    spec.max_retries = get_or<int>(j, "max_retries", spec.max_retries, where);
  }
  return spec;
}

ExperimentConfig parse_config(const json& j) {
  reject_unknown_keys(j, "config",
                      {"schema", "graph", "objective", "solvers", "reference_tol", "output_dir",
                       "seed"});
  const int schema = get_field<int>(j, "schema", "config");
  if (schema != kConfigSchema) {
    throw InvalidArgument("config: unsupported schema " + std::to_string(schema) + " (expected " +
                          std::to_string(kConfigSchema) + ")");
  }
  ExperimentConfig cfg;
  cfg.seed = get_or<std::uint64_t>(j, "seed", 0, "config");
  cfg.reference_tol = get_or<double>(j, "reference_tol", cfg.reference_tol, "config");
  if (!(cfg.reference_tol > 0.0)) throw InvalidArgument("config: reference_tol must be > 0");
  cfg.output_dir = get_or<std::string>(j, "output_dir", cfg.output_dir.string(), "config");

  if (!j.contains("graph")) throw InvalidArgument("config: missing 'graph'");
  json graph = j.at("graph");
  if (graph.is_object() && graph.value("kind", "") == "erdos_renyi" && !graph.contains("seed")) {
    graph["seed"] = cfg.seed;
  }
  cfg.graph = parse_topology(graph);

  if (!j.contains("objective")) throw InvalidArgument("config: missing 'objective'");
  const json& obj = j.at("objective");
  const std::string ow = "objective";
  reject_unknown_keys(obj, ow,
                      {"kind", "d", "kappa", "reg", "samples_per_node", "dataset_path", "seed"});
  const std::string kind = get_field<std::string>(obj, "kind", ow);
  if (kind == "quadratic") {
    cfg.objective.kind = ObjectiveKind::quadratic;
  } else if (kind == "logistic") {
    cfg.objective.kind = ObjectiveKind::logistic;
  } else {
    throw InvalidArgument("objective: unknown kind '" + kind + "'");
  }
  cfg.objective.seed = get_or<std::uint64_t>(obj, "seed", cfg.seed, ow);
  if (obj.contains("kappa")) cfg.objective.kappa = get_field<double>(obj, "kappa", ow);
  if (obj.contains("dataset_path")) {
    cfg.objective.dataset_path = get_field<std::string>(obj, "dataset_path", ow);
  }
  if (cfg.objective.dataset_path && cfg.objective.kind != ObjectiveKind::logistic) {
    throw InvalidArgument("objective: dataset_path requires kind 'logistic'");
  }
  cfg.objective.d = cfg.objective.dataset_path ? get_or<int>(obj, "d", 0, ow)
                                               : get_field<int>(obj, "d", ow);
  cfg.objective.reg = get_or<double>(obj, "reg", 0.0, ow);
  cfg.objective.samples_per_node = get_or<int>(obj, "samples_per_node", 0, ow);
  if (cfg.objective.kind == ObjectiveKind::logistic) {
    if (cfg.objective.kappa && obj.contains("reg")) {
      throw InvalidArgument("objective: give either reg or kappa, not both");
    }
    if (!cfg.objective.kappa && !(cfg.objective.reg > 0.0)) {
      throw InvalidArgument("objective: logistic needs reg > 0 (or kappa)");
    }
    if (!cfg.objective.dataset_path && cfg.objective.samples_per_node < 1) {
      throw InvalidArgument("objective: logistic needs samples_per_node >= 1 or dataset_path");
    }
  }
  if (cfg.objective.kappa && !(*cfg.objective.kappa >= 1.0)) {
    throw InvalidArgument("objective: kappa must be >= 1");
  }

  if (!j.contains("solvers") || !j.at("solvers").is_array() || j.at("solvers").empty()) {
    throw InvalidArgument("config: 'solvers' must be a non-empty array");
  }
  std::set<Algorithm> seen;
  for (const auto& sj : j.at("solvers")) {
    const std::string sw = "solvers";
    reject_unknown_keys(sj, sw, {"algorithm", "max_iters", "eps", "record_every", "lyapunov"});
    SolverRunConfig sc;
    sc.algorithm = algorithm_from_string(get_field<std::string>(sj, "algorithm", sw));
    sc.max_iters = get_or<std::int64_t>(sj, "max_iters", sc.max_iters, sw);
    sc.eps = get_or<double>(sj, "eps", sc.eps, sw);
    sc.record_every = get_or<std::int64_t>(sj, "record_every", sc.record_every, sw);
    sc.lyapunov = get_or<bool>(sj, "lyapunov", sc.lyapunov, sw);
    if (sc.max_iters < 0) throw InvalidArgument("solvers: max_iters must be >= 0");
    if (!(sc.eps > 0.0)) throw InvalidArgument("solvers: eps must be > 0");
    if (sc.record_every < 1) throw InvalidArgument("solvers: record_every must be >= 1");
    if (!seen.insert(sc.algorithm).second) {
      throw InvalidArgument("solvers: algorithm '" + to_string(sc.algorithm) +
                            "' listed twice (outputs would collide)");
    }
    cfg.solvers.push_back(sc);
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw IoError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

Oracle build_objective(const ObjectiveConfig& cfg, int n) {
  if (cfg.kind == ObjectiveKind::quadratic) {
    return heterogeneous_quadratic(n, cfg.d, cfg.kappa.value_or(1.0), cfg.seed);
  }
  const Dataset ds = cfg.dataset_path
                         ? read_libsvm_file(*cfg.dataset_path)
                         : synth_classification(n * cfg.samples_per_node, cfg.d, cfg.seed);
  std::vector<NodeShard> shards = partition(ds, n, cfg.seed);
  double reg = cfg.reg;
  if (cfg.kappa) {
    // L = L0 + r and mu = r, so L / mu = kappa fixes r.
    if (!(*cfg.kappa > 1.0)) throw InvalidArgument("logistic kappa must be > 1");
    reg = logistic_smoothness(shards) / (*cfg.kappa - 1.0);
  }
  return Oracle::logistic(std::move(shards), reg);
}

json spectrum_report(const TopologySpec& spec) {
  const Graph g = build_graph(spec);
  const Spectrum s = eigendecompose(laplacian(g));
  return spectral_json(spec, g, spectral_summary(s));
}

json run_experiment(const ExperimentConfig& cfg) {
  const Graph g = build_graph(cfg.graph);
  const SymmetricMatrix w = laplacian(g);
  const ValidationReport report = validate_gossip(w, g);
  if (!report.passed) {
    throw ValidationError("gossip matrix failed validation (" + failed_checks(report) + ")");
  }
  const Spectrum spectrum = eigendecompose(w);
  const SpectralSummary summary = spectral_summary(spectrum);

  const Oracle base = build_objective(cfg.objective, g.num_nodes());
  const ReferencePoint ref = reference_solution(base, cfg.reference_tol);
  const StackedState x0 = StackedState::Zero(base.num_nodes(), base.dim());

  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir, ec);
  if (ec) throw IoError("cannot create " + cfg.output_dir.string() + ": " + ec.message());

  // Each run owns its oracle and counters; the remaining inputs are read-only.
  std::vector<SolverParams> params;
  for (const auto& sc : cfg.solvers) {
    params.push_back(derive_params(sc.algorithm, base.L(), base.mu(), summary));
  }
  std::vector<std::future<RunResult>> jobs;
  for (std::size_t i = 0; i < cfg.solvers.size(); ++i) {
    const SolverRunConfig& sc = cfg.solvers[i];
    const SolverParams& p = params[i];
    jobs.push_back(std::async(std::launch::async, [&, sc, p] {
      Oracle oracle = base.fresh();
      RunOptions opts;
      opts.eps = sc.eps;
      opts.max_iters = sc.max_iters;
      opts.record_every = sc.record_every;
      opts.lyapunov = sc.lyapunov;
      return run(p, oracle, w, spectrum, x0, ref, opts);
    }));
  }

  json runs = json::array();
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const RunResult res = jobs[i].get();
    const Trace& t = res.trace;
    write_trace_file(t, cfg.output_dir / (t.algorithm + ".csv"));
    const TraceRecord& last = t.records.back();
    runs.push_back({{"algorithm", t.algorithm},
                    {"status", to_string(t.status)},
                    {"iterations", last.iter},
                    {"final_sq_dist", last.sq_dist},
                    {"grad_evals", last.grad_evals},
                    {"comm_rounds", last.comm_rounds},
                    {"rate_per_iter", fit_or_null(t, RateAxis::iter)},
                    {"rate_per_grad_eval", fit_or_null(t, RateAxis::grad_evals)},
                    {"rate_per_comm_round", fit_or_null(t, RateAxis::comm_rounds)}});
  }

  json out = {{"schema", kConfigSchema},
              {"spectral", spectral_json(cfg.graph, g, summary)},
              {"objective",
               {{"kind", cfg.objective.kind == ObjectiveKind::quadratic ? "quadratic" : "logistic"},
                {"n", base.num_nodes()},
                {"d", base.dim()},
                {"L", base.L()},
                {"mu", base.mu()},
                {"kappa", base.kappa()}}},
              {"reference", {{"grad_norm", ref.grad_norm}, {"iterations", ref.iterations}}},
              {"runs", runs}};
  const auto path = cfg.output_dir / "summary.json";
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f << out.dump(2) << '\n';
  f.flush();
  if (!f) throw IoError("failed writing " + path.string());
  return out;
}

}  // namespace decopt
