#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "decopt/oracle.hpp"
#include "decopt/solver.hpp"
#include "decopt/topology.hpp"

namespace decopt {

struct ObjectiveConfig {
  ObjectiveKind kind = ObjectiveKind::quadratic;
  int d = 1;
  // quadratic: coordinate scales spread over [1/kappa, 1]; kappa = 1 gives
  // the uniform f_i = 1/2||x - b_i||^2.
  // logistic: when set, reg is chosen so that L / mu == kappa.
  std::optional<double> kappa;
  double reg = 0.0;
  int samples_per_node = 0;
  std::optional<std::filesystem::path> dataset_path;
  std::uint64_t seed = 0;
};

struct SolverRunConfig {
  Algorithm algorithm = Algorithm::apapc;
  std::int64_t max_iters = 1000;
  double eps = 1e-10;
  std::int64_t record_every = 1;
  bool lyapunov = false;
};

struct ExperimentConfig {
  TopologySpec graph;
  ObjectiveConfig objective;
  std::vector<SolverRunConfig> solvers;
  double reference_tol = 1e-12;
  std::filesystem::path output_dir = "out";
  std::uint64_t seed = 0;
};

inline constexpr int kConfigSchema = 1;

/// Throws InvalidArgument on schema violations.
TopologySpec parse_topology(const nlohmann::json& j);
ExperimentConfig parse_config(const nlohmann::json& j);
/// Throws IoError when the file cannot be read or is not JSON.
ExperimentConfig load_config(const std::filesystem::path& path);

/// Oracle for `cfg` on n nodes. Logistic data comes from dataset_path or a
/// synthetic set of n * samples_per_node samples.
Oracle build_objective(const ObjectiveConfig& cfg, int n);

/// {n, edges, lambda_max, lambda_min_plus, chi, chebyshev: {T, c1, c2, c3, chi_eff}}.
nlohmann::json spectrum_report(const TopologySpec& spec);

/// Builds the problem, validates the gossip matrix, solves for the reference
/// point, runs every solver on its own oracle instance, and writes
/// `<output_dir>/<algorithm>.csv` plus `summary.json`. Returns the summary.
nlohmann::json run_experiment(const ExperimentConfig& cfg);

}  // namespace decopt
