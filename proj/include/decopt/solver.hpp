#pragma once

#include <cstdint>
#include <string>

#include "decopt/gossip.hpp"
#include "decopt/oracle.hpp"
#include "decopt/spectral.hpp"
#include "decopt/stacked.hpp"
#include "decopt/topology.hpp"

namespace decopt {

enum class Algorithm { papc, apapc, opapc, loopless };

std::string to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& name);

struct SolverParams {
  Algorithm algorithm = Algorithm::apapc;
  double mu = 0.0;  // strong convexity of F, kept for the loopless h-gradient

  double eta = 0.0;
  double theta = 0.0;
  double alpha = 0.0;
  double tau = 1.0;
  ChebyshevParams chebyshev;  // opapc only

  // loopless only
  double lambda = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double nu = 0.0;
  double sigma = 1.0;
  double rho = 0.0;
};

/// Step sizes for each algorithm from (L, mu) and the gossip spectrum.
/// Throws InvalidArgument unless 0 < mu <= L.
SolverParams derive_params(Algorithm algorithm, double L, double mu,
                           const SpectralSummary& s);

/// Denominator of the closed-form solve of the coupled loopless x/y update.
double loopless_joint_denominator(const SolverParams& p);

/// Iterate snapshot. Companions x_f, y_f, z_f equal their base variable at
/// k = 0; the y_f, z, z_f slots are used by the loopless method only.
struct SolverState {
  std::int64_t k = 0;
  StackedState x;
  StackedState x_f;
  StackedState y;
  StackedState y_f;
  StackedState z;
  StackedState z_f;
};

/// x^0 = x0, every dual zero.
SolverState initial_state(const StackedState& x0);

/// Mutable resources a step consumes: gradient calls and communication rounds.
struct StepContext {
  Oracle& oracle;
  const SymmetricMatrix& w;
  CommCounter& comm;
};

SolverState papc_step(const SolverState& st, const SolverParams& p, StepContext& ctx);
SolverState apapc_step(const SolverState& st, const SolverParams& p, StepContext& ctx);
SolverState opapc_step(const SolverState& st, const SolverParams& p, StepContext& ctx);
SolverState loopless_step(const SolverState& st, const SolverParams& p, StepContext& ctx);

/// Dispatches on p.algorithm.
SolverState step(const SolverState& st, const SolverParams& p, StepContext& ctx);

}  // namespace decopt
