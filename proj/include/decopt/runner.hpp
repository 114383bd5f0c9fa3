#pragma once

#include <cstdint>

#include "decopt/diagnostics.hpp"
#include "decopt/solver.hpp"
#include "decopt/trace.hpp"

namespace decopt {

struct RunOptions {
  double eps = 1e-10;          // stop once sq_dist <= eps
  std::int64_t max_iters = 10000;
  std::int64_t record_every = 1;
  bool lyapunov = false;       // record Psi (APAPC, OPAPC, loopless)
};

struct RunResult {
  Trace trace;
  SolverState final_state;
};

/// Runs one algorithm from x0 with zero duals. Records the initial state,
/// every `record_every`-th iterate, and the final iterate. A non-finite
/// iterate stops the run with status `diverged`; the trace then ends at the
/// last finite record.
RunResult run(const SolverParams& p, Oracle& oracle, const SymmetricMatrix& w,
              const Spectrum& spectrum, const StackedState& x0,
              const ReferencePoint& ref, const RunOptions& opts);

}  // namespace decopt
