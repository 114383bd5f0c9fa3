#include "decopt/runner.hpp"

#include <cmath>
#include <optional>

#include "decopt/error.hpp"

namespace decopt {

namespace {

bool finite_state(const SolverState& st) {
  return all_finite(st.x) && all_finite(st.x_f) && all_finite(st.y) && all_finite(st.y_f) &&
         all_finite(st.z) && all_finite(st.z_f);
}

}  // namespace

RunResult run(const SolverParams& p, Oracle& oracle, const SymmetricMatrix& w,
              const Spectrum& spectrum, const StackedState& x0, const ReferencePoint& ref,
              const RunOptions& opts) {
  if (opts.max_iters < 0) throw InvalidArgument("max_iters must be >= 0");
  if (opts.record_every < 1) throw InvalidArgument("record_every must be >= 1");
  if (!(opts.eps > 0.0)) throw InvalidArgument("eps must be positive");

  const bool want_psi = opts.lyapunov && p.algorithm != Algorithm::papc;
  std::optional<Spectrum> psi_spectrum;
  if (want_psi) psi_spectrum = effective_spectrum(spectrum, p);

  CommCounter comm;
  StepContext ctx{oracle, w, comm};
  const std::int64_t grad_base = oracle.grad_count();

  RunResult out;
  out.trace.algorithm = to_string(p.algorithm);
  auto record = [&](const SolverState& st, double dist) {
    TraceRecord r;
    r.iter = st.k;
    r.grad_evals = oracle.grad_count() - grad_base;
    r.comm_rounds = comm.rounds();
    r.sq_dist = dist;
    if (want_psi) {
      r.lyapunov = p.algorithm == Algorithm::loopless
                       ? lyapunov_loopless(st, ref, p, *psi_spectrum, oracle)
                       : lyapunov_apapc(st, ref, p, *psi_spectrum, oracle);
    }
    out.trace.records.push_back(r);
  };

  SolverState st = initial_state(x0);
  double dist = sq_dist(st, ref);
  record(st, dist);
  out.trace.status = RunStatus::running;
  if (dist <= opts.eps) out.trace.status = RunStatus::converged;

  while (out.trace.status == RunStatus::running) {
    if (st.k >= opts.max_iters) {
      out.trace.status = RunStatus::max_iters;
      break;
    }
    SolverState next = step(st, p, ctx);
    const double next_dist = sq_dist(next, ref);
    if (!finite_state(next) || !std::isfinite(next_dist)) {
      out.trace.status = RunStatus::diverged;
      if (out.trace.records.back().iter != st.k) record(st, dist);
      break;
    }
    st = std::move(next);
    dist = next_dist;
    if (dist <= opts.eps) {
      out.trace.status = RunStatus::converged;
    }
    if (st.k % opts.record_every == 0 || out.trace.status == RunStatus::converged ||
        st.k >= opts.max_iters) {
      record(st, dist);
    }
  }
  out.final_state = std::move(st);
  return out;
}

}  // namespace decopt
