#include "decopt/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "decopt/error.hpp"

namespace decopt {

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::papc: return "papc";
    case Algorithm::apapc: return "apapc";
    case Algorithm::opapc: return "opapc";
    case Algorithm::loopless: return "loopless";
  }
  return "unknown";
}

Algorithm algorithm_from_string(const std::string& name) {
  for (auto a : {Algorithm::papc, Algorithm::apapc, Algorithm::opapc, Algorithm::loopless}) {
    if (to_string(a) == name) return a;
  }
  throw InvalidArgument("unknown algorithm '" + name + "'");
}

double loopless_joint_denominator(const SolverParams& p) {
  const double a = 1.0 + p.eta * p.alpha;
  const double b = 1.0 + p.theta * p.beta - p.theta * p.nu;
  return a * b + p.theta * p.eta;
}

namespace {

void check_params(const SolverParams& p, const SpectralSummary& s) {
  auto fail = [&](const std::string& what) {
    throw ValidationError(to_string(p.algorithm) + " parameters invalid: " + what);
  };
  if (!(p.eta > 0.0) || !(p.theta > 0.0)) fail("eta and theta must be positive");
  if (!(p.tau > 0.0 && p.tau <= 1.0)) fail("tau must lie in (0, 1]");
  switch (p.algorithm) {
    case Algorithm::papc:
    case Algorithm::apapc:
      if (p.eta * p.theta * s.lambda_max > 1.0 + 1e-12) fail("eta * theta * lambda_max > 1");
      break;
    case Algorithm::opapc:
      if (p.eta * p.theta * p.chebyshev.lambda1 > 1.0 + 1e-12) fail("eta * theta * lambda1 > 1");
      break;
    case Algorithm::loopless:
      if (!(p.sigma > 0.0 && p.sigma <= 1.0)) fail("sigma must lie in (0, 1]");
      if (!(p.lambda > 0.0 && p.beta > 0.0 && p.gamma > 0.0 && p.nu > 0.0 && p.alpha > 0.0)) {
        fail("lambda, beta, gamma, nu, alpha must be positive");
      }
      if (!(loopless_joint_denominator(p) > 0.0)) fail("joint-solve denominator <= 0");
      break;
  }
}

}  // namespace

SolverParams derive_params(Algorithm algorithm, double L, double mu, const SpectralSummary& s) {
  if (!(mu > 0.0)) throw InvalidArgument("mu must be positive");
  if (mu > L) throw InvalidArgument("mu must not exceed L");
  const double kappa = L / mu;
  SolverParams p;
  p.algorithm = algorithm;
  p.mu = mu;
  switch (algorithm) {
    case Algorithm::papc:
      p.eta = 1.0 / L;
      p.theta = 1.0 / (p.eta * s.lambda_max);
      p.alpha = 0.0;
      p.tau = 1.0;
      break;
    case Algorithm::apapc:
      p.tau = std::min(1.0, 0.5 * std::sqrt(s.chi / kappa));
      p.eta = 1.0 / (4.0 * p.tau * L);
      p.theta = 1.0 / (p.eta * s.lambda_max);
      p.alpha = mu;
      break;
    case Algorithm::opapc: {
      p.chebyshev = chebyshev_params(s);
      const auto& c = p.chebyshev;
      if (c.degenerate) {
        // unit effective spectrum: APAPC step sizes with chi = 1
        p.tau = std::min(1.0, 0.5 / std::sqrt(kappa));
        p.eta = 1.0 / (4.0 * p.tau * L);
        p.theta = 1.0 / p.eta;
      } else {
        const double c1T = std::pow(c.c1, c.T);
        p.tau = std::min(1.0, (1.0 + c1T) / (2.0 * std::sqrt(kappa) * (1.0 - c1T)));
        p.eta = 1.0 / (4.0 * p.tau * L);
        p.theta = (1.0 + c1T * c1T) / (p.eta * (1.0 + c1T) * (1.0 + c1T));
      }
      p.alpha = mu;
      break;
    }
    case Algorithm::loopless: {
      const double lmax = s.lambda_max;
      const double lmin = s.lambda_min_plus;
      p.eta = 1.0 / (2.0 * std::sqrt(mu * L));
      p.alpha = mu / 2.0;
      p.tau = 0.5 * std::sqrt(mu / L);
      p.sigma = std::sqrt(mu * lmin / (L * lmax)) / 18.0;
      p.nu = 3.0 / (80.0 * L);
      p.beta = 1.0 / (80.0 * L);
      p.theta = 18.0 * std::sqrt(mu * L * lmax) / (5.0 * std::sqrt(lmin));
      p.gamma = lmin / (80.0 * L);
      p.lambda = 9.0 * std::sqrt(mu * L) / (2.0 * std::sqrt(lmin * lmax));
      p.rho = std::sqrt(mu * lmin / (L * lmax)) / 18.0;
      break;
    }
  }
  check_params(p, s);
  return p;
}

SolverState initial_state(const StackedState& x0) {
  SolverState st;
  st.k = 0;
  st.x = x0;
  st.x_f = x0;
  st.y = StackedState::Zero(x0.rows(), x0.cols());
  st.y_f = st.y;
  st.z = st.y;
  st.z_f = st.y;
  return st;
}

SolverState papc_step(const SolverState& st, const SolverParams& p, StepContext& ctx) {
  const StackedState g = ctx.oracle.gradient(st.x);
  const StackedState forward = st.x - p.eta * g;
  SolverState next = st;
  next.y = st.y + p.theta * gossip_multiply(ctx.w, forward - p.eta * st.y, ctx.comm);
  next.x = forward - p.eta * next.y;
  next.x_f = next.x;
  next.k = st.k + 1;
  return next;
}

namespace {

// Shared body of APAPC and OPAPC; `gossip` applies the operator used in the
// dual update.
template <typename Gossip>
SolverState accelerated_papc_step(const SolverState& st, const SolverParams& p,
                                  StepContext& ctx, Gossip&& gossip) {
  const StackedState x_g = p.tau * st.x + (1.0 - p.tau) * st.x_f;
  const StackedState g = ctx.oracle.gradient(x_g);
  const double shrink = 1.0 / (1.0 + p.eta * p.alpha);
  const StackedState base = st.x - p.eta * (g - p.alpha * x_g);

  const StackedState x_half = shrink * (base - p.eta * st.y);
  SolverState next = st;
  next.y = st.y + p.theta * gossip(x_half);
  next.x = shrink * (base - p.eta * next.y);
  next.x_f = x_g + (2.0 * p.tau / (2.0 - p.tau)) * (next.x - st.x);
  next.k = st.k + 1;
  return next;
}

}  // namespace

SolverState apapc_step(const SolverState& st, const SolverParams& p, StepContext& ctx) {
  return accelerated_papc_step(st, p, ctx, [&](const StackedState& v) {
    return gossip_multiply(ctx.w, v, ctx.comm);
  });
}

SolverState opapc_step(const SolverState& st, const SolverParams& p, StepContext& ctx) {
  return accelerated_papc_step(st, p, ctx, [&](const StackedState& v) {
    return accelerated_gossip(ctx.w, p.chebyshev, v, ctx.comm);
  });
}

SolverState loopless_step(const SolverState& st, const SolverParams& p, StepContext& ctx) {
  const double denom = loopless_joint_denominator(p);
  if (!(denom > 0.0)) {
    std::ostringstream msg;
    msg << "loopless joint solve denominator " << denom << " <= 0 (eta=" << p.eta
        << ", theta=" << p.theta << ", beta=" << p.beta << ", nu=" << p.nu << ")";
    throw ValidationError(msg.str());
  }
  const StackedState x_g = p.tau * st.x + (1.0 - p.tau) * st.x_f;
  const StackedState y_g = p.sigma * st.y + (1.0 - p.sigma) * st.y_f;
  const StackedState z_g = p.sigma * st.z + (1.0 - p.sigma) * st.z_f;

  const StackedState grad_r = ctx.oracle.shifted_gradient_r(x_g);
  const StackedState h_z = (2.0 / p.mu) * (y_g + z_g);
  const StackedState h_y = h_z + p.nu * y_g;

  // a x' = u + eta y' and (1 + theta beta - theta nu) y' = v - theta x';
  // eliminating x' leaves y' = (a v - theta u) / denom.
  const double a = 1.0 + p.eta * p.alpha;
  const StackedState u = st.x + p.eta * p.alpha * x_g - p.eta * grad_r;
  const StackedState v = st.y + p.theta * p.beta * y_g - p.theta * h_y;

  SolverState next = st;
  next.y = (a * v - p.theta * u) / denom;
  next.x = (u + p.eta * next.y) / a;
  next.z = (st.z + p.lambda * p.gamma * z_g - p.lambda * gossip_multiply(ctx.w, h_z, ctx.comm)) /
           (1.0 + p.lambda * p.gamma);
  next.x_f = x_g + (2.0 * p.tau / (2.0 - p.tau)) * (next.x - st.x);
  next.y_f = y_g + p.sigma * (next.y - st.y);
  next.z_f = z_g + p.sigma * (next.z - st.z);
  next.k = st.k + 1;
  return next;
}

SolverState step(const SolverState& st, const SolverParams& p, StepContext& ctx) {
  switch (p.algorithm) {
    case Algorithm::papc: return papc_step(st, p, ctx);
    case Algorithm::apapc: return apapc_step(st, p, ctx);
    case Algorithm::opapc: return opapc_step(st, p, ctx);
    case Algorithm::loopless: return loopless_step(st, p, ctx);
  }
  throw InvalidArgument("unknown algorithm");
}

}  // namespace decopt
