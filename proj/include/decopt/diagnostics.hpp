#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "decopt/oracle.hpp"
#include "decopt/solver.hpp"
#include "decopt/spectral.hpp"
#include "decopt/trace.hpp"

namespace decopt {

/// Saddle points of both primal-dual formulations, built from the consensus
/// minimizer x_bar.
struct ReferencePoint {
  Eigen::VectorXd x_bar;
  StackedState x_star;           // x_bar on every node
  StackedState y_star;           // -grad F(x*)
  StackedState y_star_loopless;  // grad F(x*) - (mu/2) x*
  StackedState z_star;           // -grad F(x*)
  double grad_norm = 0.0;        // ||sum_i grad f_i(x_bar)||
  std::int64_t iterations = 0;
};

/// Fills every field from a known minimizer.
ReferencePoint reference_from_minimizer(const Oracle& o, const Eigen::VectorXd& x_bar);

/// Centralized Nesterov method on phi(v) = sum_i f_i(v) with constants
/// (nL, n mu), stopped once ||grad phi|| <= tol. Throws NumericalError
/// carrying the best gradient norm when max_iters runs out.
ReferencePoint reference_solution(const Oracle& o, double tol = 1e-12,
                                  std::int64_t max_iters = 1'000'000);

double sq_dist(const SolverState& st, const ReferencePoint& ref);

/// Lyapunov function of APAPC (also OPAPC when `s` is the spectrum of the
/// effective gossip operator):
///   (1/eta)||dx||^2 + (1/theta)<W^+ dy, dy> - eta/(1+eta alpha)||dy||^2
///   + 2(1-tau)/tau D_F(x_f, x*).
double lyapunov_apapc(const SolverState& st, const ReferencePoint& ref,
                      const SolverParams& p, const Spectrum& s, const Oracle& o);

/// Lyapunov function of the loopless method:
///   (1+rho)[(1/eta)||dx||^2 + (1/theta)||dy||^2 + (1/lambda)<W^+ dz, dz>]
///   + (2-tau)/tau D_r(x_f, x*) + (2/sigma) D_h((y_f, z_f), (y*, z*)).
double lyapunov_loopless(const SolverState& st, const ReferencePoint& ref,
                         const SolverParams& p, const Spectrum& s, const Oracle& o);

/// D_h((y, z), (y', z')) = (1/mu)||y + z - y' - z'||^2 + (nu/2)||y - y'||^2.
double bregman_h(const StackedState& y, const StackedState& z, const StackedState& y_ref,
                 const StackedState& z_ref, double mu, double nu);

/// Guaranteed per-step factor Psi^{k+1} <= factor * Psi^k.
/// APAPC/OPAPC: (1 + 1/4 min{sqrt(mu l2 / (L l1)), l2 / l1})^{-1} where
/// (l1, l2) bound the positive spectrum of the gossip operator in use.
double apapc_contraction_factor(double L, double mu, double lambda1, double lambda2);
/// Loopless: 1 - 1/(1 + 1/rho).
double loopless_contraction_factor(const SolverParams& p);

/// Spectrum of the gossip operator an algorithm actually multiplies by.
Spectrum effective_spectrum(const Spectrum& s, const SolverParams& p);

enum class RateAxis { iter, grad_evals, comm_rounds };

struct RateFit {
  double rate = 1.0;  // geometric factor per unit of the chosen axis
  double r_squared = 0.0;
  bool converged = false;  // a zero sq_dist fell inside the window
  std::size_t points = 0;
};

/// Least-squares fit of log(sq_dist) over the last `tail_fraction` of records.
/// Throws InvalidArgument with fewer than three usable records.
RateFit empirical_rate(const Trace& t, double tail_fraction, RateAxis axis);

}  // namespace decopt
