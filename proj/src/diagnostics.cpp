#include "decopt/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "decopt/error.hpp"

namespace decopt {

ReferencePoint reference_from_minimizer(const Oracle& o, const Eigen::VectorXd& x_bar) {
  const int n = o.num_nodes();
  ReferencePoint ref;
  ref.x_bar = x_bar;
  ref.x_star = consensus_state(x_bar, n);
  const StackedState g = o.gradient_uncounted(ref.x_star);
  ref.y_star = -g;
  ref.z_star = -g;
  ref.y_star_loopless = g - 0.5 * o.mu() * ref.x_star;
  ref.grad_norm = g.colwise().sum().norm();
  return ref;
}

ReferencePoint reference_solution(const Oracle& o, double tol, std::int64_t max_iters) {
  const int n = o.num_nodes();
  const int d = o.dim();
  auto grad_phi = [&](const Eigen::VectorXd& v) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(d);
    for (int i = 0; i < n; ++i) g += o.node_gradient(i, v);
    return g;
  };
  const double lip = n * o.L();
  const double sqrt_kappa = std::sqrt(o.L() / o.mu());
  const double momentum = (sqrt_kappa - 1.0) / (sqrt_kappa + 1.0);

  Eigen::VectorXd v = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd v_prev = v;
  Eigen::VectorXd g = grad_phi(v);
  Eigen::VectorXd best = v;
  double best_norm = g.norm();
  std::int64_t it = 0;
  while (best_norm > tol && it < max_iters) {
    const Eigen::VectorXd look = v + momentum * (v - v_prev);
    v_prev = v;
    v = look - grad_phi(look) / lip;
    g = grad_phi(v);
    ++it;
    const double norm = g.norm();
    if (norm < best_norm) {
      best_norm = norm;
      best = v;
    }
  }
  if (best_norm > tol) {
    std::ostringstream msg;
    msg << "reference solve stopped after " << it << " iterations with gradient norm "
        << best_norm << " > " << tol;
    throw NumericalError(msg.str());
  }
  ReferencePoint ref = reference_from_minimizer(o, best);
  ref.iterations = it;
  return ref;
}

double sq_dist(const SolverState& st, const ReferencePoint& ref) {
  return (st.x - ref.x_star).squaredNorm();
}

double lyapunov_apapc(const SolverState& st, const ReferencePoint& ref, const SolverParams& p,
                      const Spectrum& s, const Oracle& o) {
  const StackedState dy = st.y - ref.y_star;
  const double scale = st.y.norm() + ref.y_star.norm();
  const double pinv = pinv_quadratic_form(s, dy, kDefaultZeroTol, scale) / p.theta;
  const double plain = p.eta / (1.0 + p.eta * p.alpha) * dy.squaredNorm();
  const double y_block = pinv - plain;
  if (y_block < -1e-12 * (pinv + plain)) {
    throw ValidationError("dual block of the APAPC Lyapunov function is negative; "
                          "eta * theta * lambda_max must not exceed 1");
  }
  const double x_block = (st.x - ref.x_star).squaredNorm() / p.eta;
  double psi = x_block + y_block;
  if (p.tau < 1.0) psi += 2.0 * (1.0 - p.tau) / p.tau * o.bregman(st.x_f, ref.x_star);
  return psi;
}

double bregman_h(const StackedState& y, const StackedState& z, const StackedState& y_ref,
                 const StackedState& z_ref, double mu, double nu) {
  return (y + z - y_ref - z_ref).squaredNorm() / mu + 0.5 * nu * (y - y_ref).squaredNorm();
}

double lyapunov_loopless(const SolverState& st, const ReferencePoint& ref, const SolverParams& p,
                         const Spectrum& s, const Oracle& o) {
  const StackedState dz = st.z - ref.z_star;
  const double scale = st.z.norm() + ref.z_star.norm();
  const double norm_p = (st.x - ref.x_star).squaredNorm() / p.eta +
                        (st.y - ref.y_star_loopless).squaredNorm() / p.theta +
                        pinv_quadratic_form(s, dz, kDefaultZeroTol, scale) / p.lambda;
  const double d_r = o.bregman_r(st.x_f, ref.x_star);
  const double d_h = bregman_h(st.y_f, st.z_f, ref.y_star_loopless, ref.z_star, p.mu, p.nu);
  return (1.0 + p.rho) * norm_p + (2.0 - p.tau) / p.tau * d_r + 2.0 / p.sigma * d_h;
}

double apapc_contraction_factor(double L, double mu, double lambda1, double lambda2) {
  const double inv_chi = lambda2 / lambda1;
  const double gain = 0.25 * std::min(std::sqrt(mu / L * inv_chi), inv_chi);
  return 1.0 / (1.0 + gain);
}

double loopless_contraction_factor(const SolverParams& p) {
  return 1.0 - 1.0 / (1.0 + 1.0 / p.rho);
}

Spectrum effective_spectrum(const Spectrum& s, const SolverParams& p) {
  if (p.algorithm != Algorithm::opapc) return s;
  const ChebyshevParams c = p.chebyshev;
  return s.mapped([c](double lam) { return accelerated_gossip_eigenvalue(c, lam); });
}

RateFit empirical_rate(const Trace& t, double tail_fraction, RateAxis axis) {
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) {
    throw InvalidArgument("tail_fraction must lie in (0, 1]");
  }
  const std::size_t total = t.records.size();
  const auto window = static_cast<std::size_t>(std::ceil(tail_fraction * total));
  const std::size_t first = total - std::min(window, total);

  auto abscissa = [axis](const TraceRecord& r) {
    switch (axis) {
      case RateAxis::iter: return static_cast<double>(r.iter);
      case RateAxis::grad_evals: return static_cast<double>(r.grad_evals);
      case RateAxis::comm_rounds: return static_cast<double>(r.comm_rounds);
    }
    return 0.0;
  };

  RateFit fit;
  std::vector<double> xs, ys;
  for (std::size_t i = first; i < total; ++i) {
    const auto& r = t.records[i];
    if (r.sq_dist == 0.0) {
      fit.converged = true;
      continue;
    }
    if (r.sq_dist > 0.0 && std::isfinite(r.sq_dist)) {
      xs.push_back(abscissa(r));
      ys.push_back(std::log(r.sq_dist));
    }
  }
  if (fit.converged) {
    fit.rate = 0.0;
    fit.r_squared = 1.0;
    fit.points = xs.size();
    return fit;
  }
  if (xs.size() < 3) {
    throw InvalidArgument("need at least 3 records with positive sq_dist to fit a rate");
  }
  const double m = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0) throw InvalidArgument("records share a single abscissa");
  const double slope = sxy / sxx;
  fit.rate = std::exp(slope);
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  fit.points = xs.size();
  return fit;
}

}  // namespace decopt
