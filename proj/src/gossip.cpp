#include "decopt/gossip.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "decopt/error.hpp"

namespace decopt {

StackedState gossip_multiply(const SymmetricMatrix& w, const StackedState& x,
                             CommCounter& counter) {
  if (w.dim() != x.rows()) {
    throw InvalidArgument("gossip matrix is " + std::to_string(w.dim()) + "x" +
                          std::to_string(w.dim()) + " but state has " +
                          std::to_string(x.rows()) + " rows");
  }
  counter.add(1);
  return w.dense() * x;
}

ChebyshevParams chebyshev_params(const SpectralSummary& s) {
  ChebyshevParams p;
  const double chi = s.chi;
  if (chi <= 1.0 + 1e-9) {
    p.degenerate = true;
    p.T = 1;
    p.c1 = 0.0;
    p.c2 = std::numeric_limits<double>::infinity();
    p.c3 = 1.0 / s.lambda_max;
    p.lambda1 = 1.0;
    p.lambda2 = 1.0;
    p.chi_eff = 1.0;
    return p;
  }
  const double root = std::sqrt(chi);
  // chi computed from a numerical spectrum can land a hair under a perfect
  // square; 4 - 1e-15 must still give T = 2.
  p.T = std::max(1, static_cast<int>(std::floor(root * (1.0 + 1e-10))));
  p.c1 = (root - 1.0) / (root + 1.0);
  p.c2 = (chi + 1.0) / (chi - 1.0);
  p.c3 = 2.0 * chi / ((1.0 + chi) * s.lambda_max);
  const double c1T = std::pow(p.c1, p.T);
  const double band = 2.0 * c1T / (1.0 + c1T * c1T);
  p.lambda1 = 1.0 + band;
  p.lambda2 = 1.0 - band;
  p.chi_eff = p.lambda1 / p.lambda2;
  return p;
}

StackedState accelerated_gossip(const SymmetricMatrix& w, const ChebyshevParams& p,
                                const StackedState& x, CommCounter& counter) {
  if (p.degenerate) return p.c3 * gossip_multiply(w, x, counter);

  // x_1 = c2 (I - c3 W) x
  StackedState prev = x;
  StackedState curr = p.c2 * (x - p.c3 * gossip_multiply(w, x, counter));
  double a_prev = 1.0;
  double a_curr = p.c2;
  for (int i = 1; i < p.T; ++i) {
    StackedState next = 2.0 * p.c2 * (curr - p.c3 * gossip_multiply(w, curr, counter)) - prev;
    const double a_next = 2.0 * p.c2 * a_curr - a_prev;
    prev = std::move(curr);
    curr = std::move(next);
    a_prev = a_curr;
    a_curr = a_next;
  }
  return x - curr / a_curr;
}

double accelerated_gossip_eigenvalue(const ChebyshevParams& p, double lambda) {
  if (p.degenerate) return p.c3 * lambda;
  const double s = 1.0 - p.c3 * lambda;
  double prev = 1.0, curr = p.c2 * s;
  double a_prev = 1.0, a_curr = p.c2;
  for (int i = 1; i < p.T; ++i) {
    const double next = 2.0 * p.c2 * s * curr - prev;
    const double a_next = 2.0 * p.c2 * a_curr - a_prev;
    prev = curr;
    curr = next;
    a_prev = a_curr;
    a_curr = a_next;
  }
  return 1.0 - curr / a_curr;
}

}  // namespace decopt
