#pragma once

#include <cstdint>

#include "decopt/spectral.hpp"
#include "decopt/stacked.hpp"
#include "decopt/topology.hpp"

namespace decopt {

/// Communication rounds consumed so far; one round per multiplication by W.
class CommCounter {
 public:
  std::int64_t rounds() const { return rounds_; }
  void add(std::int64_t r) { rounds_ += r; }

 private:
  std::int64_t rounds_ = 0;
};

/// Row i of the result is sum_j W_ij x_j, i.e. (W kron I) x.
StackedState gossip_multiply(const SymmetricMatrix& w, const StackedState& x,
                             CommCounter& counter);

struct ChebyshevParams {
  int T = 1;
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  // Bounds on the positive spectrum of the effective gossip operator.
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  double chi_eff = 1.0;
  // chi == 1: the polynomial is replaced by W / lambda_max, one round.
  bool degenerate = false;
};

ChebyshevParams chebyshev_params(const SpectralSummary& s);

/// x - x_T / a_T from the three-term Chebyshev recursion; T rounds.
StackedState accelerated_gossip(const SymmetricMatrix& w, const ChebyshevParams& p,
                                const StackedState& x, CommCounter& counter);

/// Eigenvalue of the effective gossip operator for an eigenvalue `lambda` of W,
/// evaluated with the same scalar recursion.
double accelerated_gossip_eigenvalue(const ChebyshevParams& p, double lambda);

}  // namespace decopt
