#pragma once

#include <Eigen/Dense>

namespace decopt {

/// Lifted per-node variable: row i is the d-vector held by node i. Primal
/// iterates and dual variables share this shape.
using StackedState = Eigen::MatrixXd;

inline StackedState consensus_state(const Eigen::VectorXd& v, int n) {
  return v.transpose().replicate(n, 1);
}

inline bool all_finite(const StackedState& x) { return x.allFinite(); }

}  // namespace decopt
