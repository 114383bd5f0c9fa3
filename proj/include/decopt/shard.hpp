#pragma once

#include <Eigen/Dense>

namespace decopt {

/// Data held by one node: m x d dense features and labels in {-1, +1}.
struct NodeShard {
  Eigen::MatrixXd features;
  Eigen::VectorXd labels;

  int num_samples() const { return static_cast<int>(features.rows()); }
};

}  // namespace decopt
