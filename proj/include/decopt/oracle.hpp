#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "decopt/shard.hpp"
#include "decopt/stacked.hpp"

namespace decopt {

enum class ObjectiveKind { quadratic, logistic };

/// Per-node objectives f_1..f_n and their sum F over the stacked variable.
///
/// Quadratic nodes are f_i(x) = 1/2 sum_c s_ic (x_c - b_ic)^2 (diagonal
/// Hessian; a uniform scale s gives L = mu = s). Logistic nodes are
/// f_i(x) = (1/m_i) sum_j log(1 + exp(-b_ij a_ij^T x)) + (r/2)||x||^2.
///
/// Every call to gradient() or shifted_gradient_r() counts as one gradient
/// computation (all nodes evaluate once). The *_uncounted, value and bregman
/// paths are for diagnostics and leave the counter alone. A single instance
/// must not be shared between threads; fresh() hands out an independent
/// counter over the same read-only data.
class Oracle {
 public:
  static Oracle quadratic(StackedState targets, double scale);
  static Oracle quadratic(StackedState targets, StackedState scales);
  static Oracle logistic(std::vector<NodeShard> shards, double reg);

  Oracle fresh() const;

  ObjectiveKind kind() const;
  int num_nodes() const;
  int dim() const;
  double L() const;
  double mu() const;
  double kappa() const { return L() / mu(); }
  std::int64_t grad_count() const { return grad_count_; }

  /// Row i = grad f_i(x_i).
  StackedState gradient(const StackedState& x);
  /// grad F(x) - (mu/2) x, the gradient of r(x) = F(x) - (mu/4)||x||^2.
  StackedState shifted_gradient_r(const StackedState& x);

  StackedState gradient_uncounted(const StackedState& x) const;
  Eigen::VectorXd node_gradient(int node, const Eigen::VectorXd& v) const;
  double node_value(int node, const Eigen::VectorXd& v) const;
  double value(const StackedState& x) const;

  /// D_F(x, ref) = F(x) - F(ref) - <grad F(ref), x - ref>. Exact closed form
  /// for quadratics.
  double bregman(const StackedState& x, const StackedState& ref) const;
  /// D_r(x, ref) = D_F(x, ref) - (mu/4)||x - ref||^2.
  double bregman_r(const StackedState& x, const StackedState& ref) const;

  /// Quadratic data (empty for logistic).
  const StackedState& targets() const;
  const StackedState& scales() const;
  const std::vector<NodeShard>& shards() const;

 private:
  struct Data;
  explicit Oracle(std::shared_ptr<const Data> data) : data_(std::move(data)) {}

  void check_shape(const StackedState& x) const;

  std::shared_ptr<const Data> data_;
  std::int64_t grad_count_ = 0;
};

/// Quadratic family with coordinate scales in [1/kappa, 1] (so L = 1 exactly,
/// mu = 1/kappa exactly) and standard normal targets, both seeded.
Oracle heterogeneous_quadratic(int n, int d, double kappa, std::uint64_t seed);

/// lambda_max(A^T A) by power iteration from a fixed-seed start vector.
double gram_lambda_max(const Eigen::MatrixXd& a, double tol = 1e-10, int max_iters = 10000);

/// Numerically stable log(1 + exp(-t)) and 1 / (1 + exp(t)).
double log1p_exp_neg(double t);
double sigmoid_neg(double t);

}  // namespace decopt
