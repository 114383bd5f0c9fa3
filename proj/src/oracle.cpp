#include "decopt/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "decopt/error.hpp"

namespace decopt {

struct Oracle::Data {
  ObjectiveKind kind = ObjectiveKind::quadratic;
  int n = 0;
  int d = 0;
  double L = 0.0;
  double mu = 0.0;
  // quadratic
  StackedState targets;
  StackedState scales;
  // logistic
  std::vector<NodeShard> shards;
  double reg = 0.0;
};

double log1p_exp_neg(double t) {
  // log(1 + e^{-t}) without overflow for large |t|
  return t >= 0.0 ? std::log1p(std::exp(-t)) : -t + std::log1p(std::exp(t));
}

double sigmoid_neg(double t) {
  // 1 / (1 + e^{t})
  if (t >= 0.0) {
    const double e = std::exp(-t);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(t));
}

double gram_lambda_max(const Eigen::MatrixXd& a, double tol, int max_iters) {
  const Eigen::Index d = a.cols();
  if (d == 0 || a.rows() == 0) return 0.0;
  const Eigen::MatrixXd gram = a.transpose() * a;
  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(d);
  for (Eigen::Index i = 0; i < d; ++i) v(i) = normal(rng);
  v.normalize();
  double lambda = v.dot(gram * v);
  for (int it = 0; it < max_iters; ++it) {
    Eigen::VectorXd w = gram * v;
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    v = w / norm;
    const double next = v.dot(gram * v);
    const bool done = std::abs(next - lambda) <= tol * std::max(1.0, std::abs(next));
    lambda = next;
    if (done) break;
  }
  return lambda;
}

Oracle Oracle::quadratic(StackedState targets, double scale) {
  if (!(scale > 0.0)) throw InvalidArgument("quadratic scale must be positive");
  StackedState scales = StackedState::Constant(targets.rows(), targets.cols(), scale);
  return quadratic(std::move(targets), std::move(scales));
}

Oracle Oracle::quadratic(StackedState targets, StackedState scales) {
  if (targets.rows() < 1 || targets.cols() < 1) throw InvalidArgument("empty quadratic data");
  if (targets.rows() != scales.rows() || targets.cols() != scales.cols()) {
    throw InvalidArgument("quadratic targets and scales differ in shape");
  }
  if (!targets.allFinite() || !scales.allFinite() || !(scales.minCoeff() > 0.0)) {
    throw InvalidArgument("quadratic scales must be positive and finite");
  }
  auto data = std::make_shared<Data>();
  data->kind = ObjectiveKind::quadratic;
  data->n = static_cast<int>(targets.rows());
  data->d = static_cast<int>(targets.cols());
  data->L = scales.maxCoeff();
  data->mu = scales.minCoeff();
  data->targets = std::move(targets);
  data->scales = std::move(scales);
  return Oracle(std::move(data));
}

Oracle Oracle::logistic(std::vector<NodeShard> shards, double reg) {
  if (!(reg > 0.0)) {
    throw InvalidArgument("logistic objective needs reg > 0 for strong convexity");
  }
  if (shards.empty()) throw InvalidArgument("no shards");
  const Eigen::Index d = shards.front().features.cols();
  double lmax = 0.0;
  for (std::size_t i = 0; i < shards.size(); ++i) {
    const auto& s = shards[i];
    if (s.num_samples() == 0) throw InvalidArgument("shard " + std::to_string(i) + " is empty");
    if (s.features.cols() != d || s.labels.size() != s.features.rows()) {
      throw InvalidArgument("shard " + std::to_string(i) + " has inconsistent shape");
    }
    lmax = std::max(lmax, gram_lambda_max(s.features) / (4.0 * s.num_samples()));
  }
  auto data = std::make_shared<Data>();
  data->kind = ObjectiveKind::logistic;
  data->n = static_cast<int>(shards.size());
  data->d = static_cast<int>(d);
  data->reg = reg;
  data->mu = reg;
  data->L = lmax + reg;
  data->shards = std::move(shards);
  return Oracle(std::move(data));
}

Oracle Oracle::fresh() const { return Oracle(data_); }

ObjectiveKind Oracle::kind() const { return data_->kind; }
int Oracle::num_nodes() const { return data_->n; }
int Oracle::dim() const { return data_->d; }
double Oracle::L() const { return data_->L; }
double Oracle::mu() const { return data_->mu; }
const StackedState& Oracle::targets() const { return data_->targets; }
const StackedState& Oracle::scales() const { return data_->scales; }
const std::vector<NodeShard>& Oracle::shards() const { return data_->shards; }

void Oracle::check_shape(const StackedState& x) const {
  if (x.rows() != data_->n || x.cols() != data_->d) {
    throw InvalidArgument("state shape " + std::to_string(x.rows()) + "x" +
                          std::to_string(x.cols()) + " does not match oracle " +
                          std::to_string(data_->n) + "x" + std::to_string(data_->d));
  }
}

Eigen::VectorXd Oracle::node_gradient(int node, const Eigen::VectorXd& v) const {
  const Data& dt = *data_;
  if (dt.kind == ObjectiveKind::quadratic) {
    return dt.scales.row(node).transpose().cwiseProduct(v - dt.targets.row(node).transpose());
  }
  const NodeShard& s = dt.shards[node];
  const Eigen::VectorXd margins = s.features * v;
  Eigen::VectorXd weights(margins.size());
  for (Eigen::Index j = 0; j < margins.size(); ++j) {
    const double b = s.labels(j);
    weights(j) = -b * sigmoid_neg(b * margins(j));
  }
  return s.features.transpose() * weights / static_cast<double>(s.num_samples()) + dt.reg * v;
}

double Oracle::node_value(int node, const Eigen::VectorXd& v) const {
  const Data& dt = *data_;
  if (dt.kind == ObjectiveKind::quadratic) {
    const Eigen::VectorXd diff = v - dt.targets.row(node).transpose();
    return 0.5 * dt.scales.row(node).transpose().cwiseProduct(diff).dot(diff);
  }
  const NodeShard& s = dt.shards[node];
  const Eigen::VectorXd margins = s.features * v;
  double loss = 0.0;
  for (Eigen::Index j = 0; j < margins.size(); ++j) {
    loss += log1p_exp_neg(s.labels(j) * margins(j));
  }
  return loss / s.num_samples() + 0.5 * dt.reg * v.squaredNorm();
}

StackedState Oracle::gradient_uncounted(const StackedState& x) const {
  check_shape(x);
  const Data& dt = *data_;
  if (dt.kind == ObjectiveKind::quadratic) {
    return dt.scales.cwiseProduct(x - dt.targets);
  }
  StackedState g(dt.n, dt.d);
  for (int i = 0; i < dt.n; ++i) {
    g.row(i) = node_gradient(i, x.row(i).transpose()).transpose();
  }
  return g;
}

StackedState Oracle::gradient(const StackedState& x) {
  StackedState g = gradient_uncounted(x);
  ++grad_count_;
  return g;
}

StackedState Oracle::shifted_gradient_r(const StackedState& x) {
  StackedState g = gradient(x);
  g -= 0.5 * data_->mu * x;
  return g;
}

double Oracle::value(const StackedState& x) const {
  check_shape(x);
  double total = 0.0;
  for (int i = 0; i < data_->n; ++i) total += node_value(i, x.row(i).transpose());
  return total;
}

double Oracle::bregman(const StackedState& x, const StackedState& ref) const {
  check_shape(x);
  check_shape(ref);
  if (data_->kind == ObjectiveKind::quadratic) {
    const StackedState diff = x - ref;
    return 0.5 * data_->scales.cwiseProduct(diff).cwiseProduct(diff).sum();
  }
  // Per sample, with u = -b a^T x: D = log1p(p0 expm1(du)) - p0 du where
  // p0 = 1 / (1 + e^{-u0}). Avoids differencing the two loss values.
  double total = 0.0;
  for (int i = 0; i < data_->n; ++i) {
    const NodeShard& s = data_->shards[i];
    const Eigen::VectorXd t = s.features * x.row(i).transpose();
    const Eigen::VectorXd t0 = s.features * ref.row(i).transpose();
    double node = 0.0;
    for (Eigen::Index j = 0; j < t.size(); ++j) {
      const double b = s.labels(j);
      const double p0 = sigmoid_neg(b * t0(j));
      const double du = -b * (t(j) - t0(j));
      if (du > 30.0) {
        node += du * (1.0 - p0) + std::log(p0 + (1.0 - p0) * std::exp(-du));
      } else {
        node += std::log1p(p0 * std::expm1(du)) - p0 * du;
      }
    }
    total += node / s.num_samples() +
             0.5 * data_->reg * (x.row(i) - ref.row(i)).squaredNorm();
  }
  return total;
}

double Oracle::bregman_r(const StackedState& x, const StackedState& ref) const {
  return bregman(x, ref) - 0.25 * data_->mu * (x - ref).squaredNorm();
}

Oracle heterogeneous_quadratic(int n, int d, double kappa, std::uint64_t seed) {
  if (n < 1 || d < 1) throw InvalidArgument("heterogeneous_quadratic needs n, d >= 1");
  if (!(kappa >= 1.0)) throw InvalidArgument("kappa must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  StackedState targets(n, d);
  StackedState scales(n, d);
  // log-uniform scales; the extremes are pinned so that L and mu are exact
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < d; ++c) {
      targets(i, c) = normal(rng);
      scales(i, c) = std::pow(kappa, -unit(rng));
    }
  }
  scales(0, 0) = 1.0;
  scales(n - 1, d - 1) = 1.0 / kappa;
  return Oracle::quadratic(std::move(targets), std::move(scales));
}

}  // namespace decopt
