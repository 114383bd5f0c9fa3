#include "decopt/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <Eigen/Eigenvalues>

#include "decopt/error.hpp"

namespace decopt {

Spectrum::Spectrum(Eigen::VectorXd eigenvalues, Eigen::MatrixXd eigenvectors)
    : values_(std::move(eigenvalues)), vectors_(std::move(eigenvectors)) {
  if (values_.size() == 0 || vectors_.rows() != values_.size() ||
      vectors_.cols() != values_.size()) {
    throw InvalidArgument("spectrum dimensions are inconsistent");
  }
}

double Spectrum::zero_threshold(double zero_tol) const {
  return zero_tol * std::abs(lambda_max());
}

Spectrum Spectrum::mapped(const std::function<double(double)>& f) const {
  const int n = dim();
  Eigen::VectorXd raw(n);
  for (int k = 0; k < n; ++k) raw(k) = f(values_(k));
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return raw(a) < raw(b); });
  Eigen::VectorXd vals(n);
  Eigen::MatrixXd vecs(n, n);
  for (int k = 0; k < n; ++k) {
    vals(k) = raw(order[k]);
    vecs.col(k) = vectors_.col(order[k]);
  }
  return Spectrum(std::move(vals), std::move(vecs));
}

Eigen::MatrixXd Spectrum::reconstruct() const {
  return vectors_ * values_.asDiagonal() * vectors_.transpose();
}

Spectrum eigendecompose(const SymmetricMatrix& w) {
  if (w.dim() > kMaxEigenDim) {
    throw InvalidArgument("matrix dimension " + std::to_string(w.dim()) +
                          " exceeds eigensolver bound " + std::to_string(kMaxEigenDim));
  }
  if (!w.dense().allFinite()) throw InvalidArgument("matrix has non-finite entries");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(w.dense());
  if (solver.info() != Eigen::Success) {
    throw NumericalError("symmetric eigensolver did not converge");
  }
  return Spectrum(solver.eigenvalues(), solver.eigenvectors());
}

SpectralSummary spectral_summary(const Spectrum& s, double zero_tol) {
  const double thr = s.zero_threshold(zero_tol);
  SpectralSummary out;
  out.lambda_max = s.lambda_max();
  bool found = false;
  for (int k = 0; k < s.dim(); ++k) {
    const double v = s.eigenvalues()(k);
    if (v <= thr) {
      ++out.kernel_dim;
    } else if (!found) {
      out.lambda_min_plus = v;
      found = true;
    }
  }
  if (!found || !(out.lambda_max > 0.0)) {
    throw ValidationError("no positive eigenvalue above the zero threshold");
  }
  out.chi = out.lambda_max / out.lambda_min_plus;
  return out;
}

namespace {

// Rows of V^T y: row k holds the coefficients of y on eigenvector k, one
// column per coordinate block.
Eigen::MatrixXd eigen_coefficients(const Spectrum& s, const StackedState& y) {
  if (y.rows() != s.dim()) {
    throw InvalidArgument("state has " + std::to_string(y.rows()) + " rows, spectrum has " +
                          std::to_string(s.dim()));
  }
  return s.eigenvectors().transpose() * y;
}

}  // namespace

double kernel_component_norm(const Spectrum& s, const StackedState& y, double zero_tol) {
  const Eigen::MatrixXd c = eigen_coefficients(s, y);
  const double thr = s.zero_threshold(zero_tol);
  double sq = 0.0;
  for (int k = 0; k < s.dim(); ++k) {
    if (s.eigenvalues()(k) <= thr) sq += c.row(k).squaredNorm();
  }
  return std::sqrt(sq);
}

double pinv_quadratic_form(const Spectrum& s, const StackedState& y, double zero_tol,
                           double scale) {
  const Eigen::MatrixXd c = eigen_coefficients(s, y);
  const double thr = s.zero_threshold(zero_tol);
  double form = 0.0;
  double kernel_sq = 0.0;
  for (int k = 0; k < s.dim(); ++k) {
    const double lam = s.eigenvalues()(k);
    if (lam <= thr) {
      kernel_sq += c.row(k).squaredNorm();
    } else {
      form += c.row(k).squaredNorm() / lam;
    }
  }
  const double kernel = std::sqrt(kernel_sq);
  const double limit = 1e-6 * std::max(y.norm(), scale);
  if (kernel > limit || (kernel > 0.0 && limit == 0.0)) {
    throw ValidationError("vector has a kernel component of norm " + std::to_string(kernel) +
                          "; dual iterates must stay in range(W)");
  }
  return form;
}

StackedState apply_pinv(const Spectrum& s, const StackedState& y, double zero_tol) {
  Eigen::MatrixXd c = eigen_coefficients(s, y);
  const double thr = s.zero_threshold(zero_tol);
  for (int k = 0; k < s.dim(); ++k) {
    const double lam = s.eigenvalues()(k);
    if (lam <= thr) {
      c.row(k).setZero();
    } else {
      c.row(k) /= lam;
    }
  }
  return s.eigenvectors() * c;
}

}  // namespace decopt
