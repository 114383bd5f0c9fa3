#pragma once

#include <functional>

#include <Eigen/Dense>

#include "decopt/stacked.hpp"
#include "decopt/topology.hpp"

namespace decopt {

/// Full eigendecomposition of a symmetric matrix, eigenvalues ascending.
class Spectrum {
 public:
  Spectrum(Eigen::VectorXd eigenvalues, Eigen::MatrixXd eigenvectors);

  int dim() const { return static_cast<int>(values_.size()); }
  const Eigen::VectorXd& eigenvalues() const { return values_; }
  const Eigen::MatrixXd& eigenvectors() const { return vectors_; }
  double lambda_max() const { return values_(values_.size() - 1); }

  /// Threshold below which an eigenvalue is treated as zero.
  double zero_threshold(double zero_tol) const;

  /// Same eigenvectors, eigenvalues mapped through `f`. Used for matrix
  /// polynomials such as the Chebyshev gossip operator. Result is re-sorted.
  Spectrum mapped(const std::function<double(double)>& f) const;

  /// V diag(lambda) V^T.
  Eigen::MatrixXd reconstruct() const;

 private:
  Eigen::VectorXd values_;
  Eigen::MatrixXd vectors_;
};

inline constexpr int kMaxEigenDim = 2000;

/// Throws InvalidArgument on non-finite entries or dim > kMaxEigenDim.
Spectrum eigendecompose(const SymmetricMatrix& w);

struct SpectralSummary {
  double lambda_max = 0.0;
  double lambda_min_plus = 0.0;
  double chi = 1.0;
  int kernel_dim = 0;
};

/// Throws ValidationError when every eigenvalue is classified as zero.
SpectralSummary spectral_summary(const Spectrum& s, double zero_tol = kDefaultZeroTol);

/// Norm of the blockwise projection of `y` onto the zero-classified eigenvectors.
double kernel_component_norm(const Spectrum& s, const StackedState& y,
                             double zero_tol = kDefaultZeroTol);

/// <W^+ y, y>, evaluated in the eigenbasis one coordinate column at a time.
///
/// `y` must lie in range(W): its kernel component may not exceed
/// 1e-6 * max(||y||, scale). `scale` lets callers evaluating a difference
/// y = a - b pass the magnitude of the operands, so roundoff that survives the
/// subtraction is not mistaken for drift. Throws ValidationError otherwise.
double pinv_quadratic_form(const Spectrum& s, const StackedState& y,
                           double zero_tol = kDefaultZeroTol, double scale = 0.0);

/// W^+ y (kernel component discarded).
StackedState apply_pinv(const Spectrum& s, const StackedState& y,
                        double zero_tol = kDefaultZeroTol);

}  // namespace decopt
