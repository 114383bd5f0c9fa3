#include <gtest/gtest.h>

#include "decopt/error.hpp"
#include "decopt/spectral.hpp"
#include "support/helpers.hpp"

using namespace decopt;
using decopt::testing::centered;
using decopt::testing::cycle_eigenvalues;
using decopt::testing::path_eigenvalues;
using decopt::testing::random_state;

namespace {

Spectrum of(const TopologySpec& spec) { return eigendecompose(laplacian(build_graph(spec))); }

SymmetricMatrix two_node() {
  Eigen::MatrixXd m(2, 2);
  m << 1, -1, -1, 1;
  return SymmetricMatrix(m);
}

}  // namespace

TEST(Eigendecompose, TwoNode) {
  const Spectrum s = eigendecompose(two_node());
  EXPECT_NEAR(s.eigenvalues()(0), 0.0, 1e-15);
  EXPECT_NEAR(s.eigenvalues()(1), 2.0, 1e-15);
}

TEST(Eigendecompose, Identity) {
  const Spectrum s = eigendecompose(SymmetricMatrix(Eigen::MatrixXd::Identity(3, 3)));
  for (int k = 0; k < 3; ++k) EXPECT_DOUBLE_EQ(s.eigenvalues()(k), 1.0);
}

TEST(Eigendecompose, CycleAndPathClosedForms) {
  for (int n : {4, 7, 12}) {
    const Spectrum ring = of(TopologySpec::ring(n));
    const Spectrum path = of(TopologySpec::path(n));
    const auto rc = cycle_eigenvalues(n);
    const auto pc = path_eigenvalues(n);
    for (int k = 0; k < n; ++k) {
      EXPECT_NEAR(ring.eigenvalues()(k), rc[k], 1e-12);
      EXPECT_NEAR(path.eigenvalues()(k), pc[k], 1e-12);
    }
  }
}

TEST(Eigendecompose, ReconstructsAndIsOrthonormal) {
  const auto w = laplacian(build_graph(TopologySpec::erdos_renyi(25, 4.0, 5)));
  const Spectrum s = eigendecompose(w);
  EXPECT_LT((s.reconstruct() - w.dense()).norm(), 1e-10);
  const Eigen::MatrixXd v = s.eigenvectors();
  EXPECT_LT((v.transpose() * v - Eigen::MatrixXd::Identity(25, 25)).norm(), 1e-10);
  for (int k = 1; k < s.dim(); ++k) EXPECT_LE(s.eigenvalues()(k - 1), s.eigenvalues()(k));
}

TEST(Eigendecompose, Deterministic) {
  const auto w = laplacian(build_graph(TopologySpec::grid(4, 4)));
  const Spectrum a = eigendecompose(w);
  const Spectrum b = eigendecompose(w);
  EXPECT_EQ(a.eigenvalues(), b.eigenvalues());
  EXPECT_EQ(a.eigenvectors(), b.eigenvectors());
}

TEST(Eigendecompose, RejectsNonFinite) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(2, 2);
  m(0, 0) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(eigendecompose(SymmetricMatrix::from_unchecked(m)), InvalidArgument);
}

TEST(Summary, Ring4) {
  const auto s = spectral_summary(of(TopologySpec::ring(4)));
  EXPECT_NEAR(s.lambda_max, 4.0, 1e-12);
  EXPECT_NEAR(s.lambda_min_plus, 2.0, 1e-12);
  EXPECT_NEAR(s.chi, 2.0, 1e-12);
  EXPECT_EQ(s.kernel_dim, 1);
}

TEST(Summary, Complete3) {
  const auto s = spectral_summary(of(TopologySpec::complete(3)));
  EXPECT_NEAR(s.lambda_max, 3.0, 1e-12);
  EXPECT_NEAR(s.lambda_min_plus, 3.0, 1e-12);
  EXPECT_NEAR(s.chi, 1.0, 1e-12);
}

TEST(Summary, TinyEigenvalueCountsAsZero) {
  Eigen::VectorXd vals(3);
  vals << 0.0, 1e-14, 4.0;
  const Spectrum s(vals, Eigen::MatrixXd::Identity(3, 3));
  const auto sum = spectral_summary(s, 1e-9);
  EXPECT_EQ(sum.kernel_dim, 2);
  EXPECT_EQ(sum.lambda_min_plus, 4.0);
}

TEST(Summary, ChiScaleInvariant) {
  const auto w = laplacian(build_graph(TopologySpec::grid(3, 5))).dense();
  const double base = spectral_summary(eigendecompose(SymmetricMatrix(w))).chi;
  for (double c : {1e-3, 0.5, 7.0, 1e4}) {
    const double chi = spectral_summary(eigendecompose(SymmetricMatrix(c * w))).chi;
    EXPECT_NEAR(chi, base, 1e-10 * base);
  }
}

TEST(Summary, AllZeroRejected) {
  const Spectrum s(Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Identity(2, 2));
  EXPECT_THROW(spectral_summary(s), ValidationError);
}

TEST(Pinv, TwoNodeExample) {
  const Spectrum s = eigendecompose(two_node());
  StackedState y(2, 1);
  y << 1, -1;
  EXPECT_NEAR(pinv_quadratic_form(s, y), 1.0, 1e-14);
  EXPECT_EQ(pinv_quadratic_form(s, StackedState::Zero(2, 1)), 0.0);
}

TEST(Pinv, ConsensusVectorRejected) {
  const Spectrum s = of(TopologySpec::ring(5));
  EXPECT_THROW(pinv_quadratic_form(s, StackedState::Constant(5, 2, 1.5)), ValidationError);
}

TEST(Pinv, ScaleToleratesSmallDifferences) {
  const Spectrum s = eigendecompose(two_node());
  StackedState y(2, 1);
  y << 1e-9, 1e-9;  // pure kernel, but tiny relative to the stated scale
  EXPECT_NO_THROW(pinv_quadratic_form(s, y, kDefaultZeroTol, 1e4));
  EXPECT_THROW(pinv_quadratic_form(s, y, kDefaultZeroTol, 0.0), ValidationError);
}

TEST(Pinv, BoundsAndInverse) {
  const auto w = laplacian(build_graph(TopologySpec::erdos_renyi(20, 4.0, 11)));
  const Spectrum s = eigendecompose(w);
  const auto sum = spectral_summary(s);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const StackedState y = centered(random_state(20, 3, seed));
    const double form = pinv_quadratic_form(s, y);
    EXPECT_GE(form, y.squaredNorm() / sum.lambda_max * (1 - 1e-12));
    EXPECT_LE(form, y.squaredNorm() / sum.lambda_min_plus * (1 + 1e-12));
    const StackedState back = w.dense() * apply_pinv(s, y);
    EXPECT_LT((back - y).norm(), 1e-8 * y.norm());
    EXPECT_LT(kernel_component_norm(s, y), 1e-12);
  }
}

TEST(Spectrum, MappedResorts) {
  const Spectrum s = of(TopologySpec::path(5));
  const Spectrum m = s.mapped([](double l) { return -l; });
  for (int k = 0; k < 5; ++k) EXPECT_DOUBLE_EQ(m.eigenvalues()(k), -s.eigenvalues()(4 - k));
  EXPECT_LT((m.reconstruct() + s.reconstruct()).norm(), 1e-10);
}
