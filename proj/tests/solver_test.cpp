#include <gtest/gtest.h>

#include "decopt/error.hpp"
#include "decopt/solver.hpp"
#include "support/helpers.hpp"
#include "support/problems.hpp"

using namespace decopt;
using decopt::testing::max_variable_move;
using decopt::testing::quadratic_minimizer;
using decopt::testing::random_state;
using decopt::testing::state_at_reference;
using decopt::testing::state_norm;

namespace {

SpectralSummary summary_of(double lambda_max, double chi) {
  SpectralSummary s;
  s.lambda_max = lambda_max;
  s.lambda_min_plus = lambda_max / chi;
  s.chi = chi;
  s.kernel_dim = 1;
  return s;
}

StackedState column(std::initializer_list<double> v) {
  StackedState x(static_cast<Eigen::Index>(v.size()), 1);
  Eigen::Index i = 0;
  for (double e : v) x(i++, 0) = e;
  return x;
}

const Algorithm kAll[] = {Algorithm::papc, Algorithm::apapc, Algorithm::opapc,
                          Algorithm::loopless};

}  // namespace

TEST(Params, Apapc) {
  const auto p = derive_params(Algorithm::apapc, 1.0, 0.01, summary_of(4.0, 4.0));
  EXPECT_NEAR(p.tau, 0.1, 1e-15);
  EXPECT_NEAR(p.eta, 2.5, 1e-14);
  EXPECT_EQ(p.alpha, 0.01);
  EXPECT_NEAR(p.eta * p.theta * 4.0, 1.0, 1e-15);
}

TEST(Params, Opapc) {
  const auto p = derive_params(Algorithm::opapc, 1.0, 0.01, summary_of(4.0, 4.0));
  EXPECT_EQ(p.chebyshev.T, 2);
  EXPECT_NEAR(p.chebyshev.c1, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(p.tau, 0.0625, 1e-15);
  EXPECT_NEAR(p.theta * p.eta, 0.82, 1e-14);
  EXPECT_LE(p.eta * p.theta * p.chebyshev.lambda1, 1.0 + 1e-15);
}

TEST(Params, Loopless) {
  const auto p = derive_params(Algorithm::loopless, 1.0, 1.0, summary_of(2.0, 1.0));
  EXPECT_NEAR(p.eta, 0.5, 1e-15);
  EXPECT_NEAR(p.alpha, 0.5, 1e-15);
  EXPECT_NEAR(p.tau, 0.5, 1e-15);
  EXPECT_NEAR(p.sigma, 1.0 / 18.0, 1e-15);
  EXPECT_NEAR(p.nu, 3.0 / 80.0, 1e-15);
  EXPECT_NEAR(p.beta, 1.0 / 80.0, 1e-15);
  EXPECT_NEAR(p.theta, 3.6, 1e-14);
  EXPECT_NEAR(p.gamma, 1.0 / 40.0, 1e-15);
  EXPECT_NEAR(p.lambda, 2.25, 1e-14);
  EXPECT_GT(loopless_joint_denominator(p), 0.0);
}

TEST(Params, Papc) {
  const auto p = derive_params(Algorithm::papc, 2.0, 0.1, summary_of(5.0, 3.0));
  EXPECT_EQ(p.eta, 0.5);
  EXPECT_NEAR(p.theta, 0.4, 1e-15);
  EXPECT_EQ(p.alpha, 0.0);
  EXPECT_EQ(p.tau, 1.0);
}

TEST(Params, Rejects) {
  EXPECT_THROW(derive_params(Algorithm::apapc, 1.0, 0.0, summary_of(4, 4)), InvalidArgument);
  EXPECT_THROW(derive_params(Algorithm::apapc, 1.0, 2.0, summary_of(4, 4)), InvalidArgument);
  EXPECT_THROW(algorithm_from_string("sgd"), InvalidArgument);
  for (auto a : kAll) EXPECT_EQ(algorithm_from_string(to_string(a)), a);
}

TEST(Papc, HandUnrolledStep) {
  // two nodes, targets 0 and 2, eta = 1, theta = 1/2
  const auto w = laplacian(build_graph(TopologySpec::path(2)));
  Oracle o = Oracle::quadratic(column({0.0, 2.0}), 1.0);
  const auto p = derive_params(Algorithm::papc, 1.0, 1.0, spectral_summary(eigendecompose(w)));
  ASSERT_EQ(p.eta, 1.0);
  ASSERT_NEAR(p.theta, 0.5, 1e-15);
  CommCounter comm;
  StepContext ctx{o, w, comm};
  const SolverState next = papc_step(initial_state(StackedState::Zero(2, 1)), p, ctx);
  EXPECT_LT((next.y - column({-1.0, 1.0})).norm(), 1e-15);
  EXPECT_LT((next.x - column({1.0, 1.0})).norm(), 1e-15);
}

TEST(Apapc, HandUnrolledStep) {
  // tau = 1/2, eta = 1/2, theta = 1, alpha = 1
  const auto w = laplacian(build_graph(TopologySpec::path(2)));
  Oracle o = Oracle::quadratic(column({0.0, 2.0}), 1.0);
  const auto p = derive_params(Algorithm::apapc, 1.0, 1.0, spectral_summary(eigendecompose(w)));
  ASSERT_NEAR(p.tau, 0.5, 1e-15);
  ASSERT_NEAR(p.eta, 0.5, 1e-15);
  ASSERT_NEAR(p.theta, 1.0, 1e-15);
  CommCounter comm;
  StepContext ctx{o, w, comm};
  const SolverState next = apapc_step(initial_state(StackedState::Zero(2, 1)), p, ctx);
  EXPECT_LT((next.y - column({-2.0 / 3, 2.0 / 3})).norm(), 1e-14);
  EXPECT_LT((next.x - column({2.0 / 9, 4.0 / 9})).norm(), 1e-14);
  EXPECT_LT((next.x_f - column({4.0 / 27, 8.0 / 27})).norm(), 1e-14);
}

TEST(Steps, FixedPoint) {
  const auto w = laplacian(build_graph(TopologySpec::ring(6)));
  const auto sum = spectral_summary(eigendecompose(w));
  Oracle o = heterogeneous_quadratic(6, 3, 30.0, 4);
  const ReferencePoint ref = reference_from_minimizer(o, quadratic_minimizer(o));
  for (auto a : kAll) {
    const auto p = derive_params(a, o.L(), o.mu(), sum);
    const SolverState st = state_at_reference(ref, a);
    CommCounter comm;
    StepContext ctx{o, w, comm};
    const SolverState next = step(st, p, ctx);
    EXPECT_LE(max_variable_move(st, next), 1e-12 * (1 + state_norm(st))) << to_string(a);
  }
}

TEST(Steps, Counters) {
  const auto w = laplacian(build_graph(TopologySpec::grid(3, 3)));
  const auto sum = spectral_summary(eigendecompose(w));
  for (auto a : kAll) {
    Oracle o = heterogeneous_quadratic(9, 2, 10.0, 1);
    const auto p = derive_params(a, o.L(), o.mu(), sum);
    CommCounter comm;
    StepContext ctx{o, w, comm};
    SolverState st = initial_state(StackedState::Zero(9, 2));
    const int per = a == Algorithm::opapc ? p.chebyshev.T : 1;
    for (int k = 1; k <= 7; ++k) {
      st = step(st, p, ctx);
      EXPECT_EQ(st.k, k);
      EXPECT_EQ(o.grad_count(), k);
      EXPECT_EQ(comm.rounds(), k * per) << to_string(a);
    }
  }
}

TEST(Loopless, ImplicitResidual) {
  const auto w = laplacian(build_graph(TopologySpec::ring(5)));
  const auto sum = spectral_summary(eigendecompose(w));
  Oracle o = heterogeneous_quadratic(5, 2, 20.0, 9);
  const auto p = derive_params(Algorithm::loopless, o.L(), o.mu(), sum);
  CommCounter comm;
  StepContext ctx{o, w, comm};
  SolverState st = initial_state(random_state(5, 2, 1));
  for (int k = 0; k < 200; ++k) {
    const SolverState next = loopless_step(st, p, ctx);
    const double res = decopt::testing::loopless_implicit_residual(st, next, p, o);
    EXPECT_LE(res, 1e-12 * (1 + state_norm(next))) << "step " << k;
    st = next;
  }
}

TEST(Loopless, DualStaysInRange) {
  const auto w = laplacian(build_graph(TopologySpec::path(6)));
  const Spectrum s = eigendecompose(w);
  Oracle o = heterogeneous_quadratic(6, 2, 5.0, 2);
  const auto p = derive_params(Algorithm::loopless, o.L(), o.mu(), spectral_summary(s));
  CommCounter comm;
  StepContext ctx{o, w, comm};
  SolverState st = initial_state(StackedState::Zero(6, 2));
  for (int k = 0; k < 50; ++k) st = loopless_step(st, p, ctx);
  EXPECT_LE(kernel_component_norm(s, st.z), 1e-12 * (1 + st.z.norm()));
}

TEST(Opapc, DegenerateMatchesApapcOnRescaledMatrix) {
  const auto w = laplacian(build_graph(TopologySpec::ring(6)));
  const auto sum = spectral_summary(eigendecompose(w));
  const SymmetricMatrix scaled(w.dense() / sum.lambda_max);
  const auto scaled_sum = spectral_summary(eigendecompose(scaled));

  Oracle oa = heterogeneous_quadratic(6, 2, 40.0, 3);
  Oracle ob = oa.fresh();
  SolverParams pa = derive_params(Algorithm::apapc, oa.L(), oa.mu(), scaled_sum);
  SolverParams pb = pa;
  pb.algorithm = Algorithm::opapc;
  pb.chebyshev = ChebyshevParams{};
  pb.chebyshev.degenerate = true;
  pb.chebyshev.T = 1;
  pb.chebyshev.c3 = 1.0 / sum.lambda_max;

  CommCounter ca, cb;
  StepContext xa{oa, scaled, ca}, xb{ob, w, cb};
  SolverState a = initial_state(random_state(6, 2, 8));
  SolverState b = a;
  for (int k = 0; k < 100; ++k) {
    a = apapc_step(a, pa, xa);
    b = opapc_step(b, pb, xb);
    ASSERT_LE(max_variable_move(a, b), 1e-12 * (1 + state_norm(a))) << "step " << k;
  }
  EXPECT_EQ(ca.rounds(), cb.rounds());
}
