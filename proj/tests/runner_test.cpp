#include <gtest/gtest.h>

#include "decopt/error.hpp"
#include "decopt/runner.hpp"
#include "support/helpers.hpp"
#include "support/problems.hpp"

using namespace decopt;

namespace {

struct Setup {
  SymmetricMatrix w;
  Spectrum spectrum;
  SpectralSummary summary;
  Oracle oracle;
  ReferencePoint ref;
};

Setup make(const TopologySpec& spec, Oracle o) {
  SymmetricMatrix w = laplacian(build_graph(spec));
  Spectrum s = eigendecompose(w);
  const auto sum = spectral_summary(s);
  ReferencePoint ref = reference_from_minimizer(o, decopt::testing::quadratic_minimizer(o));
  return {std::move(w), std::move(s), sum, std::move(o), std::move(ref)};
}

}  // namespace

TEST(Run, ZeroIterations) {
  auto su = make(TopologySpec::ring(4), heterogeneous_quadratic(4, 2, 10.0, 1));
  const auto p = derive_params(Algorithm::apapc, su.oracle.L(), su.oracle.mu(), su.summary);
  RunOptions opts;
  opts.max_iters = 0;
  const auto res = run(p, su.oracle, su.w, su.spectrum, StackedState::Zero(4, 2), su.ref, opts);
  ASSERT_EQ(res.trace.records.size(), 1u);
  EXPECT_EQ(res.trace.records[0].iter, 0);
  EXPECT_EQ(res.trace.records[0].grad_evals, 0);
  EXPECT_EQ(res.trace.status, RunStatus::max_iters);
  EXPECT_EQ(res.trace.algorithm, "apapc");
}

TEST(Run, TwoNodeApapcReachesMean) {
  StackedState b(2, 1);
  b << -1.0, 5.0;
  auto su = make(TopologySpec::path(2), Oracle::quadratic(b, 1.0));
  const auto p = derive_params(Algorithm::apapc, 1.0, 1.0, su.summary);
  RunOptions opts;
  opts.eps = 1e-12;
  opts.max_iters = 10000;
  const auto res = run(p, su.oracle, su.w, su.spectrum, StackedState::Zero(2, 1), su.ref, opts);
  EXPECT_EQ(res.trace.status, RunStatus::converged);
  EXPECT_NEAR(res.final_state.x(0, 0), 2.0, 1e-6);
  EXPECT_NEAR(res.final_state.x(1, 0), 2.0, 1e-6);
}

TEST(Run, CountersIncreaseAndSubsample) {
  auto su = make(TopologySpec::grid(3, 3), heterogeneous_quadratic(9, 2, 30.0, 2));
  for (auto a : {Algorithm::papc, Algorithm::apapc, Algorithm::opapc, Algorithm::loopless}) {
    Oracle o = su.oracle.fresh();
    const auto p = derive_params(a, o.L(), o.mu(), su.summary);
    RunOptions opts;
    opts.max_iters = 53;
    opts.record_every = 10;
    opts.eps = 1e-30;
    opts.lyapunov = true;
    const auto res = run(p, o, su.w, su.spectrum, StackedState::Zero(9, 2), su.ref, opts);
    const auto& r = res.trace.records;
    ASSERT_EQ(r.size(), 7u) << to_string(a);  // 0, 10, ..., 50, 53
    EXPECT_EQ(r.back().iter, 53);
    for (std::size_t i = 1; i < r.size(); ++i) {
      EXPECT_GT(r[i].iter, r[i - 1].iter);
      EXPECT_GT(r[i].grad_evals, r[i - 1].grad_evals);
      EXPECT_GT(r[i].comm_rounds, r[i - 1].comm_rounds);
    }
    EXPECT_EQ(r.back().grad_evals, 53);
    EXPECT_EQ(r.back().lyapunov.has_value(), a != Algorithm::papc);
  }
}

TEST(Run, DivergenceStopsAtLastFiniteRecord) {
  auto su = make(TopologySpec::ring(6), heterogeneous_quadratic(6, 1, 2.0, 3));
  auto p = derive_params(Algorithm::papc, su.oracle.L(), su.oracle.mu(), su.summary);
  p.eta = 50.0;  // far past 2/L
  RunOptions opts;
  opts.max_iters = 100000;
  opts.record_every = 1000;
  const auto res = run(p, su.oracle, su.w, su.spectrum, StackedState::Ones(6, 1), su.ref, opts);
  EXPECT_EQ(res.trace.status, RunStatus::diverged);
  for (const auto& r : res.trace.records) EXPECT_TRUE(std::isfinite(r.sq_dist));
  EXPECT_EQ(res.trace.records.back().iter, res.final_state.k);
  EXPECT_TRUE(res.final_state.x.allFinite());
}

TEST(Run, RejectsBadOptions) {
  auto su = make(TopologySpec::ring(4), heterogeneous_quadratic(4, 1, 2.0, 1));
  const auto p = derive_params(Algorithm::papc, su.oracle.L(), su.oracle.mu(), su.summary);
  RunOptions opts;
  opts.record_every = 0;
  EXPECT_THROW(run(p, su.oracle, su.w, su.spectrum, StackedState::Zero(4, 1), su.ref, opts),
               InvalidArgument);
}
