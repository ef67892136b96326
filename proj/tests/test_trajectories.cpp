// Copyright 2026 The zeno-nh Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/poisson.hpp>
#include <cmath>

#include "test_support.hpp"
#include "zeno/errors.hpp"
#include "zeno/rng.hpp"
#include "zeno/steady_state.hpp"
#include "zeno/trajectories.hpp"

namespace zeno {
namespace {

using testing::lattice;

struct Pair {
  FockBasis basis;
  SparseOperator H0, c;
  MeasurementConfig meas;
  Pair(int n, double J, double gamma, double n0 = 1.0)
      : basis(build_basis(lattice(2, n, Boundary::open))),
        H0(build_hamiltonian({J, 0.0, lattice(2, n, Boundary::open)}, basis)),
        meas(measurement_for_gamma(gamma, {1.0, 0.0}, n0)) {
    c = build_jump_operator(meas, basis);
  }
};

TEST(Rng, SplitRuleAndRange) {
  EXPECT_EQ(derive_seed(42, 7), splitmix64(42 ^ 7));
  Xoshiro256 a(5), b(5);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a(), b());
  Xoshiro256 u(1);
  for (int i = 0; i < 100000; ++i) {
    const double v = u.uniform();
    ASSERT_GT(v, 0.0);
    ASSERT_LT(v, 1.0);
  }
  EXPECT_NE(Xoshiro256(5)(), Xoshiro256(6)());
}

TEST(Trajectory, NoMeasurementIsUnitaryRabi) {
  Pair s(1, 1.0, 1.0);
  const SparseOperator zero = s.c * cplx(0.0);
  TrajectoryOptions opt;
  opt.t_final = 10.0;
  opt.dt = 1e-3;
  opt.sample_points = 100;
  const auto res = run_trajectory(QuantumState::fock(s.basis, Occupation{1, 0}), s.H0, zero, opt, 3);
  EXPECT_EQ(res.record.count(), 0u);
  const Index i10 = s.basis.index_of(Occupation{1, 0});
  for (std::size_t k = 0; k < res.times.size(); ++k) {
    EXPECT_NEAR(std::norm(res.states[k][i10]), std::pow(std::cos(res.times[k]), 2), 1e-8);
    EXPECT_NEAR(res.states[k].squaredNorm(), 1.0, 1e-12);
  }
}

TEST(Trajectory, NormConservedWithoutJumpsOverLongRun) {
  // Eigenstate of D with c0 = 0: no decay at all, norm must stay 1 unrenormalized.
  Pair s(2, 1.0, 10.0, 0.0);
  const SparseOperator zero = s.c * cplx(0.0);
  JumpPropagator prop(s.H0, zero);
  CVector psi = QuantumState::fock(s.basis, Occupation{2, 0}).amplitudes;
  for (int i = 0; i < 10000; ++i) prop.step(psi, 1e-3);
  EXPECT_NEAR(psi.squaredNorm(), 1.0, 1e-8);
}

TEST(Trajectory, JumpTimesMatchExactWaitingTimes) {
  // J = 0 and a D eigenstate: the squared norm is exactly exp(-rate t), so
  // each waiting time is -ln(r) / rate for the generator's successive draws.
  Pair s(1, 0.0, 3.0);
  const double rate = 2.0 * 3.0;
  TrajectoryOptions opt;
  opt.t_final = 20.0;
  opt.dt = 0.05 / 3.0;
  opt.sample_points = 10;
  const std::uint64_t seed = 99;
  const auto res = run_trajectory(QuantumState::fock(s.basis, Occupation{1, 0}), s.H0, s.c, opt, seed);
  Xoshiro256 rng(seed);
  double t = 0.0;
  std::size_t k = 0;
  while (true) {
    t -= std::log(rng.uniform()) / rate;
    if (t > opt.t_final) break;
    ASSERT_LT(k, res.record.count());
    EXPECT_NEAR(res.record.jump_times[k], t, 1e-6 * opt.dt + 1e-12 * t) << k;
    ++k;
  }
  EXPECT_EQ(k, res.record.count());
}

TEST(Trajectory, RecordsAreStrictlyIncreasingAndSamplesNormalized) {
  testing::ThreeSite s;
  TrajectoryOptions opt;
  opt.t_final = 2.0;
  opt.dt = 5e-4;
  opt.sample_points = 40;
  const auto res = run_trajectory(QuantumState::fock(s.basis, Occupation{2, 1, 0}), s.H0, s.c, opt, 17);
  ASSERT_GT(res.record.count(), 10u);
  for (std::size_t i = 1; i < res.record.count(); ++i) {
    EXPECT_LT(res.record.jump_times[i - 1], res.record.jump_times[i]);
  }
  EXPECT_LE(res.record.jump_times.back(), opt.t_final);
  ASSERT_EQ(res.times.size(), 41u);
  for (std::size_t k = 0; k < res.times.size(); ++k) {
    EXPECT_DOUBLE_EQ(res.times[k], opt.t_final * static_cast<double>(k) / 40.0);
    EXPECT_NEAR(res.states[k].squaredNorm(), 1.0, 1e-12);
  }
}

TEST(Trajectory, RejectsUnnormalizedStateAndLargeStep) {
  testing::ThreeSite s;
  TrajectoryOptions opt;
  opt.t_final = 1.0;
  opt.dt = 5e-4;
  QuantumState bad = QuantumState::fock(s.basis, Occupation{2, 1, 0});
  bad.amplitudes *= 2.0;
  EXPECT_THROW(run_trajectory(bad, s.H0, s.c, opt, 1), ContractViolation);
  opt.dt = 10.0;
  EXPECT_THROW(run_trajectory(QuantumState::fock(s.basis, Occupation{2, 1, 0}), s.H0, s.c, opt, 1),
               ContractViolation);
}

TEST(Trajectory, PoissonCountsForFrozenEigenstate) {
  // Rate |c0|^2 = 2 gamma; 1000 trajectories over t = 5.
  Pair s(1, 0.0, 1.0);
  EnsembleOptions opt;
  opt.trajectory.t_final = 5.0;
  opt.trajectory.dt = 0.01;
  opt.trajectory.sample_points = 1;
  opt.trajectory.store_states = false;
  opt.n_traj = 1000;
  opt.base_seed = 2024;
  const auto sum = run_ensemble(QuantumState::fock(s.basis, Occupation{1, 0}), s.H0, s.c, opt);
  const double mean = 2.0 * 5.0;
  std::vector<double> counts;
  double m1 = 0, m2 = 0;
  for (const auto& r : sum.records) {
    counts.push_back(static_cast<double>(r.count()));
    m1 += counts.back();
    m2 += counts.back() * counts.back();
  }
  const double n = static_cast<double>(counts.size());
  m1 /= n;
  const double var = m2 / n - m1 * m1;
  EXPECT_NEAR(m1, mean, 3.0 * std::sqrt(mean / n));
  // Sample variance of a Poisson variable has standard error ~ sqrt((mu + 2 mu^2) / n).
  EXPECT_NEAR(var, mean, 3.0 * std::sqrt((mean + 2.0 * mean * mean) / n));

  // Chi-squared goodness of fit on bins [0..5], 6, ..., 14, [15..).
  boost::math::poisson_distribution<double> pois(mean);
  std::vector<double> edges{0, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15};
  double chi2 = 0.0;
  for (std::size_t b = 0; b + 1 <= edges.size(); ++b) {
    const double lo = edges[b];
    const double hi = b + 1 < edges.size() ? edges[b + 1] : INFINITY;
    const double p = (std::isinf(hi) ? 1.0 : boost::math::cdf(pois, hi - 1)) -
                     (lo == 0 ? 0.0 : boost::math::cdf(pois, lo - 1));
    double obs = 0;
    for (double c : counts) obs += (c >= lo && c < hi) ? 1.0 : 0.0;
    chi2 += (obs - n * p) * (obs - n * p) / (n * p);
  }
  boost::math::chi_squared_distribution<double> dist(static_cast<double>(edges.size() - 1));
  EXPECT_LT(chi2, boost::math::quantile(dist, 0.99));
}

TEST(Ensemble, SingleMemberEqualsRunTrajectory) {
  testing::ThreeSite s;
  EnsembleOptions opt;
  opt.trajectory.t_final = 1.0;
  opt.trajectory.dt = 5e-4;
  opt.trajectory.sample_points = 10;
  opt.n_traj = 1;
  opt.base_seed = 77;
  opt.partition = s.partition;
  const auto psi0 = QuantumState::fock(s.basis, Occupation{2, 1, 0});
  const auto sum = run_ensemble(psi0, s.H0, s.c, opt);
  const auto one = run_trajectory(psi0, s.H0, s.c, opt.trajectory, derive_seed(77, 0));
  EXPECT_EQ(sum.records[0].jump_times, one.record.jump_times);
  for (std::size_t k = 0; k < one.times.size(); ++k) {
    for (Index i = 0; i < s.basis.size(); ++i) {
      EXPECT_EQ(sum.fock_populations[k][static_cast<std::size_t>(i)], std::norm(one.states[k][i]));
    }
  }
}

TEST(Ensemble, DeterministicAcrossRunsAndThreadCounts) {
  testing::ThreeSite s;
  EnsembleOptions opt;
  opt.trajectory.t_final = 1.0;
  opt.trajectory.dt = 5e-4;
  opt.trajectory.sample_points = 5;
  opt.n_traj = 40;
  opt.base_seed = 5;
  opt.partition = s.partition;
  const auto psi0 = QuantumState::fock(s.basis, Occupation{2, 1, 0});
  const auto a = run_ensemble(psi0, s.H0, s.c, opt);
  opt.threads = 3;
  const auto b = run_ensemble(psi0, s.H0, s.c, opt);
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) EXPECT_EQ(a.records[i].jump_times, b.records[i].jump_times);
  EXPECT_EQ(a.fock_populations, b.fock_populations);
  EXPECT_EQ(a.subspace_populations, b.subspace_populations);
  for (std::size_t k = 0; k < a.density_matrices.size(); ++k) {
    EXPECT_EQ(testing::max_abs(a.density_matrices[k] - b.density_matrices[k]), 0.0);
  }
}

TEST(Ensemble, MonteCarloErrorShrinksWithSampleSize) {
  // Mean squared deviation from the Lindblad solution over independent
  // batches should scale as 1/n: quadrupling n cuts it by ~4.
  Pair s(2, 1.0, 10.0);
  auto part = std::make_shared<SubspacePartition>(enumerate_zeno_subspaces(s.meas, s.basis));
  const auto psi0 = QuantumState::fock(s.basis, Occupation{1, 1});
  const auto exact = integrate_lindblad(BlockDensityMatrix::pure(part, psi0.amplitudes), s.H0, s.c,
                                        {1.0, 0.005, 1, std::nullopt})
                         .states.back()
                         .to_dense();
  auto msd = [&](int n) {
    double acc = 0.0;
    const int batches = 8;
    for (int b = 0; b < batches; ++b) {
      EnsembleOptions opt;
      opt.trajectory.t_final = 1.0;
      opt.trajectory.dt = 0.005;
      opt.trajectory.sample_points = 1;
      opt.n_traj = n;
      opt.base_seed = 1000 + static_cast<std::uint64_t>(b) * 7919 + static_cast<std::uint64_t>(n);
      opt.keep_records = false;
      const CMatrix avg = run_ensemble(psi0, s.H0, s.c, opt).density_matrices.back();
      acc += (avg - exact).squaredNorm();
    }
    return acc / batches;
  };
  const double ratio = msd(50) / msd(200);
  EXPECT_GT(ratio, 2.0);
  EXPECT_LT(ratio, 8.0);
}

TEST(Observables, UniformFockState) {
  const FockBasis b = build_basis(lattice(8, 8));
  const auto meas = measurement_for_gamma(100.0, pattern_weights(Pattern::even_sites, 8), 4.0);
  const CVector psi = QuantumState::fock(b, Occupation(8, 1)).amplitudes;
  for (double n : momentum_distribution(psi, b)) EXPECT_NEAR(n, 1.0, 1e-12);
  EXPECT_NEAR(local_density_variance(psi, b), 0.0, 1e-14);
  EXPECT_NEAR(measurement_fluctuation(psi, build_measurement_operator(meas, b)), 0.0, 1e-12);
}

TEST(Observables, DarkStateHasNoFluctuationAndEmptyZeroMode) {
  const SteadyStateSpec spec = SteadyStateSpec::uniform(lattice(8, 4), 0);
  const QuantumState psi = build_steady_state(spec);
  const FockBasis b = build_basis(spec.lattice);
  const auto meas = measurement_for_gamma(100.0, pattern_weights(Pattern::even_sites, 8), 2.0);
  const auto series = observables_series({0.0}, {psi.amplitudes}, b, meas);
  EXPECT_NEAR(series.fluct_c[0], 0.0, 1e-10);
  const auto& labels = series.momentum_labels;
  const auto zero = std::find(labels.begin(), labels.end(), 0) - labels.begin();
  EXPECT_NEAR(series.momentum_distribution[0][static_cast<std::size_t>(zero)], 0.0, 1e-12);
}

TEST(Observables, FluctuationScaledToJumpUnits) {
  testing::ThreeSite s;
  CVector psi = CVector::Zero(10);
  psi[s.basis.index_of(Occupation{2, 1, 0})] = 1.0 / std::sqrt(2.0);
  psi[s.basis.index_of(Occupation{1, 2, 0})] = 1.0 / std::sqrt(2.0);
  const auto series = observables_series({0.0}, {psi}, s.basis, s.meas);
  EXPECT_NEAR(series.fluct_d[0], 0.25, 1e-14);
  EXPECT_NEAR(series.fluct_c[0], 2.0 * s.gamma * 0.25, 1e-12);
  EXPECT_TRUE(series.momentum_labels.empty());
}

}  // namespace
}  // namespace zeno
