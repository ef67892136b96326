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

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "test_support.hpp"
#include "zeno/errors.hpp"
#include "zeno/master_eq.hpp"
#include "zeno/steady_state.hpp"

namespace zeno {
namespace {

using testing::lattice;

struct TwoSite {
  FockBasis basis;
  BhmParams params;
  MeasurementConfig meas;
  SparseOperator H0, c;
  std::shared_ptr<const SubspacePartition> partition;

  TwoSite(double J, double gamma)
      : basis(build_basis(lattice(2, 1, Boundary::open))),
        params{J, 0.0, lattice(2, 1, Boundary::open)},
        meas(measurement_for_gamma(gamma, {1.0, 0.0}, 1.0)),
        H0(build_hamiltonian(params, basis)),
        c(build_jump_operator(meas, basis)),
        partition(std::make_shared<SubspacePartition>(enumerate_zeno_subspaces(meas, basis))) {}
};

CMatrix random_density(Index d, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  CMatrix a(d, d);
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) a(i, j) = cplx(g(rng), g(rng));
  }
  CMatrix rho = a * a.adjoint();
  return rho / rho.trace();
}

TEST(BlockDensityMatrix, DenseRoundTripAndInvariants) {
  testing::ThreeSite s;
  const CMatrix rho = random_density(s.basis.size(), 3);
  const auto b = BlockDensityMatrix::from_dense(s.partition, rho);
  EXPECT_LT(testing::max_abs(b.to_dense() - rho), 1e-15);
  EXPECT_NEAR(b.trace().real(), 1.0, 1e-12);
  EXPECT_LT(b.hermiticity_defect(), 1e-14);
  EXPECT_GT(b.min_eigenvalue(), -1e-12);
  for (std::size_t m = 0; m < b.count(); ++m) {
    EXPECT_EQ(b.block(m, m).rows(), (*s.partition)[m].size());
  }
}

TEST(LindbladRhs, BlockFormMatchesUnblocked) {
  for (unsigned seed : {1u, 2u, 3u}) {
    testing::ThreeSite s(30.0, 1.0 + seed);
    LindbladGenerator gen(s.H0, s.c, s.partition);
    const auto rho = BlockDensityMatrix::from_dense(s.partition, random_density(s.basis.size(), seed));
    BlockDensityMatrix diff = gen.rhs(rho);
    diff.axpy(-1.0, gen.rhs_unblocked(rho));
    EXPECT_LT(diff.max_abs(), 1e-12);
  }
  // Complex scattering coefficient and complex pattern.
  const FockBasis b = build_basis(lattice(3, 2));
  MeasurementConfig m;
  m.kappa = 3.0;
  m.C = cplx(0.6, -0.8);
  m.pattern = {cplx(1.0, 0.5), 0.0, cplx(0.0, 2.0)};
  auto part = std::make_shared<SubspacePartition>(enumerate_zeno_subspaces(m, b));
  LindbladGenerator gen(build_hamiltonian({1.0, 0.4, b.config()}, b), build_jump_operator(m, b), part);
  const auto rho = BlockDensityMatrix::from_dense(part, random_density(b.size(), 9));
  BlockDensityMatrix diff = gen.rhs(rho);
  diff.axpy(-1.0, gen.rhs_unblocked(rho));
  EXPECT_LT(diff.max_abs(), 1e-12);
}

TEST(LindbladRhs, DiagonalBlocksCarryNoDissipation) {
  testing::ThreeSite s;
  LindbladGenerator gen(s.H0, s.c, s.partition);
  for (std::size_t m = 0; m < s.partition->count(); ++m) {
    EXPECT_EQ(gen.dissipative_coefficient(m, m), cplx(0.0));
    for (std::size_t n = 0; n < s.partition->count(); ++n) {
      const double dc = std::abs(gen.jump_eigenvalues()[m] - gen.jump_eigenvalues()[n]);
      EXPECT_NEAR(gen.dissipative_coefficient(m, n).real(), -0.5 * dc * dc, 1e-9);
    }
  }
}

TEST(LindbladRhs, CommutingBlockDiagonalStateIsStationary) {
  // Dark state: an H0 eigenstate (T psi = 0) inside one D eigenspace.
  const SteadyStateSpec spec = SteadyStateSpec::uniform(lattice(4, 2), 0);
  const QuantumState psi = build_steady_state(spec);
  const FockBasis b = build_basis(spec.lattice);
  const MeasurementConfig m = measurement_for_gamma(50.0, pattern_weights(Pattern::even_sites, 4), 1.0);
  auto part = std::make_shared<SubspacePartition>(enumerate_zeno_subspaces(m, b));
  LindbladGenerator gen(build_hamiltonian({1.0, 0.0, b.config()}, b), build_jump_operator(m, b), part);
  EXPECT_LT(gen.rhs(BlockDensityMatrix::pure(part, psi.amplitudes)).max_abs(), 1e-12);

  // Mixture of H0 eigenprojectors when D cannot tell states apart.
  const FockBasis b3 = build_basis(lattice(3, 2));
  const MeasurementConfig all = measurement_for_gamma(10.0, pattern_weights(Pattern::all_sites, 3), 2.0);
  const SparseOperator h = build_hamiltonian({1.0, 0.3, b3.config()}, b3);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h.dense());
  CMatrix rho = CMatrix::Zero(b3.size(), b3.size());
  for (Index k = 0; k < b3.size(); ++k) rho += (0.1 + k) * es.eigenvectors().col(k) * es.eigenvectors().col(k).adjoint();
  rho /= rho.trace();
  auto part3 = std::make_shared<SubspacePartition>(enumerate_zeno_subspaces(all, b3));
  LindbladGenerator gen3(h, build_jump_operator(all, b3), part3);
  EXPECT_LT(gen3.rhs(BlockDensityMatrix::from_dense(part3, rho)).max_abs(), 1e-12);
}

TEST(LindbladRhs, TwoSiteInitialCoherenceRate) {
  TwoSite s(1.0, 10.0);
  LindbladGenerator gen(s.H0, s.c, s.partition);
  const auto rho = BlockDensityMatrix::pure(s.partition, QuantumState::fock(s.basis, Occupation{1, 0}).amplitudes);
  const auto d = gen.rhs(rho);
  EXPECT_NEAR(d.block(0, 1).norm(), 1.0, 1e-14);
  EXPECT_NEAR(d.block(1, 0).norm(), 1.0, 1e-14);
}

TEST(IntegrateLindblad, RabiOscillationWithoutMeasurement) {
  TwoSite s(1.0, 10.0);
  const SparseOperator zero = s.c * cplx(0.0);
  LindbladGenerator gen(s.H0, zero, s.partition);
  LindbladOptions opt{3.0, 1e-3, 30, std::nullopt};
  const Index i10 = s.basis.index_of(Occupation{1, 0});
  const auto series =
      integrate_lindblad(BlockDensityMatrix::pure(s.partition, QuantumState::fock(s.basis, Occupation{1, 0}).amplitudes),
                         gen, opt);
  for (std::size_t k = 0; k < series.times.size(); ++k) {
    const double n1 = series.states[k].to_dense()(i10, i10).real();
    EXPECT_NEAR(n1, std::pow(std::cos(series.times[k]), 2), 1e-10);
  }
  EXPECT_LT(series.max_trace_drift, 1e-7);
}

TEST(IntegrateLindblad, FrozenWithoutTunnelling) {
  testing::ThreeSite s(100.0, 0.0);
  CMatrix rho = CMatrix::Zero(10, 10);
  for (Index i = 0; i < 10; ++i) rho(i, i) = (i + 1) / 55.0;
  LindbladOptions opt{1.0, 5e-4, 4, std::nullopt};
  const auto series = integrate_lindblad(BlockDensityMatrix::from_dense(s.partition, rho), s.H0, s.c, opt);
  EXPECT_LT(testing::max_abs(series.states.back().to_dense() - rho), 1e-15);
}

TEST(IntegrateLindblad, CoherenceDecaysAtGamma) {
  // Short-time fit of log |rho_01|; the dissipative coefficient is -gamma.
  TwoSite s(1.0, 100.0);
  LindbladGenerator gen(s.H0, s.c, s.partition);
  CVector plus = CVector::Constant(2, 1.0 / std::sqrt(2.0));
  LindbladOptions opt{0.02, 1e-5, 20, std::nullopt};
  const auto series = integrate_lindblad(BlockDensityMatrix::pure(s.partition, plus), gen, opt);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(series.times.size());
  for (std::size_t k = 0; k < series.times.size(); ++k) {
    const double t = series.times[k], y = std::log(series.states[k].block(0, 1).norm());
    sx += t, sy += y, sxx += t * t, sxy += t * y;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  EXPECT_NEAR(-slope / 100.0, 1.0, 0.05);
}

TEST(IntegrateLindblad, StabilityBoundEnforced) {
  testing::ThreeSite s;
  LindbladOptions opt{1.0, 0.1, 10, std::nullopt};
  const auto rho = BlockDensityMatrix::pure(s.partition, QuantumState::fock(s.basis, Occupation{2, 1, 0}).amplitudes);
  EXPECT_THROW(integrate_lindblad(rho, s.H0, s.c, opt), ContractViolation);
}

TEST(IntegrateLindblad, HalvingStepConverges) {
  testing::ThreeSite s(20.0);
  const auto rho = BlockDensityMatrix::pure(s.partition, QuantumState::fock(s.basis, Occupation{2, 1, 0}).amplitudes);
  LindbladGenerator gen(s.H0, s.c, s.partition);
  const double dt = 0.05 / 20.0;
  const auto a = integrate_lindblad(rho, gen, {1.0, dt, 1, std::nullopt}).states.back().to_dense();
  const auto b = integrate_lindblad(rho, gen, {1.0, dt / 2, 1, std::nullopt}).states.back().to_dense();
  const auto c = integrate_lindblad(rho, gen, {1.0, dt / 4, 1, std::nullopt}).states.back().to_dense();
  const double e1 = testing::max_abs(a - b), e2 = testing::max_abs(b - c);
  EXPECT_LT(e1, 1e-6);
  EXPECT_GT(e1 / e2, 10.0);  // fourth order gives 16
}

TEST(AdiabaticElimination, LinearInTunnelling) {
  testing::ThreeSite full(100.0, 1.0), half(100.0, 0.5), frozen(100.0, 0.0);
  const auto rho = BlockDensityMatrix::from_dense(full.partition, random_density(10, 4));
  LindbladGenerator g1(full.H0, full.c, full.partition), g2(half.H0, half.c, full.partition),
      g0(frozen.H0, frozen.c, full.partition);
  const auto e1 = adiabatic_eliminate(rho, g1), e2 = adiabatic_eliminate(rho, g2), e0 = adiabatic_eliminate(rho, g0);
  for (std::size_t m = 0; m < 4; ++m) {
    for (std::size_t n = 0; n < 4; ++n) {
      if (m == n) {
        EXPECT_EQ(testing::max_abs(e1.block(m, m) - rho.block(m, m)), 0.0);
        continue;
      }
      if (e1.block_norm(m, n) > 0) {
        EXPECT_NEAR(e2.block_norm(m, n) / e1.block_norm(m, n), 0.5, 0.005);
      }
      EXPECT_EQ(e0.block_norm(m, n), 0.0);
    }
  }
}

TEST(AdiabaticElimination, StrongMeasurementDecouples) {
  testing::ThreeSite s(1e8);
  const auto rho = BlockDensityMatrix::from_dense(s.partition, random_density(10, 5));
  const auto e = adiabatic_eliminate(rho, LindbladGenerator(s.H0, s.c, s.partition));
  for (std::size_t m = 0; m < 4; ++m) {
    for (std::size_t n = 0; n < 4; ++n) {
      if (m != n) {
        EXPECT_LT(e.block_norm(m, n), 1e-7);
      }
    }
  }
}

TEST(AdiabaticElimination, MatchesSlavedCoherenceInTwoSites) {
  // Compared at fixed J^2 t / gamma so the populations agree across gamma.
  std::vector<double> norms;
  for (double gamma : {10.0, 100.0}) {
    TwoSite s(1.0, gamma);
    LindbladGenerator gen(s.H0, s.c, s.partition);
    const auto rho0 = BlockDensityMatrix::pure(s.partition, QuantumState::fock(s.basis, Occupation{1, 0}).amplitudes);
    const auto late = integrate_lindblad(rho0, gen, {0.1 * gamma, 0.05 / gamma, 1, std::nullopt}).states.back();
    const std::size_t t = *s.partition->find(1.0), o = 1 - t;
    const double direct = late.block_norm(t, o);
    EXPECT_NEAR(adiabatic_eliminate(late, gen).block_norm(t, o) / direct, 1.0, 0.1);
    norms.push_back(direct);
  }
  EXPECT_NEAR(norms[0] / norms[1], 10.0, 2.0);
}

TEST(Purity, Examples) {
  testing::ThreeSite s;
  const auto pure = BlockDensityMatrix::pure(s.partition, QuantumState::fock(s.basis, Occupation{2, 1, 0}).amplitudes);
  const PurityReport a = purity(pure, s.target);
  EXPECT_NEAR(a.total, 1.0, 1e-15);
  EXPECT_NEAR(a.remainder, 0.0, 1e-15);

  CMatrix mix = CMatrix::Zero(10, 10);
  const Index i = s.basis.index_of(Occupation{2, 1, 0}), j = s.basis.index_of(Occupation{3, 0, 0});
  mix(i, i) = mix(j, j) = 0.5;
  const PurityReport b = purity(BlockDensityMatrix::from_dense(s.partition, mix), s.target);
  EXPECT_NEAR(b.total, 0.5, 1e-15);
  EXPECT_NEAR(b.zeno_part, 0.25, 1e-15);
}

TEST(Purity, RemainderFallsAsInverseGammaSquared) {
  // Leaked population is O(J^2 t / gamma), so its purity share is O(1 / gamma^2).
  auto remainder_at = [](double gamma) {
    testing::ThreeSite s(gamma);
    const auto rho0 =
        BlockDensityMatrix::pure(s.partition, QuantumState::fock(s.basis, Occupation{2, 1, 0}).amplitudes);
    const auto series = integrate_lindblad(rho0, s.H0, s.c, {1.0, 0.05 / gamma, 1, std::nullopt});
    return purity(series.states.back(), s.target).remainder;
  };
  const double r100 = remainder_at(100.0), r1000 = remainder_at(1000.0);
  EXPECT_GT(r100, 0.0);
  EXPECT_GT(r100 / r1000, 50.0);
  EXPECT_LT(r100 / r1000, 200.0);
}

TEST(TraceDistance, Basics) {
  const CMatrix a = random_density(5, 1), b = random_density(5, 2);
  EXPECT_NEAR(trace_distance(a, a), 0.0, 1e-14);
  EXPECT_NEAR(trace_distance(a, b), trace_distance(b, a), 1e-14);
  CMatrix p = CMatrix::Zero(2, 2), q = CMatrix::Zero(2, 2);
  p(0, 0) = 1.0;
  q(1, 1) = 1.0;
  EXPECT_NEAR(trace_distance(p, q), 1.0, 1e-15);
}

}  // namespace
}  // namespace zeno
