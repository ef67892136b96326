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

#include "test_support.hpp"
#include "zeno/errors.hpp"
#include "zeno/model.hpp"

namespace zeno {
namespace {

using testing::lattice;

Eigen::VectorXd hermitian_spectrum(const SparseOperator& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h.dense());
  return es.eigenvalues();
}

TEST(Hamiltonian, TwoLevelSplitting) {
  const BhmParams p{1.0, 0.0, lattice(2, 1, Boundary::open)};
  const FockBasis b = build_basis(p.lattice);
  const Eigen::VectorXd e = hermitian_spectrum(build_hamiltonian(p, b));
  EXPECT_NEAR(e[0], -1.0, 1e-14);
  EXPECT_NEAR(e[1], 1.0, 1e-14);
}

TEST(Hamiltonian, OnSiteInteraction) {
  const BhmParams p{1.0, 1.0, lattice(1, 2)};
  const FockBasis b = build_basis(p.lattice);
  const SparseOperator h = build_hamiltonian(p, b);
  ASSERT_EQ(h.rows(), 1);
  EXPECT_EQ(h.coeff(0, 0), cplx(1.0));
}

TEST(Hamiltonian, PeriodicGroundStateEnergy) {
  // U = 0: all three atoms in k = 0 with single-particle energy -2J.
  const BhmParams p{1.0, 0.0, lattice(3, 3)};
  const FockBasis b = build_basis(p.lattice);
  EXPECT_NEAR(hermitian_spectrum(build_hamiltonian(p, b))[0], -6.0, 1e-12);
}

TEST(Hamiltonian, HermitianOverParameterGrid) {
  for (int m : {2, 3, 4, 5}) {
    for (int n : {1, 2, 3}) {
      for (double u : {0.0, 0.7, -2.0}) {
        for (Boundary bc : {Boundary::open, Boundary::periodic}) {
          const BhmParams p{1.3, u, lattice(m, n, bc)};
          EXPECT_LE(build_hamiltonian(p, build_basis(p.lattice)).hermiticity_defect(), 1e-12);
        }
      }
    }
  }
}

TEST(Hamiltonian, BasisMismatchRejected) {
  const BhmParams p{1.0, 0.0, lattice(3, 3)};
  EXPECT_THROW(build_hamiltonian(p, build_basis(lattice(3, 2))), ContractViolation);
}

TEST(Bonds, PeriodicTwoSiteCountsBothNeighbours) {
  EXPECT_EQ(lattice_bonds(lattice(2, 1)).size(), 2u);
  EXPECT_EQ(lattice_bonds(lattice(2, 1, Boundary::open)).size(), 1u);
  EXPECT_EQ(lattice_bonds(lattice(5, 1)).size(), 5u);
}

TEST(JumpOperator, Examples) {
  const FockBasis b3 = build_basis(lattice(3, 3));
  MeasurementConfig m;
  m.kappa = 0.5;
  m.pattern = pattern_weights(Pattern::middle_site, 3);
  const SparseOperator c = build_jump_operator(m, b3);
  const Index s = b3.index_of(Occupation{2, 1, 0});
  EXPECT_NEAR(std::abs(c.coeff(s, s) - 1.0), 0.0, 1e-15);
  EXPECT_TRUE(c.is_diagonal());

  m.pattern = pattern_weights(Pattern::all_sites, 3);
  const CMatrix all = build_jump_operator(m, b3).dense();
  EXPECT_LT(testing::max_abs(all - 3.0 * CMatrix::Identity(10, 10)), 1e-15);

  const FockBasis b8 = build_basis(lattice(8, 8));
  const MeasurementConfig even = measurement_for_gamma(100.0, pattern_weights(Pattern::even_sites, 8), 4.0);
  const Index u = b8.index_of(Occupation(8, 1));
  EXPECT_EQ(build_measurement_operator(even, b8).coeff(u, u), cplx(4.0));
}

TEST(JumpOperator, CommutesWithTotalNumber) {
  testing::ThreeSite s;
  const std::vector<double> ones(3, 1.0);
  const CMatrix n = weighted_number_op(s.basis, std::span<const double>(ones)).dense();
  const CMatrix c = s.c.dense();
  EXPECT_EQ(testing::max_abs(c * n - n * c), 0.0);
}

TEST(MeasurementConfig, GammaAndValidation) {
  MeasurementConfig m;
  m.kappa = 2.0;
  m.C = cplx(0.0, 3.0);
  EXPECT_DOUBLE_EQ(m.gamma(), 18.0);
  m.pattern = {1.0, 0.0};
  EXPECT_THROW(m.validate(3), ValidationError);
  m.kappa = -1.0;
  try {
    m.validate(2);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.field(), "kappa");
  }
  EXPECT_THROW(pattern_from_string("diagonal"), ValidationError);
}

TEST(Patterns, NamedWeights) {
  EXPECT_EQ(pattern_weights(Pattern::middle_site, 3), (std::vector<cplx>{0, 1, 0}));
  EXPECT_EQ(pattern_weights(Pattern::middle_site, 2), (std::vector<cplx>{1, 0}));
  EXPECT_EQ(pattern_weights(Pattern::even_sites, 4), (std::vector<cplx>{0, 1, 0, 1}));
}

TEST(ZenoSubspaces, MiddleSiteSizes) {
  testing::ThreeSite s;
  const auto& p = *s.partition;
  ASSERT_EQ(p.count(), 4u);
  const std::vector<Index> sizes{4, 3, 2, 1};
  for (std::size_t m = 0; m < 4; ++m) {
    EXPECT_EQ(p[m].eigenvalue, cplx(static_cast<double>(m)));
    EXPECT_EQ(p[m].size(), sizes[m]);
  }
}

TEST(ZenoSubspaces, AllSitesAndEvenSites) {
  const FockBasis b = build_basis(lattice(3, 3));
  MeasurementConfig m = measurement_for_gamma(1.0, pattern_weights(Pattern::all_sites, 3), 3.0);
  const auto p = enumerate_zeno_subspaces(m, b);
  ASSERT_EQ(p.count(), 1u);
  EXPECT_EQ(p[0].size(), b.size());

  const FockBasis b8 = build_basis(lattice(8, 8));
  const auto p8 = enumerate_zeno_subspaces(measurement_for_gamma(1.0, pattern_weights(Pattern::even_sites, 8), 4.0), b8);
  ASSERT_EQ(p8.count(), 9u);
  for (std::size_t o = 0; o < 9; ++o) EXPECT_EQ(p8[o].eigenvalue, cplx(static_cast<double>(o)));
}

TEST(ZenoSubspaces, ProjectorsFormResolutionOfIdentity) {
  testing::ThreeSite s;
  const auto& subs = s.partition->subspaces();
  const Index d = s.basis.size();
  CMatrix sum = CMatrix::Zero(d, d);
  for (std::size_t m = 0; m < subs.size(); ++m) {
    const CMatrix pm = subs[m].projector.dense();
    EXPECT_EQ(testing::max_abs(pm * pm - pm), 0.0);
    for (std::size_t n = 0; n < subs.size(); ++n) {
      if (n != m) {
        EXPECT_EQ(testing::max_abs(pm * subs[n].projector.dense()), 0.0);
      }
    }
    sum += pm;
  }
  EXPECT_EQ(testing::max_abs(sum - CMatrix::Identity(d, d)), 0.0);
}

TEST(ZenoSubspaces, HamiltonianHasNoFirstOrderTermInsideTarget) {
  testing::ThreeSite s;
  const CMatrix p = (*s.partition)[s.target].projector.dense();
  EXPECT_EQ(testing::max_abs(p * s.H0.dense() * p), 0.0);
}

TEST(Scales, RatioAndWarning) {
  testing::ThreeSite s;
  const auto& sub = (*s.partition)[s.target];
  const ScaleEstimate a = estimate_scales(s.params, s.meas, sub);
  EXPECT_DOUBLE_EQ(a.ratio(), 0.01);
  EXPECT_FALSE(a.warning);
  const ScaleEstimate b = estimate_scales(s.params, measurement_for_gamma(5.0, s.meas.pattern, 1.0), sub);
  EXPECT_DOUBLE_EQ(b.ratio(), 0.2);
  EXPECT_TRUE(b.warning);
  BhmParams frozen = s.params;
  frozen.J = 0.0;
  EXPECT_EQ(estimate_scales(frozen, s.meas, sub).ratio(), 0.0);
}

}  // namespace
}  // namespace zeno
