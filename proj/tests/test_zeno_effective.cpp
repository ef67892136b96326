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

#include <cmath>

#include "test_support.hpp"
#include "zeno/errors.hpp"
#include "zeno/master_eq.hpp"
#include "zeno/zeno_effective.hpp"

namespace zeno {
namespace {

using testing::lattice;

Eigen::Vector3d triple_populations(const CVector& psi, const FockBasis& basis) {
  const auto idx = three_site_indices(basis);
  Eigen::Vector3d p;
  for (int i = 0; i < 3; ++i) p[i] = std::norm(psi[idx[static_cast<std::size_t>(i)]]);
  return p / psi.squaredNorm();
}

// Least-squares slope of log|amplitude ratio| against J^2 t / gamma.
double fitted_relative_rate(const NonHermitianSeries& s, const FockBasis& basis, int mode, double J, double gamma) {
  const auto idx = three_site_indices(basis);
  const Eigen::Matrix3cd v = three_site_eigenvectors();
  double sx = 0, sy = 0, sxx = 0, sxy = 0, n = 0;
  for (std::size_t k = 1; k < s.times.size(); ++k) {
    Eigen::Vector3cd a;
    for (int i = 0; i < 3; ++i) a[i] = s.states[k][idx[static_cast<std::size_t>(i)]];
    const double ratio = std::abs(v.col(mode).dot(a)) / std::abs(v.col(0).dot(a));
    const double x = J * J * s.times[k] / gamma, y = std::log(ratio);
    sx += x, sy += y, sxx += x * x, sxy += x * y, n += 1;
  }
  return -(n * sxy - sx * sy) / (n * sxx - sx * sx);
}

TEST(EffectiveHamiltonian, NoBackactionWhenJumpIsProportionalToIdentity) {
  const FockBasis b = build_basis(lattice(3, 2));
  const SparseOperator h = build_hamiltonian({1.0, 0.5, b.config()}, b);
  const auto meas = measurement_for_gamma(7.0, pattern_weights(Pattern::all_sites, 3), 2.0);
  const SparseOperator c = build_jump_operator(meas, b);
  const auto heff = build_effective_hamiltonian(h, c, meas.c0());
  EXPECT_LT(testing::max_abs(heff.matrix.dense() - h.dense()), 1e-12);
}

TEST(EffectiveHamiltonian, MiddleSiteDecayEntries) {
  testing::ThreeSite s;
  const auto heff = build_effective_hamiltonian(s.params, s.meas, s.basis);
  EXPECT_EQ(heff.form, EffectiveForm::density);
  for (Index i = 0; i < s.basis.size(); ++i) {
    const int n2 = s.basis.occupation(i, 1);
    EXPECT_NEAR(heff.matrix.coeff(i, i).imag(), -s.gamma * (n2 - 1) * (n2 - 1), 1e-12);
  }
}

TEST(EffectiveHamiltonian, GeneralAndDensityFormsAgree) {
  for (double g : {10.0, 100.0}) {
    testing::ThreeSite s(g);
    const auto general = build_effective_hamiltonian(s.H0, s.c, s.meas.c0());
    const auto density = build_effective_hamiltonian(s.params, s.meas, s.basis);
    EXPECT_LT(testing::max_abs(general.matrix.dense() - density.matrix.dense()), 1e-12 * g);
  }
}

TEST(EffectiveHamiltonian, ReferenceMustBeInSpectrum) {
  testing::ThreeSite s;
  EXPECT_THROW(build_effective_hamiltonian(s.H0, s.c, cplx(0.5)), ContractViolation);
}

TEST(EffectiveHamiltonian, NoGainForAnyConstruction) {
  for (double g : {1.0, 10.0, 100.0}) {
    testing::ThreeSite s(g);
    for (cplx o : {cplx(0), cplx(1), cplx(2), cplx(3)}) {
      const auto heff = build_effective_hamiltonian(s.H0, s.c, s.meas.jump_eigenvalue(o));
      EXPECT_LE(heff.anti_hermitian_max_eigenvalue(), 1e-9);
    }
    const auto raman = build_projected_raman_hamiltonian(s.H0, s.basis, s.meas, *s.partition, s.target, s.J, g);
    EXPECT_LE(raman.anti_hermitian_max_eigenvalue(), 1e-9);
  }
  // complex coefficient and pattern
  const FockBasis b = build_basis(lattice(3, 2));
  MeasurementConfig m;
  m.kappa = 2.0;
  m.C = cplx(0.3, 0.9);
  m.pattern = {cplx(1, 1), 0.0, cplx(0, -1)};
  const auto heff = build_effective_hamiltonian(build_hamiltonian({1.0, 0.0, b.config()}, b),
                                                build_jump_operator(m, b), m.jump_eigenvalue(cplx(1, 1)));
  EXPECT_LE(heff.anti_hermitian_max_eigenvalue(), 1e-9);
}

TEST(NonHermitianEvolution, ThreeSitePopulationsApproachSlowVector) {
  testing::ThreeSite s;
  const auto heff = build_effective_hamiltonian(s.params, s.meas, s.basis);
  const auto series = evolve_nonhermitian(QuantumState::fock(s.basis, Occupation{2, 1, 0}).amplitudes, heff,
                                          {100.0, 5e-4, 100, true});
  const Eigen::Vector3d p = triple_populations(series.states.back(), s.basis);
  EXPECT_NEAR(p[0], 0.25, 0.02);
  EXPECT_NEAR(p[1], 0.50, 0.02);
  EXPECT_NEAR(p[2], 0.25, 0.02);
  for (std::size_t k = 1; k < series.raw_norm_sq.size(); ++k) {
    EXPECT_LE(series.raw_norm_sq[k], series.raw_norm_sq[k - 1] * (1 + 1e-14));
  }
  // Leakage out of the n_2 = 1 subspace stays second order.
  const auto& members = (*s.partition)[s.target].members;
  for (const CVector& psi : series.states) {
    double inside = 0.0;
    for (Index i : members) inside += std::norm(psi[i]);
    EXPECT_LT(1.0 - inside / psi.squaredNorm(), 0.01);
  }
}

TEST(NonHermitianEvolution, UnitaryLimit) {
  testing::ThreeSite s;
  const SparseOperator zero = s.c * cplx(0.0);
  const auto heff = build_effective_hamiltonian(s.H0, zero, 0.0);
  const auto series = evolve_nonhermitian(QuantumState::fock(s.basis, Occupation{2, 1, 0}).amplitudes, heff,
                                          {10.0, 1e-3, 10, false});
  for (double n : series.raw_norm_sq) EXPECT_NEAR(n, 1.0, 1e-8);
}

TEST(NonHermitianEvolution, RelativeDecayRatesOfSlowModes) {
  testing::ThreeSite s;
  const auto heff = build_effective_hamiltonian(s.params, s.meas, s.basis);
  // Start past the fast transient that slaves the outside amplitudes.
  const auto series = evolve_nonhermitian(QuantumState::fock(s.basis, Occupation{2, 1, 0}).amplitudes, heff,
                                          {40.0, 5e-4, 80, false});
  EXPECT_NEAR(fitted_relative_rate(series, s.basis, 1, s.J, s.gamma) / 6.0, 1.0, 0.05);
  EXPECT_NEAR(fitted_relative_rate(series, s.basis, 2, s.J, s.gamma) / 12.0, 1.0, 0.05);
}

TEST(ProjectedRaman, ThreeSiteSpectrum) {
  testing::ThreeSite s;
  const auto raman = build_projected_raman_hamiltonian(s.H0, s.basis, s.meas, *s.partition, s.target, s.J, s.gamma);
  EXPECT_EQ(raman.support, (*s.partition)[s.target].members);
  const Spectrum sp = spectrum(raman);
  ASSERT_EQ(sp.eigenvalues.size(), 3);
  const double unit = s.J * s.J / s.gamma;
  const double base = -sp.eigenvalues[0].imag() / unit;
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(sp.eigenvalues[i].real(), 0.0, 1e-12);
    EXPECT_NEAR(-sp.eigenvalues[i].imag() / unit - base, kThreeSiteRelativeRates[static_cast<std::size_t>(i)], 1e-9);
  }
  // Eigenvectors are v1, v2, v3 up to phase, in the member order of the support.
  const auto idx = three_site_indices(s.basis);
  const Eigen::Matrix3cd v = three_site_eigenvectors();
  for (int i = 0; i < 3; ++i) {
    Eigen::Vector3cd e;
    for (int r = 0; r < 3; ++r) {
      const auto pos = std::find(raman.support.begin(), raman.support.end(), idx[static_cast<std::size_t>(r)]) -
                       raman.support.begin();
      e[r] = sp.eigenvectors(pos, i);
    }
    EXPECT_NEAR(std::abs(v.col(i).dot(e)), 1.0, 1e-10) << i;
  }
}

TEST(ProjectedRaman, ZeroWithoutTunnelling) {
  testing::ThreeSite s(100.0, 0.0);
  const auto raman = build_projected_raman_hamiltonian(s.H0, s.basis, s.meas, *s.partition, s.target, 0.0, s.gamma);
  EXPECT_EQ(testing::max_abs(raman.matrix.dense()), 0.0);
}

TEST(ProjectedRaman, AgreesWithFullConditionedDynamics) {
  testing::ThreeSite s;
  const CVector psi0 = QuantumState::fock(s.basis, Occupation{2, 1, 0}).amplitudes;
  const auto raman = build_projected_raman_hamiltonian(s.H0, s.basis, s.meas, *s.partition, s.target, s.J, s.gamma);
  const auto full = build_effective_hamiltonian(s.params, s.meas, s.basis);
  const NonHermitianOptions opt{60.0, 5e-4, 30, true};
  const auto a = evolve_nonhermitian(psi0, raman, opt), b = evolve_nonhermitian(psi0, full, opt);
  for (std::size_t k = 0; k < a.times.size(); ++k) {
    EXPECT_LT((triple_populations(a.states[k], s.basis) - triple_populations(b.states[k], s.basis)).cwiseAbs().maxCoeff(),
              0.02);
  }
}

TEST(ProjectedRaman, AgreesWithEliminatedLindbladBlocks) {
  // Record-consistent Lindblad evolution, normalized on the target block.
  testing::ThreeSite s;
  const CVector psi0 = QuantumState::fock(s.basis, Occupation{2, 1, 0}).amplitudes;
  const auto raman = build_projected_raman_hamiltonian(s.H0, s.basis, s.meas, *s.partition, s.target, s.J, s.gamma);
  const auto a = evolve_nonhermitian(psi0, raman, {20.0, 5e-4, 10, true});
  LindbladOptions lo{20.0, 5e-4, 10, s.target};
  const auto l = integrate_lindblad(BlockDensityMatrix::pure(s.partition, psi0), s.H0, s.c, lo);
  const auto& members = (*s.partition)[s.target].members;
  for (std::size_t k = 0; k < a.times.size(); ++k) {
    const CMatrix& blk = l.states[k].block(s.target, s.target);
    const double tr = blk.trace().real();
    for (std::size_t r = 0; r < members.size(); ++r) {
      const double p_raman = std::norm(a.states[k][members[r]]) / a.states[k].squaredNorm();
      EXPECT_NEAR(blk(static_cast<Index>(r), static_cast<Index>(r)).real() / tr, p_raman, 0.02);
    }
  }
}

TEST(Spectrum, ThreeSiteSlowAndFastModes) {
  testing::ThreeSite s;
  const auto heff = build_effective_hamiltonian(s.params, s.meas, s.basis);
  const Spectrum sp = spectrum(heff);
  ASSERT_EQ(sp.eigenvalues.size(), 10);
  int slow = 0, fast = 0;
  for (Index i = 0; i < 10; ++i) {
    const double im = std::abs(sp.eigenvalues[i].imag());
    if (im <= 20.0 * s.J * s.J / s.gamma) ++slow;
    if (im >= 0.1 * s.gamma) ++fast;
    if (i > 0) {
      EXPECT_LE(std::abs(sp.eigenvalues[i - 1].imag()), im);
    }
  }
  EXPECT_EQ(slow, 3);
  EXPECT_EQ(fast, 7);
  const auto& members = (*s.partition)[s.target].members;
  for (Index i = 0; i < 3; ++i) {
    double inside = 0.0;
    for (Index m : members) inside += std::norm(sp.eigenvectors(m, i));
    EXPECT_LT(1.0 - inside, 0.01);
  }
  EXPECT_LT(sp.max_residual, 1e-8 * heff.matrix.row_sum_norm());
}

TEST(Spectrum, HermitianInputHasRealEigenvalues) {
  testing::ThreeSite s;
  const auto heff = build_effective_hamiltonian(s.H0, s.c * cplx(0.0), 0.0);
  const Spectrum sp = spectrum(heff);
  for (Index i = 0; i < sp.eigenvalues.size(); ++i) EXPECT_NEAR(sp.eigenvalues[i].imag(), 0.0, 1e-9);
}

TEST(Spectrum, CapEnforced) {
  testing::ThreeSite s;
  EXPECT_THROW(spectrum(build_effective_hamiltonian(s.params, s.meas, s.basis), 5), ResourceError);
}

TEST(ThreeSiteAnalytic, EigenvectorsOrthonormal) {
  const Eigen::Matrix3cd v = three_site_eigenvectors();
  EXPECT_LT((v.adjoint() * v - Eigen::Matrix3cd::Identity()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(v(0, 0).real(), 0.5, 1e-15);
  EXPECT_NEAR(v(1, 0).real(), -std::sqrt(2.0) / 2.0, 1e-15);
}

TEST(ThreeSiteAnalytic, LimitsAndDegenerateInput) {
  const Eigen::Vector3cd psi0(1.0, 0.0, 0.0);
  const Eigen::Vector3cd late = three_site_analytic(psi0, 1.0, 100.0, 1e5);
  EXPECT_NEAR(std::norm(late[0]), 0.25, 1e-12);
  EXPECT_NEAR(std::norm(late[1]), 0.50, 1e-12);
  EXPECT_NEAR(std::norm(late[2]), 0.25, 1e-12);
  const Eigen::Vector3cd mixed = Eigen::Vector3cd(cplx(0.6, 0.0), cplx(0.0, 0.8), 0.0);
  EXPECT_LT((three_site_analytic(mixed, 1.0, 100.0, 0.0) - mixed).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_THROW(three_site_analytic(Eigen::Vector3cd::Zero(), 1.0, 100.0, 1.0), DegenerateInput);
}

TEST(ThreeSiteAnalytic, MatchesFullNonHermitianEvolution) {
  testing::ThreeSite s;
  const auto heff = build_effective_hamiltonian(s.params, s.meas, s.basis);
  const auto series = evolve_nonhermitian(QuantumState::fock(s.basis, Occupation{2, 1, 0}).amplitudes, heff,
                                          {100.0, 5e-4, 200, true});
  for (std::size_t k = 0; k < series.times.size(); ++k) {
    const Eigen::Vector3cd a = three_site_analytic(Eigen::Vector3cd(1, 0, 0), s.J, s.gamma, series.times[k]);
    const Eigen::Vector3d num = triple_populations(series.states[k], s.basis);
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(std::norm(a[i]), num[i], 0.02) << series.times[k];
  }
}

}  // namespace
}  // namespace zeno
