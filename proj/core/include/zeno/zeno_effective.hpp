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


// Deterministic conditioned dynamics inside a Zeno subspace.
//
//   general:          H_eff = H_0 + i (c0^* c - |c0|^2/2 - c^dag c/2)
//   density:          H_eff = H_0 - i gamma (D - N0)^2   (real pattern, real N0)
//   projected_raman:  H_phi = P [H_0 - i (J^2/gamma) T_b T_b] P
//
// T_b sums the hops b^dag_i b_j with A_i != A_j, i.e. the hops that change the
// measured eigenvalue. Sandwiched between projectors, T_b T_b keeps exactly
// the two-hop processes that leave the subspace and return to it.

#pragma once

#include <array>
#include <optional>
#include <vector>

#include "zeno/model.hpp"

namespace zeno {

enum class EffectiveForm { general, density, projected_raman };

std::string to_string(EffectiveForm f);

struct EffectiveHamiltonian {
  SparseOperator matrix;        // on the full sector basis
  cplx c0{};
  EffectiveForm form = EffectiveForm::general;
  std::vector<Index> support;   // projected_raman: basis indices of the subspace

  /// Largest eigenvalue of -i (H - H^dag)/2; <= 0 means decay only.
  double anti_hermitian_max_eigenvalue() const;
  /// Matrix restricted to `support` (the full matrix when support is empty).
  CMatrix restricted() const;
};

/// Assembles the general form. Throws ContractViolation when c0 is not an
/// eigenvalue of the (diagonal) c within `tol`.
EffectiveHamiltonian build_effective_hamiltonian(const SparseOperator& H0, const SparseOperator& c, cplx c0,
                                                 double tol = 1e-9);

/// Builds H_eff for a density measurement. For a real pattern and real N0 the
/// result carries the density form after checking it against the general form
/// to 1e-12 (NumericalError otherwise).
EffectiveHamiltonian build_effective_hamiltonian(const BhmParams& params, const MeasurementConfig& meas,
                                                 const FockBasis& basis);

/// Sum of b^dag_i b_j over ordered neighbour pairs with A_i != A_j.
SparseOperator build_boundary_hopping(const FockBasis& basis, const MeasurementConfig& meas);

EffectiveHamiltonian build_projected_raman_hamiltonian(const SparseOperator& H0, const FockBasis& basis,
                                                       const MeasurementConfig& meas,
                                                       const SubspacePartition& partition, std::size_t target,
                                                       double J, double gamma);

struct NonHermitianOptions {
  double t_final = 1.0;
  double dt = 1e-3;
  int sample_points = 200;
  bool renormalize = true;
};

struct NonHermitianSeries {
  std::vector<double> times;
  std::vector<CVector> states;   // normalized when renormalize is set
  std::vector<double> raw_norm_sq;  // squared norm of the never-renormalized solution
};

/// RK4 on d psi/dt = -i H_eff psi. Renormalization happens at samples only.
NonHermitianSeries evolve_nonhermitian(const CVector& psi0, const EffectiveHamiltonian& heff,
                                       const NonHermitianOptions& options);

inline constexpr Index kDenseEigenCap = 4000;

struct Spectrum {
  CVector eigenvalues;   // sorted by |Im| ascending
  CMatrix eigenvectors;  // unit columns, in the coordinates of restricted()
  double max_residual = 0.0;
};

/// Dense eigendecomposition of heff.restricted(). Throws ResourceError above
/// `cap` and NumericalError on nonconvergence or a residual above 1e-8 ||H||.
Spectrum spectrum(const EffectiveHamiltonian& heff, Index cap = kDenseEigenCap);

/// Ordered basis {|2,1,0>, |1,1,1>, |0,1,2>} of the n_2 = 1 subspace.
std::array<Index, 3> three_site_indices(const FockBasis& basis);
/// Eigenvectors (1,-sqrt2,1)/2, (1,0,-1)/sqrt2, (1,sqrt2,1)/2 as columns.
Eigen::Matrix3cd three_site_eigenvectors();
/// Decay rates of the three modes relative to the slowest one, in J^2/gamma.
inline constexpr std::array<double, 3> kThreeSiteRelativeRates{0.0, 6.0, 12.0};

/// Normalized amplitudes sum_i z_i exp(-r_i J^2 t/gamma) v_i, z_i = <v_i|psi0>.
/// Throws DegenerateInput when all z_i vanish.
Eigen::Vector3cd three_site_analytic(const Eigen::Vector3cd& psi0, double J, double gamma, double t);

}  // namespace zeno
