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

// Physical operators of measured lattice bosons: the Bose-Hubbard
// Hamiltonian, the density-coupled jump operator c = sqrt(2 kappa) C D with
// D = sum_i A_i n_i, and the Zeno subspaces (eigenspaces of D).

#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "zeno/fockspace.hpp"

namespace zeno {

struct BhmParams {
  double J = 1.0;  // tunnelling
  double U = 0.0;  // on-site interaction
  LatticeConfig lattice;

  void validate() const;
};

/// Nearest-neighbour bonds (i, j), i < j unless the periodic wrap bond.
/// Periodic lattices add (M-1, 0) for M >= 2; for M = 2 this repeats the
/// single bond, i.e. both neighbours of a site are counted.
std::vector<std::pair<int, int>> lattice_bonds(const LatticeConfig& lattice);

/// Named illumination patterns. Explicit vectors bypass these.
enum class Pattern { middle_site, even_sites, all_sites };

std::string to_string(Pattern p);
Pattern pattern_from_string(const std::string& s);
/// A_i for a named pattern. middle_site lights site ceil(M/2) (1-based);
/// even_sites lights 1-based sites 2, 4, ....
std::vector<cplx> pattern_weights(Pattern p, int sites);

struct MeasurementConfig {
  double kappa = 0.5;             // cavity relaxation rate
  cplx C{1.0, 0.0};               // Rayleigh scattering coefficient
  std::vector<cplx> pattern;      // A_i, length M
  cplx zeno_eigenvalue{0.0, 0.0}; // N^0_K, eigenvalue of D selecting the Zeno subspace

  /// gamma = kappa |C|^2, always recomputed.
  double gamma() const { return kappa * std::norm(C); }
  /// Jump-operator eigenvalue sqrt(2 kappa) C o for a D eigenvalue o.
  cplx jump_eigenvalue(cplx o) const { return std::sqrt(2.0 * kappa) * C * o; }
  /// c_0 = sqrt(2 kappa) C N^0_K.
  cplx c0() const { return jump_eigenvalue(zeno_eigenvalue); }
  bool real_pattern() const;

  void validate(int sites) const;
};

/// Builds kappa, C from a target gamma with C = 1 and kappa = gamma.
MeasurementConfig measurement_for_gamma(double gamma, std::vector<cplx> pattern,
                                        cplx zeno_eigenvalue);

/// -J sum_{<ij>} (b^dagger_i b_j + h.c.) + (U/2) sum_i n_i (n_i - 1).
SparseOperator build_hamiltonian(const BhmParams& params, const FockBasis& basis);
/// T = sum_{<ij>} (b^dagger_i b_j + b^dagger_j b_i), so H_0 = -J T + interaction.
SparseOperator build_hopping_operator(const FockBasis& basis);
/// D = sum_i A_i n_i.
SparseOperator build_measurement_operator(const MeasurementConfig& meas, const FockBasis& basis);
/// c = sqrt(2 kappa) C D (diagonal).
SparseOperator build_jump_operator(const MeasurementConfig& meas, const FockBasis& basis);

/// One degenerate eigenspace of D.
struct ZenoSubspace {
  cplx eigenvalue;              // o_m of D
  std::vector<Index> members;   // basis indices, ascending
  SparseOperator projector;     // diagonal 0/1

  Index size() const { return static_cast<Index>(members.size()); }
};

/// Partition of a basis into Zeno subspaces, plus the reverse lookup.
class SubspacePartition {
 public:
  SubspacePartition(std::vector<ZenoSubspace> subspaces, Index dim);

  std::size_t count() const noexcept { return subspaces_.size(); }
  Index dim() const noexcept { return static_cast<Index>(owner_.size()); }
  const ZenoSubspace& operator[](std::size_t m) const { return subspaces_[m]; }
  const std::vector<ZenoSubspace>& subspaces() const noexcept { return subspaces_; }

  /// Subspace index of basis state i.
  std::size_t owner(Index i) const { return owner_[static_cast<std::size_t>(i)]; }
  /// Position of basis state i inside its subspace.
  Index local_index(Index i) const { return local_[static_cast<std::size_t>(i)]; }
  /// Subspace whose eigenvalue matches `o` within `tol`; nullopt otherwise.
  std::optional<std::size_t> find(cplx o, double tol = 1e-9) const;

  /// sum_{i in m} |psi_i|^2 for every subspace.
  std::vector<double> populations(const CVector& psi) const;

 private:
  std::vector<ZenoSubspace> subspaces_;
  std::vector<std::size_t> owner_;
  std::vector<Index> local_;
};

/// Groups basis states by their D eigenvalue (deduplicated within 1e-9),
/// ordered by ascending real then imaginary part.
SubspacePartition enumerate_zeno_subspaces(const MeasurementConfig& meas, const FockBasis& basis,
                                           double tol = 1e-9);
/// Same, from an already assembled diagonal operator.
SubspacePartition partition_by_diagonal(const SparseOperator& diagonal_op, double tol = 1e-9);

struct ScaleEstimate {
  double K = 0.0;        // Hamiltonian scale
  double lambda_sq = 0.0;  // measurement scale lambda^2
  std::string convention;
  std::optional<std::string> warning;

  double ratio() const { return lambda_sq > 0.0 ? K / lambda_sq : INFINITY; }
};

inline constexpr double kZenoRatioWarning = 0.1;

/// K = J and lambda^2 = gamma; warns when K/lambda^2 exceeds 0.1.
ScaleEstimate estimate_scales(const BhmParams& params, const MeasurementConfig& meas,
                              const ZenoSubspace& subspace);

}  // namespace zeno
