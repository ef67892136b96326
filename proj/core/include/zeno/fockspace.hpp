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

// Bosonic Fock space of N atoms on M lattice sites.
//
// Sites are 0-based inside the library. Physical positions are x_j = (j+1) a,
// so that the user-facing 1-based site label j+1 multiplies the lattice
// spacing; "even sites" are the sites with even labels 2, 4, ....
//
// Momentum modes use b_k = M^{-1/2} sum_j exp(+i k x_j) b_j on the grid
// k_m = 2 pi m / (M a), m in {-floor(M/2)+1, ..., ceil(M/2)}.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "zeno/sparse_operator.hpp"

namespace zeno {

enum class Boundary { periodic, open };

std::string to_string(Boundary b);
Boundary boundary_from_string(const std::string& s);

inline constexpr std::uint64_t kDefaultDimensionCap = 10'000'000;

struct LatticeConfig {
  int sites = 1;                  // M
  int atoms = 0;                  // N
  double lattice_spacing = 1.0;   // a
  Boundary boundary = Boundary::periodic;

  /// Throws ValidationError naming the bad field.
  void validate() const;
  /// binomial(N + M - 1, N); saturates at UINT64_MAX.
  std::uint64_t dimension() const;
  LatticeConfig with_atoms(int n) const;
};

using Occupation = std::vector<int>;

/// Exhaustive occupation-number basis for fixed (N, M) in lexicographically
/// descending order: (N,0,...,0) first, (0,...,0,N) last.
class FockBasis {
 public:
  const LatticeConfig& config() const noexcept { return config_; }
  int sites() const noexcept { return config_.sites; }
  int atoms() const noexcept { return config_.atoms; }
  Index size() const noexcept { return static_cast<Index>(count_); }

  /// Occupation vector of basis state i.
  std::span<const int> state(Index i) const;
  Occupation occupation(Index i) const;
  int occupation(Index i, int site) const { return occupations_[offset(i) + site]; }

  /// Dense index of an occupation vector, or nullopt when it is not in this sector.
  std::optional<Index> find(std::span<const int> occ) const;
  /// Like find() but throws ContractViolation for foreign vectors.
  Index index_of(std::span<const int> occ) const;

  std::string label(Index i) const;  // e.g. "2,1,0"

  friend FockBasis build_basis(const LatticeConfig&, std::uint64_t);

 private:
  std::size_t offset(Index i) const { return static_cast<std::size_t>(i) * config_.sites; }

  LatticeConfig config_;
  std::size_t count_ = 0;
  std::vector<int> occupations_;            // row-major, count_ x M
  std::vector<std::vector<std::uint64_t>> ways_;  // ways_[s][n]: fillings of s sites with n atoms
};

/// Throws ResourceError when the dimension exceeds `cap`.
FockBasis build_basis(const LatticeConfig& config, std::uint64_t cap = kDefaultDimensionCap);

/// Bases for every particle number 0..max_atoms on one lattice, used by the
/// sector-crossing operators.
class SectorChain {
 public:
  SectorChain(const LatticeConfig& lattice, int max_atoms,
              std::uint64_t cap = kDefaultDimensionCap);

  const FockBasis& sector(int atoms) const;
  int max_atoms() const noexcept { return static_cast<int>(sectors_.size()) - 1; }
  const LatticeConfig& lattice() const noexcept { return sectors_.front().config(); }

 private:
  std::vector<FockBasis> sectors_;
};

/// Quantum state over a FockBasis. `norm_sq` tracks the squared norm during
/// non-unitary evolution (it is 1 right after renormalize()).
struct QuantumState {
  CVector amplitudes;
  double norm_sq = 1.0;

  static QuantumState fock(const FockBasis& basis, std::span<const int> occ);
  static QuantumState from_amplitudes(CVector amps);  // normalizes

  double squared_norm() const { return amplitudes.squaredNorm(); }
  /// Scales to unit norm; throws NumericalError when the norm underflows.
  void renormalize();
};

// ---- sector-preserving operators -------------------------------------------

/// b^dagger_i b_j within one sector. Requires i != j.
SparseOperator hop_op(const FockBasis& basis, int i, int j);
SparseOperator number_op(const FockBasis& basis, int site);
/// Diagonal sum_i w_i n_i.
SparseOperator weighted_number_op(const FockBasis& basis, std::span<const cplx> weights);
SparseOperator weighted_number_op(const FockBasis& basis, std::span<const double> weights);
/// sum_i n_i (n_i - 1).
SparseOperator pair_occupation_op(const FockBasis& basis);

// ---- sector-crossing operators ---------------------------------------------

/// b_site mapping `from` (N atoms) to `to` (N-1 atoms).
SparseOperator annihilation_op(const FockBasis& from, const FockBasis& to, int site);
/// b^dagger_site mapping `from` (N atoms) to `to` (N+1 atoms).
SparseOperator creation_op(const FockBasis& from, const FockBasis& to, int site);

// ---- momentum space --------------------------------------------------------

/// Integer labels m of the momentum grid, ascending.
std::vector<int> momentum_grid(const LatticeConfig& lattice);
/// k = 2 pi m / (M a).
double wavenumber(const LatticeConfig& lattice, int m);
/// Maps any integer label onto the grid range (periodicity M).
int wrap_momentum(const LatticeConfig& lattice, int m);
/// Position x_j = (j + 1) a of 0-based site j.
double site_position(const LatticeConfig& lattice, int site);

/// b_k from N to N-1 atoms. Periodic boundary only.
SparseOperator momentum_annihilation_op(const FockBasis& from, const FockBasis& to, int m);
/// b^dagger_k = (b_k)^dagger from N to N+1 atoms.
SparseOperator momentum_creation_op(const FockBasis& from, const FockBasis& to, int m);
/// b^dagger_k b_k within the sector.
SparseOperator momentum_number_op(const FockBasis& basis, int m);
/// b^dagger_k b_p within the sector.
SparseOperator momentum_transfer_op(const FockBasis& basis, int m_create, int m_annihilate);

}  // namespace zeno
