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

// Unconditioned Lindblad dynamics in Zeno-subspace block form.
//
// For a jump operator with c P_m = c_m P_m the master equation splits into
//
//   d/dt rho_mn = -i sum_r (H_mr rho_rn - rho_mr H_rn)
//                 + [c_m c_n^* - (|c_m|^2 + |c_n|^2)/2] rho_mn,
//
// so diagonal blocks carry no dissipation and coherences between different
// subspaces decay at rate |c_m - c_n|^2 / 2.

#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "zeno/model.hpp"

namespace zeno {

class BlockDensityMatrix {
 public:
  BlockDensityMatrix() = default;
  /// All-zero blocks shaped by the partition.
  explicit BlockDensityMatrix(std::shared_ptr<const SubspacePartition> partition);

  static BlockDensityMatrix from_dense(std::shared_ptr<const SubspacePartition> partition,
                                       const CMatrix& rho);
  static BlockDensityMatrix pure(std::shared_ptr<const SubspacePartition> partition,
                                 const CVector& psi);

  const SubspacePartition& partition() const { return *partition_; }
  const std::shared_ptr<const SubspacePartition>& partition_ptr() const { return partition_; }
  std::size_t count() const noexcept { return count_; }

  CMatrix& block(std::size_t m, std::size_t n) { return blocks_[m * count_ + n]; }
  const CMatrix& block(std::size_t m, std::size_t n) const { return blocks_[m * count_ + n]; }

  CMatrix to_dense() const;
  cplx trace() const;
  /// Tr rho_mm for every subspace.
  std::vector<double> populations() const;
  /// max over blocks of |rho_mn - rho_nm^dagger|.
  double hermiticity_defect() const;
  /// Smallest eigenvalue of the assembled (hermitized) matrix.
  double min_eigenvalue() const;
  double max_abs() const;
  /// Frobenius norm of one block.
  double block_norm(std::size_t m, std::size_t n) const { return block(m, n).norm(); }

  /// this += a * x (same partition).
  BlockDensityMatrix& axpy(cplx a, const BlockDensityMatrix& x);
  BlockDensityMatrix& operator*=(cplx s);
  void set_zero();

  /// Keeps only rho_00 + sum_{r != 0} (rho_0r + rho_r0) for target subspace 0.
  void project_consistent(std::size_t target);

 private:
  std::shared_ptr<const SubspacePartition> partition_;
  std::size_t count_ = 0;
  std::vector<CMatrix> blocks_;
};

/// Right-hand side of the master equation for a fixed (H_0, c).
class LindbladGenerator {
 public:
  /// `c` must be diagonal and constant on every subspace of `partition`.
  LindbladGenerator(const SparseOperator& H0, const SparseOperator& c,
                    std::shared_ptr<const SubspacePartition> partition);

  /// Block form (sum over r restricted to nonzero H blocks).
  BlockDensityMatrix rhs(const BlockDensityMatrix& rho) const;
  void rhs_into(const BlockDensityMatrix& rho, BlockDensityMatrix& out) const;
  /// Unblocked form on the assembled matrix, projected back onto blocks.
  BlockDensityMatrix rhs_unblocked(const BlockDensityMatrix& rho) const;
  CMatrix rhs_dense(const CMatrix& rho) const;

  /// c_m for each subspace.
  const std::vector<cplx>& jump_eigenvalues() const noexcept { return c_; }
  /// c_m c_n^* - (|c_m|^2 + |c_n|^2)/2.
  cplx dissipative_coefficient(std::size_t m, std::size_t n) const;
  const CMatrix& hamiltonian_block(std::size_t m, std::size_t n) const { return h_[m * count_ + n]; }
  /// Row-sum bound on the generator's spectral radius.
  double rate_bound() const noexcept { return rate_bound_; }
  const std::shared_ptr<const SubspacePartition>& partition_ptr() const { return partition_; }

 private:
  std::shared_ptr<const SubspacePartition> partition_;
  std::size_t count_ = 0;
  std::vector<CMatrix> h_;
  std::vector<char> h_nonzero_;
  std::vector<cplx> c_;
  CMatrix h_dense_;
  CMatrix c_dense_;
  double rate_bound_ = 0.0;
};

/// Convenience wrapper around LindbladGenerator::rhs.
BlockDensityMatrix lindblad_rhs(const BlockDensityMatrix& rho, const SparseOperator& H0,
                                const SparseOperator& c);

struct LindbladOptions {
  double t_final = 1.0;
  double dt = 1e-3;
  int sample_points = 200;  // grid t_k = k t_final / sample_points, k = 0..sample_points
  /// When set, every step is followed by project_consistent(target): the
  /// measurement-record-consistent evolution. Trace is then not conserved.
  std::optional<std::size_t> consistent_subspace;
};

struct LindbladSeries {
  std::vector<double> times;
  std::vector<BlockDensityMatrix> states;
  double max_trace_drift = 0.0;
};

inline constexpr double kTraceDriftLimit = 1e-5;
inline constexpr double kRk4StabilityLimit = 2.5;

/// Fixed-step RK4. Throws ContractViolation when dt * rate_bound exceeds the
/// RK4 stability limit and IntegrationFailure when |Tr rho - 1| > 1e-5.
LindbladSeries integrate_lindblad(const BlockDensityMatrix& rho0, const LindbladGenerator& gen,
                                  const LindbladOptions& options);
LindbladSeries integrate_lindblad(const BlockDensityMatrix& rho0, const SparseOperator& H0,
                                  const SparseOperator& c, const LindbladOptions& options);

/// Coherence blocks from the diagonal blocks, first order in K/lambda^2:
/// rho_mn = i (H_mn rho_nn - rho_mm H_mn) / (c_m c_n^* - (|c_m|^2 + |c_n|^2)/2).
/// Diagonal blocks are copied from `rho`. Throws SingularityError for a
/// vanishing denominator.
BlockDensityMatrix adiabatic_eliminate(const BlockDensityMatrix& rho, const LindbladGenerator& gen);

struct PurityReport {
  double total = 0.0;      // Tr rho^2
  double zeno_part = 0.0;  // Tr(rho_00^2 + sum_{m != 0} rho_0m rho_m0)
  double remainder = 0.0;  // total - zeno_part
};

PurityReport purity(const BlockDensityMatrix& rho, std::size_t target = 0);

/// (1/2) || a - b ||_1 for Hermitian matrices.
double trace_distance(const CMatrix& a, const CMatrix& b);

}  // namespace zeno
