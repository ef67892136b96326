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

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace zeno {

using cplx = std::complex<double>;
using Index = Eigen::Index;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr cplx kI{0.0, 1.0};

/// Complex sparse matrix over a Fock-basis ordering.
///
/// Square operators act within one particle sector; rectangular ones map
/// between sectors (rows = target dimension, cols = source dimension).
/// Explicit zeros are never stored.
class SparseOperator {
 public:
  using Matrix = Eigen::SparseMatrix<cplx, Eigen::RowMajor, int>;
  using Triplet = Eigen::Triplet<cplx, int>;

  SparseOperator() = default;
  SparseOperator(Index rows, Index cols);
  explicit SparseOperator(Matrix m);

  static SparseOperator from_triplets(Index rows, Index cols,
                                      const std::vector<Triplet>& triplets);
  static SparseOperator identity(Index dim);
  static SparseOperator diagonal(const CVector& diag);
  static SparseOperator from_dense(const CMatrix& dense);

  Index rows() const noexcept { return m_.rows(); }
  Index cols() const noexcept { return m_.cols(); }
  bool square() const noexcept { return m_.rows() == m_.cols(); }
  /// Dimension of a square operator; throws for sector maps.
  Index dim() const;
  Index nonzeros() const noexcept { return m_.nonZeros(); }

  const Matrix& matrix() const noexcept { return m_; }

  CVector apply(const CVector& v) const;
  /// out = A v without reallocating `out` when sizes match.
  void apply_into(const CVector& v, CVector& out) const;

  cplx coeff(Index row, Index col) const;
  cplx expectation(const CVector& psi) const;

  SparseOperator adjoint() const;
  CMatrix dense() const;

  bool is_diagonal() const;
  CVector diagonal_entries() const;
  /// Part of the operator with the diagonal removed.
  SparseOperator off_diagonal() const;

  /// max |A - A^dagger| over all entries.
  double hermiticity_defect() const;
  bool is_hermitian(double tol = 1e-12) const { return hermiticity_defect() <= tol; }

  /// Sets the hermitian flag after verifying it; throws ContractViolation otherwise.
  SparseOperator& mark_hermitian(double tol = 1e-12);
  bool hermitian_flag() const noexcept { return hermitian_; }

  /// Infinity norm (max absolute row sum), an upper bound on the spectral radius.
  double row_sum_norm() const;
  double max_abs() const;

  SparseOperator& operator+=(const SparseOperator& rhs);
  SparseOperator& operator-=(const SparseOperator& rhs);
  SparseOperator& operator*=(cplx s);

  friend SparseOperator operator+(SparseOperator a, const SparseOperator& b) { return a += b; }
  friend SparseOperator operator-(SparseOperator a, const SparseOperator& b) { return a -= b; }
  friend SparseOperator operator*(SparseOperator a, cplx s) { return a *= s; }
  friend SparseOperator operator*(cplx s, SparseOperator a) { return a *= s; }
  friend SparseOperator operator*(const SparseOperator& a, const SparseOperator& b);

 private:
  void prune_zeros();

  Matrix m_;
  bool hermitian_ = false;
};

/// max |A_ij - B_ij|; shapes must agree.
double max_abs_difference(const SparseOperator& a, const SparseOperator& b);

/// [A, B] = AB - BA.
SparseOperator commutator(const SparseOperator& a, const SparseOperator& b);

}  // namespace zeno
