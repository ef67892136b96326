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

#include "zeno/sparse_operator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "zeno/errors.hpp"

namespace zeno {

SparseOperator::SparseOperator(Index rows, Index cols) : m_(rows, cols) {}

SparseOperator::SparseOperator(Matrix m) : m_(std::move(m)) {
  prune_zeros();
}

SparseOperator SparseOperator::from_triplets(Index rows, Index cols,
                                             const std::vector<Triplet>& triplets) {
  Matrix m(rows, cols);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return SparseOperator(std::move(m));
}

SparseOperator SparseOperator::identity(Index dim) {
  Matrix m(dim, dim);
  m.setIdentity();
  SparseOperator op(std::move(m));
  op.hermitian_ = true;
  return op;
}

SparseOperator SparseOperator::diagonal(const CVector& diag) {
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(diag.size()));
  for (Index i = 0; i < diag.size(); ++i) {
    if (diag[i] != cplx{}) t.emplace_back(static_cast<int>(i), static_cast<int>(i), diag[i]);
  }
  return from_triplets(diag.size(), diag.size(), t);
}

SparseOperator SparseOperator::from_dense(const CMatrix& dense) {
  return SparseOperator(Matrix(dense.sparseView(0.0, 0.0)));
}

Index SparseOperator::dim() const {
  if (!square()) {
    throw ContractViolation("dim() requested on a sector-crossing operator (" +
                            std::to_string(rows()) + "x" + std::to_string(cols()) + ")");
  }
  return rows();
}

CVector SparseOperator::apply(const CVector& v) const {
  if (v.size() != cols()) {
    throw ContractViolation("operator/vector dimension mismatch: " + std::to_string(cols()) +
                            " vs " + std::to_string(v.size()));
  }
  return m_ * v;
}

void SparseOperator::apply_into(const CVector& v, CVector& out) const {
  out.resize(rows());
  out.noalias() = m_ * v;
}

cplx SparseOperator::coeff(Index row, Index col) const { return m_.coeff(row, col); }

cplx SparseOperator::expectation(const CVector& psi) const {
  return psi.dot(apply(psi));
}

SparseOperator SparseOperator::adjoint() const {
  SparseOperator out(Matrix(m_.adjoint()));
  out.hermitian_ = hermitian_;
  return out;
}

CMatrix SparseOperator::dense() const { return CMatrix(m_); }

bool SparseOperator::is_diagonal() const {
  for (int r = 0; r < m_.outerSize(); ++r) {
    for (Matrix::InnerIterator it(m_, r); it; ++it) {
      if (it.col() != it.row()) return false;
    }
  }
  return true;
}

CVector SparseOperator::diagonal_entries() const {
  CVector d = CVector::Zero(std::min(rows(), cols()));
  for (int r = 0; r < m_.outerSize(); ++r) {
    for (Matrix::InnerIterator it(m_, r); it; ++it) {
      if (it.col() == it.row()) d[r] = it.value();
    }
  }
  return d;
}

SparseOperator SparseOperator::off_diagonal() const {
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(m_.nonZeros()));
  for (int r = 0; r < m_.outerSize(); ++r) {
    for (Matrix::InnerIterator it(m_, r); it; ++it) {
      if (it.col() != it.row()) t.emplace_back(it.row(), it.col(), it.value());
    }
  }
  return from_triplets(rows(), cols(), t);
}

double SparseOperator::hermiticity_defect() const {
  if (!square()) return INFINITY;
  return max_abs_difference(*this, adjoint());
}

SparseOperator& SparseOperator::mark_hermitian(double tol) {
  const double defect = hermiticity_defect();
  if (defect > tol) {
    throw ContractViolation("operator flagged hermitian but |A - A^dagger|_max = " +
                            std::to_string(defect));
  }
  hermitian_ = true;
  return *this;
}

double SparseOperator::row_sum_norm() const {
  double best = 0.0;
  for (int r = 0; r < m_.outerSize(); ++r) {
    double s = 0.0;
    for (Matrix::InnerIterator it(m_, r); it; ++it) s += std::abs(it.value());
    best = std::max(best, s);
  }
  return best;
}

double SparseOperator::max_abs() const {
  double best = 0.0;
  for (Index k = 0; k < m_.nonZeros(); ++k) best = std::max(best, std::abs(m_.valuePtr()[k]));
  return best;
}

SparseOperator& SparseOperator::operator+=(const SparseOperator& rhs) {
  if (rows() != rhs.rows() || cols() != rhs.cols()) {
    throw ContractViolation("operator shape mismatch in +=");
  }
  m_ += rhs.m_;
  prune_zeros();
  hermitian_ = hermitian_ && rhs.hermitian_;
  return *this;
}

SparseOperator& SparseOperator::operator-=(const SparseOperator& rhs) {
  if (rows() != rhs.rows() || cols() != rhs.cols()) {
    throw ContractViolation("operator shape mismatch in -=");
  }
  m_ -= rhs.m_;
  prune_zeros();
  hermitian_ = hermitian_ && rhs.hermitian_;
  return *this;
}

SparseOperator& SparseOperator::operator*=(cplx s) {
  m_ *= s;
  prune_zeros();
  hermitian_ = hermitian_ && s.imag() == 0.0;
  return *this;
}

SparseOperator operator*(const SparseOperator& a, const SparseOperator& b) {
  if (a.cols() != b.rows()) {
    throw ContractViolation("operator product shape mismatch: " + std::to_string(a.cols()) +
                            " vs " + std::to_string(b.rows()));
  }
  return SparseOperator(SparseOperator::Matrix(a.m_ * b.m_));
}

void SparseOperator::prune_zeros() {
  m_.prune(cplx{0.0, 0.0}, 0.0);
  m_.makeCompressed();
}

double max_abs_difference(const SparseOperator& a, const SparseOperator& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ContractViolation("operator shape mismatch in comparison");
  }
  const SparseOperator::Matrix diff = a.matrix() - b.matrix();
  double best = 0.0;
  for (Index k = 0; k < diff.nonZeros(); ++k) best = std::max(best, std::abs(diff.valuePtr()[k]));
  return best;
}

SparseOperator commutator(const SparseOperator& a, const SparseOperator& b) {
  return a * b - b * a;
}

}  // namespace zeno
