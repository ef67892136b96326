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

#include "zeno/master_eq.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "zeno/errors.hpp"

namespace zeno {

namespace {

void require_same_partition(const BlockDensityMatrix& a, const BlockDensityMatrix& b) {
  if (a.partition_ptr() != b.partition_ptr()) {
    throw ContractViolation("block density matrices use different subspace partitions");
  }
}

int substeps(double interval, double dt) {
  return std::max(1, static_cast<int>(std::ceil(interval / dt - 1e-9)));
}

}  // namespace

BlockDensityMatrix::BlockDensityMatrix(std::shared_ptr<const SubspacePartition> partition)
    : partition_(std::move(partition)), count_(partition_->count()) {
  blocks_.reserve(count_ * count_);
  for (std::size_t m = 0; m < count_; ++m) {
    for (std::size_t n = 0; n < count_; ++n) {
      blocks_.push_back(CMatrix::Zero((*partition_)[m].size(), (*partition_)[n].size()));
    }
  }
}

BlockDensityMatrix BlockDensityMatrix::from_dense(std::shared_ptr<const SubspacePartition> partition,
                                                  const CMatrix& rho) {
  if (rho.rows() != partition->dim() || rho.cols() != partition->dim()) {
    throw ContractViolation("density matrix shape does not match the partition");
  }
  BlockDensityMatrix out(std::move(partition));
  const auto& p = out.partition();
  for (std::size_t m = 0; m < out.count_; ++m) {
    const auto& rows = p[m].members;
    for (std::size_t n = 0; n < out.count_; ++n) {
      const auto& cols = p[n].members;
      CMatrix& b = out.block(m, n);
      for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < cols.size(); ++j) {
          b(static_cast<Index>(i), static_cast<Index>(j)) = rho(rows[i], cols[j]);
        }
      }
    }
  }
  return out;
}

BlockDensityMatrix BlockDensityMatrix::pure(std::shared_ptr<const SubspacePartition> partition,
                                            const CVector& psi) {
  if (psi.size() != partition->dim()) throw ContractViolation("state dimension does not match partition");
  BlockDensityMatrix out(std::move(partition));
  const auto& p = out.partition();
  std::vector<CVector> parts(out.count_);
  for (std::size_t m = 0; m < out.count_; ++m) {
    parts[m].resize(p[m].size());
    for (std::size_t i = 0; i < p[m].members.size(); ++i) parts[m][static_cast<Index>(i)] = psi[p[m].members[i]];
  }
  for (std::size_t m = 0; m < out.count_; ++m) {
    for (std::size_t n = 0; n < out.count_; ++n) out.block(m, n) = parts[m] * parts[n].adjoint();
  }
  return out;
}

CMatrix BlockDensityMatrix::to_dense() const {
  const auto& p = partition();
  CMatrix rho = CMatrix::Zero(p.dim(), p.dim());
  for (std::size_t m = 0; m < count_; ++m) {
    for (std::size_t n = 0; n < count_; ++n) {
      const CMatrix& b = block(m, n);
      for (std::size_t i = 0; i < p[m].members.size(); ++i) {
        for (std::size_t j = 0; j < p[n].members.size(); ++j) {
          rho(p[m].members[i], p[n].members[j]) = b(static_cast<Index>(i), static_cast<Index>(j));
        }
      }
    }
  }
  return rho;
}

cplx BlockDensityMatrix::trace() const {
  cplx t{};
  for (std::size_t m = 0; m < count_; ++m) t += block(m, m).trace();
  return t;
}

std::vector<double> BlockDensityMatrix::populations() const {
  std::vector<double> pops(count_);
  for (std::size_t m = 0; m < count_; ++m) pops[m] = block(m, m).trace().real();
  return pops;
}

double BlockDensityMatrix::hermiticity_defect() const {
  double worst = 0.0;
  for (std::size_t m = 0; m < count_; ++m) {
    for (std::size_t n = m; n < count_; ++n) {
      const CMatrix& a = block(m, n);
      if (a.size() == 0) continue;
      worst = std::max(worst, (a - block(n, m).adjoint()).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

double BlockDensityMatrix::min_eigenvalue() const {
  const CMatrix rho = to_dense();
  const CMatrix herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double BlockDensityMatrix::max_abs() const {
  double worst = 0.0;
  for (const CMatrix& b : blocks_) {
    if (b.size() > 0) worst = std::max(worst, b.cwiseAbs().maxCoeff());
  }
  return worst;
}

BlockDensityMatrix& BlockDensityMatrix::axpy(cplx a, const BlockDensityMatrix& x) {
  require_same_partition(*this, x);
  for (std::size_t k = 0; k < blocks_.size(); ++k) blocks_[k] += a * x.blocks_[k];
  return *this;
}

BlockDensityMatrix& BlockDensityMatrix::operator*=(cplx s) {
  for (CMatrix& b : blocks_) b *= s;
  return *this;
}

void BlockDensityMatrix::set_zero() {
  for (CMatrix& b : blocks_) b.setZero();
}

void BlockDensityMatrix::project_consistent(std::size_t target) {
  if (target >= count_) throw ContractViolation("target subspace index out of range");
  for (std::size_t m = 0; m < count_; ++m) {
    if (m == target) continue;
    for (std::size_t n = 0; n < count_; ++n) {
      if (n != target) block(m, n).setZero();
    }
  }
}

LindbladGenerator::LindbladGenerator(const SparseOperator& H0, const SparseOperator& c,
                                     std::shared_ptr<const SubspacePartition> partition)
    : partition_(std::move(partition)), count_(partition_->count()) {
  const auto& p = *partition_;
  if (H0.rows() != p.dim() || H0.cols() != p.dim() || c.rows() != p.dim() || c.cols() != p.dim()) {
    throw ContractViolation("operators and density matrix do not share one basis");
  }
  if (!c.is_diagonal()) {
    throw ContractViolation("block master equation needs a jump operator diagonal in the Fock basis");
  }
  const CVector cd = c.diagonal_entries();
  c_.resize(count_);
  for (std::size_t m = 0; m < count_; ++m) {
    const auto& mem = p[m].members;
    c_[m] = mem.empty() ? cplx{} : cd[mem.front()];
    for (Index i : mem) {
      if (std::abs(cd[i] - c_[m]) > 1e-9 * std::max(1.0, std::abs(c_[m]))) {
        throw ContractViolation("jump operator is not constant on Zeno subspace " + std::to_string(m));
      }
    }
  }

  h_dense_ = H0.dense();
  c_dense_ = c.dense();
  h_.reserve(count_ * count_);
  h_nonzero_.reserve(count_ * count_);
  for (std::size_t m = 0; m < count_; ++m) {
    for (std::size_t n = 0; n < count_; ++n) {
      CMatrix b(p[m].size(), p[n].size());
      for (std::size_t i = 0; i < p[m].members.size(); ++i) {
        for (std::size_t j = 0; j < p[n].members.size(); ++j) {
          b(static_cast<Index>(i), static_cast<Index>(j)) = h_dense_(p[m].members[i], p[n].members[j]);
        }
      }
      h_nonzero_.push_back(b.size() > 0 && b.cwiseAbs().maxCoeff() > 0.0 ? 1 : 0);
      h_.push_back(std::move(b));
    }
  }

  double max_coef = 0.0;
  for (std::size_t m = 0; m < count_; ++m) {
    for (std::size_t n = 0; n < count_; ++n) max_coef = std::max(max_coef, std::abs(dissipative_coefficient(m, n)));
  }
  rate_bound_ = 2.0 * H0.row_sum_norm() + max_coef;
}

cplx LindbladGenerator::dissipative_coefficient(std::size_t m, std::size_t n) const {
  return c_[m] * std::conj(c_[n]) - 0.5 * (std::norm(c_[m]) + std::norm(c_[n]));
}

void LindbladGenerator::rhs_into(const BlockDensityMatrix& rho, BlockDensityMatrix& out) const {
  if (rho.partition_ptr() != partition_ || out.partition_ptr() != partition_) {
    throw ContractViolation("density matrix and generator use different partitions");
  }
  for (std::size_t m = 0; m < count_; ++m) {
    for (std::size_t n = 0; n < count_; ++n) {
      CMatrix& o = out.block(m, n);
      if (o.size() == 0) continue;
      o = dissipative_coefficient(m, n) * rho.block(m, n);
      for (std::size_t r = 0; r < count_; ++r) {
        if (h_nonzero_[m * count_ + r]) o.noalias() -= kI * (h_[m * count_ + r] * rho.block(r, n));
        if (h_nonzero_[r * count_ + n]) o.noalias() += kI * (rho.block(m, r) * h_[r * count_ + n]);
      }
    }
  }
}

BlockDensityMatrix LindbladGenerator::rhs(const BlockDensityMatrix& rho) const {
  BlockDensityMatrix out(partition_);
  rhs_into(rho, out);
  return out;
}

CMatrix LindbladGenerator::rhs_dense(const CMatrix& rho) const {
  const CMatrix cdc = c_dense_.adjoint() * c_dense_;
  return -kI * (h_dense_ * rho - rho * h_dense_) + c_dense_ * rho * c_dense_.adjoint() -
         0.5 * (cdc * rho + rho * cdc);
}

BlockDensityMatrix LindbladGenerator::rhs_unblocked(const BlockDensityMatrix& rho) const {
  return BlockDensityMatrix::from_dense(partition_, rhs_dense(rho.to_dense()));
}

BlockDensityMatrix lindblad_rhs(const BlockDensityMatrix& rho, const SparseOperator& H0,
                                const SparseOperator& c) {
  return LindbladGenerator(H0, c, rho.partition_ptr()).rhs(rho);
}

LindbladSeries integrate_lindblad(const BlockDensityMatrix& rho0, const LindbladGenerator& gen,
                                  const LindbladOptions& options) {
  if (!(options.t_final > 0.0) || !(options.dt > 0.0) || options.sample_points < 1) {
    throw ContractViolation("integrate_lindblad needs t_final > 0, dt > 0 and sample_points >= 1");
  }
  if (options.dt * gen.rate_bound() > kRk4StabilityLimit) {
    std::ostringstream msg;
    msg << "dt = " << options.dt << " exceeds the RK4 stability bound "
        << kRk4StabilityLimit / gen.rate_bound() << " for this generator";
    throw ContractViolation(msg.str());
  }
  if (rho0.partition_ptr() != gen.partition_ptr()) {
    throw ContractViolation("initial density matrix and generator use different partitions");
  }

  LindbladSeries series;
  series.times.reserve(static_cast<std::size_t>(options.sample_points) + 1);
  series.states.reserve(static_cast<std::size_t>(options.sample_points) + 1);

  BlockDensityMatrix y = rho0;
  if (options.consistent_subspace) y.project_consistent(*options.consistent_subspace);
  const cplx trace0 = y.trace();
  BlockDensityMatrix k1(gen.partition_ptr()), k2(k1), k3(k1), k4(k1), tmp(k1);

  series.times.push_back(0.0);
  series.states.push_back(y);
  const double interval = options.t_final / options.sample_points;
  const int n_sub = substeps(interval, options.dt);
  const double h = interval / n_sub;

  for (int s = 1; s <= options.sample_points; ++s) {
    for (int step = 0; step < n_sub; ++step) {
      gen.rhs_into(y, k1);
      tmp = y;
      tmp.axpy(0.5 * h, k1);
      gen.rhs_into(tmp, k2);
      tmp = y;
      tmp.axpy(0.5 * h, k2);
      gen.rhs_into(tmp, k3);
      tmp = y;
      tmp.axpy(h, k3);
      gen.rhs_into(tmp, k4);
      y.axpy(h / 6.0, k1);
      y.axpy(h / 3.0, k2);
      y.axpy(h / 3.0, k3);
      y.axpy(h / 6.0, k4);
      if (options.consistent_subspace) y.project_consistent(*options.consistent_subspace);
    }
    if (!options.consistent_subspace) {
      const double drift = std::abs(y.trace() - trace0);
      series.max_trace_drift = std::max(series.max_trace_drift, drift);
      if (drift > kTraceDriftLimit) {
        std::ostringstream msg;
        msg << "trace drift " << drift << " at t = " << s * interval << " exceeds " << kTraceDriftLimit
            << "; reduce dt";
        throw IntegrationFailure(msg.str());
      }
    }
    series.times.push_back(s * interval);
    series.states.push_back(y);
  }
  return series;
}

LindbladSeries integrate_lindblad(const BlockDensityMatrix& rho0, const SparseOperator& H0,
                                  const SparseOperator& c, const LindbladOptions& options) {
  return integrate_lindblad(rho0, LindbladGenerator(H0, c, rho0.partition_ptr()), options);
}

BlockDensityMatrix adiabatic_eliminate(const BlockDensityMatrix& rho, const LindbladGenerator& gen) {
  if (rho.partition_ptr() != gen.partition_ptr()) {
    throw ContractViolation("density matrix and generator use different partitions");
  }
  BlockDensityMatrix out(gen.partition_ptr());
  const std::size_t count = rho.count();
  double scale = 0.0;
  for (cplx c : gen.jump_eigenvalues()) scale = std::max(scale, std::norm(c));
  for (std::size_t m = 0; m < count; ++m) out.block(m, m) = rho.block(m, m);
  for (std::size_t m = 0; m < count; ++m) {
    for (std::size_t n = 0; n < count; ++n) {
      if (m == n || out.block(m, n).size() == 0) continue;
      const cplx denom = gen.dissipative_coefficient(m, n);
      if (std::abs(denom) <= 1e-14 * scale || denom == cplx{}) {
        throw SingularityError("vanishing dissipative coefficient for coherence block (" +
                               std::to_string(m) + ", " + std::to_string(n) + ")");
      }
      const CMatrix& h = gen.hamiltonian_block(m, n);
      out.block(m, n) = kI * (h * rho.block(n, n) - rho.block(m, m) * h) / denom;
    }
  }
  return out;
}

PurityReport purity(const BlockDensityMatrix& rho, std::size_t target) {
  if (target >= rho.count()) throw ContractViolation("purity target subspace out of range");
  PurityReport r;
  const CMatrix dense = rho.to_dense();
  r.total = (dense * dense).trace().real();
  cplx zeno = (rho.block(target, target) * rho.block(target, target)).trace();
  for (std::size_t m = 0; m < rho.count(); ++m) {
    if (m == target) continue;
    if (rho.block(target, m).size() == 0) continue;
    zeno += (rho.block(target, m) * rho.block(m, target)).trace();
  }
  r.zeno_part = zeno.real();
  r.remainder = r.total - r.zeno_part;
  return r;
}

double trace_distance(const CMatrix& a, const CMatrix& b) {
  const CMatrix d = a - b;
  const CMatrix herm = 0.5 * (d + d.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(herm, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace zeno
