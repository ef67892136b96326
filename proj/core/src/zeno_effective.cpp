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


#include "zeno/zeno_effective.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "zeno/errors.hpp"
#include "zeno/master_eq.hpp"

namespace zeno {

std::string to_string(EffectiveForm f) {
  switch (f) {
    case EffectiveForm::general: return "general";
    case EffectiveForm::density: return "density";
    case EffectiveForm::projected_raman: return "projected_raman";
  }
  return "?";
}

double EffectiveHamiltonian::anti_hermitian_max_eigenvalue() const {
  const CMatrix h = restricted();
  const CMatrix anti = -0.5 * kI * (h - h.adjoint());
  const CMatrix herm = 0.5 * (anti + anti.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

CMatrix EffectiveHamiltonian::restricted() const {
  if (support.empty()) return matrix.dense();
  const auto n = static_cast<Index>(support.size());
  CMatrix out(n, n);
  for (Index a = 0; a < n; ++a) {
    for (Index b = 0; b < n; ++b) out(a, b) = matrix.coeff(support[a], support[b]);
  }
  return out;
}

EffectiveHamiltonian build_effective_hamiltonian(const SparseOperator& H0, const SparseOperator& c, cplx c0,
                                                 double tol) {
  if (!H0.square() || !c.square() || H0.rows() != c.rows()) {
    throw ContractViolation("H0 and c must be square operators on one basis");
  }
  const double scale = std::max(1.0, std::abs(c0));
  bool in_spectrum = false;
  if (c.is_diagonal()) {
    const CVector d = c.diagonal_entries();
    for (Index i = 0; i < d.size() && !in_spectrum; ++i) in_spectrum = std::abs(d[i] - c0) <= tol * scale;
  } else {
    if (c.rows() > kDenseEigenCap) {
      throw ResourceError("spectrum check of a non-diagonal jump operator needs dimension <= " +
                          std::to_string(kDenseEigenCap));
    }
    Eigen::ComplexEigenSolver<CMatrix> es(c.dense(), false);
    const CVector ev = es.eigenvalues();
    for (Index i = 0; i < ev.size() && !in_spectrum; ++i) in_spectrum = std::abs(ev[i] - c0) <= tol * scale;
  }
  if (!in_spectrum) {
    std::ostringstream msg;
    msg << "reference eigenvalue c0 = " << c0 << " is not in the spectrum of the jump operator";
    throw ContractViolation(msg.str());
  }
  const SparseOperator cdc = c.adjoint() * c;
  SparseOperator inner = c * std::conj(c0) - SparseOperator::identity(c.rows()) * cplx{0.5 * std::norm(c0)} -
                         cdc * cplx{0.5};
  EffectiveHamiltonian out;
  out.matrix = H0 + inner * kI;
  out.c0 = c0;
  out.form = EffectiveForm::general;
  return out;
}

EffectiveHamiltonian build_effective_hamiltonian(const BhmParams& params, const MeasurementConfig& meas,
                                                 const FockBasis& basis) {
  const SparseOperator H0 = build_hamiltonian(params, basis);
  const SparseOperator c = build_jump_operator(meas, basis);
  EffectiveHamiltonian general = build_effective_hamiltonian(H0, c, meas.c0());
  if (!meas.real_pattern() || meas.zeno_eigenvalue.imag() != 0.0) return general;

  const SparseOperator shifted =
      build_measurement_operator(meas, basis) - SparseOperator::identity(basis.size()) * meas.zeno_eigenvalue;
  const SparseOperator density = H0 - (shifted * shifted) * cplx{0.0, meas.gamma()};
  const double defect = max_abs_difference(general.matrix, density);
  if (defect > 1e-12 * std::max(1.0, density.max_abs())) {
    std::ostringstream msg;
    msg << "general and density forms of H_eff differ by " << defect;
    throw NumericalError(msg.str());
  }
  general.matrix = density;
  general.form = EffectiveForm::density;
  return general;
}

SparseOperator build_boundary_hopping(const FockBasis& basis, const MeasurementConfig& meas) {
  meas.validate(basis.sites());
  SparseOperator tb(basis.size(), basis.size());
  for (const auto& [i, j] : lattice_bonds(basis.config())) {
    if (meas.pattern[static_cast<std::size_t>(i)] == meas.pattern[static_cast<std::size_t>(j)]) continue;
    tb += hop_op(basis, i, j);
    tb += hop_op(basis, j, i);
  }
  return tb;
}

EffectiveHamiltonian build_projected_raman_hamiltonian(const SparseOperator& H0, const FockBasis& basis,
                                                       const MeasurementConfig& meas,
                                                       const SubspacePartition& partition, std::size_t target,
                                                       double J, double gamma) {
  if (target >= partition.count()) throw ContractViolation("target subspace index out of range");
  if (H0.rows() != basis.size() || partition.dim() != basis.size()) {
    throw ContractViolation("H0, basis and partition must share one sector");
  }
  if (!(gamma > 0.0)) throw ContractViolation("projected Raman Hamiltonian needs gamma > 0");
  const ZenoSubspace& phi = partition[target];
  const SparseOperator tb = build_boundary_hopping(basis, meas);
  const SparseOperator raman = H0 - (tb * tb) * cplx{0.0, J * J / gamma};
  EffectiveHamiltonian out;
  out.matrix = phi.projector * raman * phi.projector;
  out.c0 = meas.jump_eigenvalue(phi.eigenvalue);
  out.form = EffectiveForm::projected_raman;
  out.support = phi.members;
  return out;
}

NonHermitianSeries evolve_nonhermitian(const CVector& psi0, const EffectiveHamiltonian& heff,
                                       const NonHermitianOptions& options) {
  if (!(options.t_final > 0.0) || !(options.dt > 0.0) || options.sample_points < 1) {
    throw ContractViolation("evolve_nonhermitian needs t_final > 0, dt > 0 and sample_points >= 1");
  }
  const SparseOperator& H = heff.matrix;
  if (psi0.size() != H.rows()) throw ContractViolation("initial state has the wrong dimension");
  const double n0 = psi0.squaredNorm();
  if (!(n0 > 0.0)) throw DegenerateInput("initial state has zero norm");
  if (options.dt * H.row_sum_norm() > kRk4StabilityLimit) {
    std::ostringstream msg;
    msg << "dt = " << options.dt << " exceeds the RK4 stability bound " << kRk4StabilityLimit / H.row_sum_norm();
    throw ContractViolation(msg.str());
  }

  NonHermitianSeries out;
  CVector psi = psi0 / std::sqrt(n0);
  CVector k1(psi.size()), k2(psi.size()), k3(psi.size()), k4(psi.size()), tmp(psi.size());
  auto f = [&](const CVector& v, CVector& o) {
    H.apply_into(v, o);
    o *= -kI;
  };
  double raw = 1.0;
  auto store = [&](double t) {
    out.times.push_back(t);
    out.raw_norm_sq.push_back(raw);
    out.states.push_back(options.renormalize ? psi : CVector(psi * std::sqrt(raw)));
  };
  store(0.0);
  const double interval = options.t_final / options.sample_points;
  const int n_sub = std::max(1, static_cast<int>(std::ceil(interval / options.dt - 1e-9)));
  const double h = interval / n_sub;
  for (int s = 1; s <= options.sample_points; ++s) {
    for (int k = 0; k < n_sub; ++k) {
      f(psi, k1);
      tmp = psi + 0.5 * h * k1;
      f(tmp, k2);
      tmp = psi + 0.5 * h * k2;
      f(tmp, k3);
      tmp = psi + h * k3;
      f(tmp, k4);
      psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    const double nrm = psi.squaredNorm();
    if (!(nrm >= 1e-300)) {
      throw NumericalError("norm underflow in non-Hermitian evolution at t = " + std::to_string(s * interval));
    }
    psi /= std::sqrt(nrm);
    raw *= nrm;
    store(s * interval);
  }
  return out;
}

Spectrum spectrum(const EffectiveHamiltonian& heff, Index cap) {
  const CMatrix h = heff.restricted();
  if (h.rows() > cap) {
    throw ResourceError("dense spectrum of dimension " + std::to_string(h.rows()) + " exceeds the cap " +
                        std::to_string(cap));
  }
  Eigen::ComplexEigenSolver<CMatrix> es(h, true);
  if (es.info() != Eigen::Success) throw NumericalError("eigensolver did not converge");
  const Index n = h.rows();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  const CVector& ev = es.eigenvalues();
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    const double ia = std::abs(ev[a].imag()), ib = std::abs(ev[b].imag());
    return ia != ib ? ia < ib : ev[a].real() < ev[b].real();
  });
  Spectrum out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  const double hnorm = std::max(1e-300, h.cwiseAbs().rowwise().sum().maxCoeff());
  for (Index k = 0; k < n; ++k) {
    const Index src = order[static_cast<std::size_t>(k)];
    out.eigenvalues[k] = ev[src];
    CVector v = es.eigenvectors().col(src);
    v.normalize();
    out.eigenvectors.col(k) = v;
    out.max_residual = std::max(out.max_residual, (h * v - ev[src] * v).norm());
  }
  if (out.max_residual > 1e-8 * hnorm) {
    std::ostringstream msg;
    msg << "eigen-residual " << out.max_residual << " exceeds 1e-8 ||H||";
    throw NumericalError(msg.str());
  }
  return out;
}

std::array<Index, 3> three_site_indices(const FockBasis& basis) {
  if (basis.sites() != 3 || basis.atoms() != 3) {
    throw ContractViolation("the three-site solution needs N = 3 atoms on M = 3 sites");
  }
  const Occupation a{2, 1, 0}, b{1, 1, 1}, c{0, 1, 2};
  return {basis.index_of(a), basis.index_of(b), basis.index_of(c)};
}

Eigen::Matrix3cd three_site_eigenvectors() {
  const double r2 = std::sqrt(2.0);
  Eigen::Matrix3cd v;
  v.col(0) << 0.5, -r2 / 2.0, 0.5;
  v.col(1) << 1.0 / r2, 0.0, -1.0 / r2;
  v.col(2) << 0.5, r2 / 2.0, 0.5;
  return v;
}

Eigen::Vector3cd three_site_analytic(const Eigen::Vector3cd& psi0, double J, double gamma, double t) {
  if (!(gamma > 0.0)) throw ContractViolation("three_site_analytic needs gamma > 0");
  const Eigen::Matrix3cd v = three_site_eigenvectors();
  const Eigen::Vector3cd z = v.adjoint() * psi0;
  if (z.cwiseAbs().maxCoeff() == 0.0) throw DegenerateInput("initial state has no overlap with the subspace");
  Eigen::Vector3cd out = Eigen::Vector3cd::Zero();
  for (int i = 0; i < 3; ++i) {
    out += z[i] * std::exp(-kThreeSiteRelativeRates[static_cast<std::size_t>(i)] * J * J * t / gamma) * v.col(i);
  }
  const double n = out.norm();
  if (!(n > 0.0)) throw DegenerateInput("analytic amplitudes vanish");
  return out / n;
}

}  // namespace zeno
