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

#include "zeno/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "zeno/errors.hpp"

namespace zeno {

void BhmParams::validate() const {
  lattice.validate();
  if (!(J >= 0.0) || !std::isfinite(J)) throw ValidationError("J", "tunnelling must be finite and >= 0");
  if (!std::isfinite(U)) throw ValidationError("U", "interaction must be finite");
}

std::vector<std::pair<int, int>> lattice_bonds(const LatticeConfig& lattice) {
  std::vector<std::pair<int, int>> bonds;
  const int m = lattice.sites;
  for (int j = 0; j + 1 < m; ++j) bonds.emplace_back(j, j + 1);
  if (lattice.boundary == Boundary::periodic && m >= 2) bonds.emplace_back(m - 1, 0);
  return bonds;
}

std::string to_string(Pattern p) {
  switch (p) {
    case Pattern::middle_site: return "middle_site";
    case Pattern::even_sites: return "even_sites";
    case Pattern::all_sites: return "all_sites";
  }
  return "?";
}

Pattern pattern_from_string(const std::string& s) {
  if (s == "middle_site") return Pattern::middle_site;
  if (s == "even_sites") return Pattern::even_sites;
  if (s == "all_sites") return Pattern::all_sites;
  throw ValidationError("pattern", "unknown pattern \"" + s +
                                       "\" (expected middle_site, even_sites, all_sites or a vector)");
}

std::vector<cplx> pattern_weights(Pattern p, int sites) {
  std::vector<cplx> w(static_cast<std::size_t>(sites), cplx{});
  switch (p) {
    case Pattern::middle_site:
      w[static_cast<std::size_t>((sites + 1) / 2 - 1)] = 1.0;
      break;
    case Pattern::even_sites:
      for (int label = 2; label <= sites; label += 2) w[static_cast<std::size_t>(label - 1)] = 1.0;
      break;
    case Pattern::all_sites:
      std::fill(w.begin(), w.end(), cplx{1.0});
      break;
  }
  return w;
}

bool MeasurementConfig::real_pattern() const {
  return std::all_of(pattern.begin(), pattern.end(), [](cplx a) { return a.imag() == 0.0; });
}

void MeasurementConfig::validate(int sites) const {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw ValidationError("kappa", "must be positive");
  if (!std::isfinite(C.real()) || !std::isfinite(C.imag())) throw ValidationError("C", "must be finite");
  if (static_cast<int>(pattern.size()) != sites) {
    throw ValidationError("pattern", "length " + std::to_string(pattern.size()) +
                                         " does not match M=" + std::to_string(sites));
  }
}

MeasurementConfig measurement_for_gamma(double gamma, std::vector<cplx> pattern,
                                        cplx zeno_eigenvalue) {
  MeasurementConfig m;
  m.kappa = gamma;
  m.C = 1.0;
  m.pattern = std::move(pattern);
  m.zeno_eigenvalue = zeno_eigenvalue;
  return m;
}

SparseOperator build_hopping_operator(const FockBasis& basis) {
  SparseOperator t(basis.size(), basis.size());
  for (const auto& [i, j] : lattice_bonds(basis.config())) {
    t += hop_op(basis, i, j);
    t += hop_op(basis, j, i);
  }
  t.mark_hermitian();
  return t;
}

SparseOperator build_hamiltonian(const BhmParams& params, const FockBasis& basis) {
  params.validate();
  const LatticeConfig& a = params.lattice;
  const LatticeConfig& b = basis.config();
  if (a.sites != b.sites || a.atoms != b.atoms || a.boundary != b.boundary) {
    throw ContractViolation("basis does not match the Hamiltonian's lattice configuration");
  }
  SparseOperator h = build_hopping_operator(basis) * cplx{-params.J};
  if (params.U != 0.0) h += pair_occupation_op(basis) * cplx{0.5 * params.U};
  h.mark_hermitian();
  return h;
}

SparseOperator build_measurement_operator(const MeasurementConfig& meas, const FockBasis& basis) {
  meas.validate(basis.sites());
  return weighted_number_op(basis, std::span<const cplx>(meas.pattern));
}

SparseOperator build_jump_operator(const MeasurementConfig& meas, const FockBasis& basis) {
  return build_measurement_operator(meas, basis) * (std::sqrt(2.0 * meas.kappa) * meas.C);
}

SubspacePartition::SubspacePartition(std::vector<ZenoSubspace> subspaces, Index dim)
    : subspaces_(std::move(subspaces)),
      owner_(static_cast<std::size_t>(dim), 0),
      local_(static_cast<std::size_t>(dim), 0) {
  for (std::size_t m = 0; m < subspaces_.size(); ++m) {
    const auto& mem = subspaces_[m].members;
    for (std::size_t k = 0; k < mem.size(); ++k) {
      owner_[static_cast<std::size_t>(mem[k])] = m;
      local_[static_cast<std::size_t>(mem[k])] = static_cast<Index>(k);
    }
  }
}

std::optional<std::size_t> SubspacePartition::find(cplx o, double tol) const {
  for (std::size_t m = 0; m < subspaces_.size(); ++m) {
    if (std::abs(subspaces_[m].eigenvalue - o) <= tol) return m;
  }
  return std::nullopt;
}

std::vector<double> SubspacePartition::populations(const CVector& psi) const {
  std::vector<double> pops(subspaces_.size(), 0.0);
  for (Index i = 0; i < psi.size(); ++i) pops[owner(i)] += std::norm(psi[i]);
  return pops;
}

SubspacePartition partition_by_diagonal(const SparseOperator& diagonal_op, double tol) {
  if (!diagonal_op.square() || !diagonal_op.is_diagonal()) {
    throw ContractViolation("Zeno subspaces require a measurement operator diagonal in the Fock basis");
  }
  const CVector d = diagonal_op.diagonal_entries();
  const Index dim = d.size();

  std::vector<cplx> values;
  for (Index i = 0; i < dim; ++i) {
    const bool seen = std::any_of(values.begin(), values.end(),
                                  [&](cplx v) { return std::abs(v - d[i]) <= tol; });
    if (!seen) values.push_back(d[i]);
  }
  std::sort(values.begin(), values.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });

  std::vector<ZenoSubspace> subspaces(values.size());
  for (std::size_t m = 0; m < values.size(); ++m) subspaces[m].eigenvalue = values[m];
  for (Index i = 0; i < dim; ++i) {
    for (std::size_t m = 0; m < values.size(); ++m) {
      if (std::abs(values[m] - d[i]) <= tol) {
        subspaces[m].members.push_back(i);
        break;
      }
    }
  }
  for (auto& s : subspaces) {
    CVector diag = CVector::Zero(dim);
    for (Index i : s.members) diag[i] = 1.0;
    s.projector = SparseOperator::diagonal(diag).mark_hermitian();
  }
  return SubspacePartition(std::move(subspaces), dim);
}

SubspacePartition enumerate_zeno_subspaces(const MeasurementConfig& meas, const FockBasis& basis,
                                           double tol) {
  return partition_by_diagonal(build_measurement_operator(meas, basis), tol);
}

ScaleEstimate estimate_scales(const BhmParams& params, const MeasurementConfig& meas,
                              const ZenoSubspace& subspace) {
  if (subspace.members.empty()) throw ContractViolation("estimate_scales needs a nonempty subspace");
  ScaleEstimate s;
  s.K = params.J;
  s.lambda_sq = meas.gamma();
  s.convention = "K = J, lambda^2 = gamma";
  const double r = s.ratio();
  if (r > kZenoRatioWarning) {
    std::ostringstream msg;
    msg << "K/lambda^2 = " << r << " exceeds " << kZenoRatioWarning
        << "; the weak Zeno regime (lambda^2 >> K) is not satisfied";
    s.warning = msg.str();
  }
  return s;
}

}  // namespace zeno
