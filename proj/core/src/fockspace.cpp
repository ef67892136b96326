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

#include "zeno/fockspace.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "zeno/errors.hpp"

namespace zeno {

namespace {

using Triplet = SparseOperator::Triplet;

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  return a > max - b ? max : a + b;
}

// ways[s][n] = number of ways to place n bosons on s sites, via the
// recurrence ways[s][n] = sum_{v<=n} ways[s-1][n-v].
std::vector<std::vector<std::uint64_t>> filling_table(int sites, int atoms) {
  std::vector<std::vector<std::uint64_t>> ways(
      static_cast<std::size_t>(sites) + 1,
      std::vector<std::uint64_t>(static_cast<std::size_t>(atoms) + 1, 0));
  ways[0][0] = 1;
  for (int s = 1; s <= sites; ++s) {
    std::uint64_t running = 0;
    for (int n = 0; n <= atoms; ++n) {
      running = saturating_add(running, ways[s - 1][n]);
      ways[s][n] = running;
    }
  }
  return ways;
}

void check_site(const FockBasis& basis, int site) {
  if (site < 0 || site >= basis.sites()) {
    throw ContractViolation("site index " + std::to_string(site) + " out of range [0, " +
                            std::to_string(basis.sites()) + ")");
  }
}

void check_same_lattice(const FockBasis& a, const FockBasis& b) {
  if (a.sites() != b.sites()) {
    throw ContractViolation("bases belong to lattices with different site counts");
  }
}

void require_periodic(const LatticeConfig& lattice) {
  if (lattice.boundary != Boundary::periodic) {
    throw UnsupportedConfiguration("momentum-space operators require periodic boundaries");
  }
}

// sum_{ij} coeff(i, j) b^dagger_i b_j within one sector.
SparseOperator quadratic_op(const FockBasis& basis,
                            const std::function<cplx(int, int)>& coeff) {
  const int m = basis.sites();
  std::vector<Triplet> t;
  Occupation work(static_cast<std::size_t>(m));
  for (Index col = 0; col < basis.size(); ++col) {
    const auto occ = basis.state(col);
    for (int j = 0; j < m; ++j) {
      if (occ[j] == 0) continue;
      for (int i = 0; i < m; ++i) {
        const cplx c = coeff(i, j);
        if (c == cplx{}) continue;
        if (i == j) {
          t.emplace_back(static_cast<int>(col), static_cast<int>(col), c * double(occ[j]));
          continue;
        }
        std::copy(occ.begin(), occ.end(), work.begin());
        const double amp = std::sqrt(double(work[j]) * double(work[i] + 1));
        work[j] -= 1;
        work[i] += 1;
        const Index row = basis.index_of(work);
        t.emplace_back(static_cast<int>(row), static_cast<int>(col), c * amp);
      }
    }
  }
  return SparseOperator::from_triplets(basis.size(), basis.size(), t);
}

cplx plane_wave(const LatticeConfig& lattice, int m, int site) {
  const double phase = wavenumber(lattice, m) * site_position(lattice, site);
  return std::polar(1.0, phase);
}

}  // namespace

std::string to_string(Boundary b) { return b == Boundary::periodic ? "periodic" : "open"; }

Boundary boundary_from_string(const std::string& s) {
  if (s == "periodic") return Boundary::periodic;
  if (s == "open") return Boundary::open;
  throw ValidationError("boundary", "expected \"periodic\" or \"open\", got \"" + s + "\"");
}

void LatticeConfig::validate() const {
  if (sites < 1) throw ValidationError("M", "number of sites must be >= 1, got " + std::to_string(sites));
  if (atoms < 0) throw ValidationError("N", "number of atoms must be >= 0, got " + std::to_string(atoms));
  if (!(lattice_spacing > 0.0) || !std::isfinite(lattice_spacing)) {
    throw ValidationError("lattice_spacing", "must be a positive finite length");
  }
}

std::uint64_t LatticeConfig::dimension() const {
  validate();
  return filling_table(sites, atoms)[static_cast<std::size_t>(sites)][static_cast<std::size_t>(atoms)];
}

LatticeConfig LatticeConfig::with_atoms(int n) const {
  LatticeConfig c = *this;
  c.atoms = n;
  return c;
}

std::span<const int> FockBasis::state(Index i) const {
  return {occupations_.data() + offset(i), static_cast<std::size_t>(config_.sites)};
}

Occupation FockBasis::occupation(Index i) const {
  const auto s = state(i);
  return {s.begin(), s.end()};
}

std::optional<Index> FockBasis::find(std::span<const int> occ) const {
  const int m = config_.sites;
  if (static_cast<int>(occ.size()) != m) return std::nullopt;
  int remaining = config_.atoms;
  std::uint64_t rank = 0;
  for (int i = 0; i < m; ++i) {
    const int v = occ[i];
    if (v < 0 || v > remaining) return std::nullopt;
    if (i == m - 1) {
      if (v != remaining) return std::nullopt;
      break;
    }
    const std::size_t rest = static_cast<std::size_t>(m - i - 1);
    // States sharing the prefix but holding more atoms on site i come first.
    for (int larger = v + 1; larger <= remaining; ++larger) {
      rank += ways_[rest][static_cast<std::size_t>(remaining - larger)];
    }
    remaining -= v;
  }
  return static_cast<Index>(rank);
}

Index FockBasis::index_of(std::span<const int> occ) const {
  if (auto idx = find(occ)) return *idx;
  std::string s;
  for (std::size_t i = 0; i < occ.size(); ++i) s += (i ? "," : "") + std::to_string(occ[i]);
  throw ContractViolation("occupation (" + s + ") is not in the N=" +
                          std::to_string(config_.atoms) + ", M=" + std::to_string(config_.sites) +
                          " sector");
}

std::string FockBasis::label(Index i) const {
  std::string s;
  const auto occ = state(i);
  for (std::size_t k = 0; k < occ.size(); ++k) s += (k ? "," : "") + std::to_string(occ[k]);
  return s;
}

FockBasis build_basis(const LatticeConfig& config, std::uint64_t cap) {
  config.validate();
  FockBasis basis;
  basis.config_ = config;
  basis.ways_ = filling_table(config.sites, config.atoms);
  const std::uint64_t dim =
      basis.ways_[static_cast<std::size_t>(config.sites)][static_cast<std::size_t>(config.atoms)];
  if (dim > cap) {
    throw ResourceError("Fock basis for N=" + std::to_string(config.atoms) + ", M=" +
                        std::to_string(config.sites) + " needs dimension " + std::to_string(dim) +
                        " which exceeds the cap " + std::to_string(cap));
  }
  basis.count_ = static_cast<std::size_t>(dim);
  basis.occupations_.reserve(basis.count_ * static_cast<std::size_t>(config.sites));

  const int m = config.sites;
  Occupation current(static_cast<std::size_t>(m), 0);
  std::function<void(int, int)> fill = [&](int site, int remaining) {
    if (site == m - 1) {
      current[site] = remaining;
      basis.occupations_.insert(basis.occupations_.end(), current.begin(), current.end());
      return;
    }
    for (int v = remaining; v >= 0; --v) {
      current[site] = v;
      fill(site + 1, remaining - v);
    }
  };
  fill(0, config.atoms);
  return basis;
}

SectorChain::SectorChain(const LatticeConfig& lattice, int max_atoms, std::uint64_t cap) {
  if (max_atoms < 0) throw ContractViolation("SectorChain needs max_atoms >= 0");
  sectors_.reserve(static_cast<std::size_t>(max_atoms) + 1);
  for (int n = 0; n <= max_atoms; ++n) sectors_.push_back(build_basis(lattice.with_atoms(n), cap));
}

const FockBasis& SectorChain::sector(int atoms) const {
  if (atoms < 0 || atoms > max_atoms()) {
    throw ContractViolation("sector N=" + std::to_string(atoms) + " not in chain 0.." +
                            std::to_string(max_atoms()));
  }
  return sectors_[static_cast<std::size_t>(atoms)];
}

QuantumState QuantumState::fock(const FockBasis& basis, std::span<const int> occ) {
  QuantumState s;
  s.amplitudes = CVector::Zero(basis.size());
  s.amplitudes[basis.index_of(occ)] = 1.0;
  s.norm_sq = 1.0;
  return s;
}

QuantumState QuantumState::from_amplitudes(CVector amps) {
  QuantumState s;
  s.amplitudes = std::move(amps);
  s.renormalize();
  return s;
}

void QuantumState::renormalize() {
  const double n2 = amplitudes.squaredNorm();
  if (!(n2 > 1e-300) || !std::isfinite(n2)) {
    throw NumericalError("state norm underflow (|psi|^2 = " + std::to_string(n2) + ")");
  }
  amplitudes /= std::sqrt(n2);
  norm_sq = 1.0;
}

SparseOperator hop_op(const FockBasis& basis, int i, int j) {
  check_site(basis, i);
  check_site(basis, j);
  if (i == j) throw ContractViolation("hop_op requires i != j; use number_op for i == j");
  return quadratic_op(basis, [i, j](int a, int b) { return (a == i && b == j) ? cplx{1.0} : cplx{}; });
}

SparseOperator number_op(const FockBasis& basis, int site) {
  check_site(basis, site);
  CVector d(basis.size());
  for (Index k = 0; k < basis.size(); ++k) d[k] = double(basis.occupation(k, site));
  return SparseOperator::diagonal(d).mark_hermitian();
}

SparseOperator weighted_number_op(const FockBasis& basis, std::span<const cplx> weights) {
  if (static_cast<int>(weights.size()) != basis.sites()) {
    throw ContractViolation("weights length " + std::to_string(weights.size()) +
                            " does not match M=" + std::to_string(basis.sites()));
  }
  CVector d(basis.size());
  bool real = true;
  for (const cplx w : weights) real = real && w.imag() == 0.0;
  for (Index k = 0; k < basis.size(); ++k) {
    cplx s{};
    for (int i = 0; i < basis.sites(); ++i) s += weights[i] * double(basis.occupation(k, i));
    d[k] = s;
  }
  SparseOperator op = SparseOperator::diagonal(d);
  if (real) op.mark_hermitian();
  return op;
}

SparseOperator weighted_number_op(const FockBasis& basis, std::span<const double> weights) {
  std::vector<cplx> w(weights.begin(), weights.end());
  return weighted_number_op(basis, std::span<const cplx>(w));
}

SparseOperator pair_occupation_op(const FockBasis& basis) {
  CVector d(basis.size());
  for (Index k = 0; k < basis.size(); ++k) {
    double s = 0.0;
    for (int i = 0; i < basis.sites(); ++i) {
      const double n = basis.occupation(k, i);
      s += n * (n - 1.0);
    }
    d[k] = s;
  }
  return SparseOperator::diagonal(d).mark_hermitian();
}

SparseOperator annihilation_op(const FockBasis& from, const FockBasis& to, int site) {
  check_same_lattice(from, to);
  check_site(from, site);
  if (to.atoms() != from.atoms() - 1) {
    throw ContractViolation("annihilation_op target sector must hold N-1 atoms");
  }
  std::vector<Triplet> t;
  Occupation work(static_cast<std::size_t>(from.sites()));
  for (Index col = 0; col < from.size(); ++col) {
    const auto occ = from.state(col);
    if (occ[site] == 0) continue;
    std::copy(occ.begin(), occ.end(), work.begin());
    work[site] -= 1;
    t.emplace_back(static_cast<int>(to.index_of(work)), static_cast<int>(col),
                   cplx{std::sqrt(double(occ[site]))});
  }
  return SparseOperator::from_triplets(to.size(), from.size(), t);
}

SparseOperator creation_op(const FockBasis& from, const FockBasis& to, int site) {
  if (to.atoms() != from.atoms() + 1) {
    throw ContractViolation("creation_op target sector must hold N+1 atoms");
  }
  return annihilation_op(to, from, site).adjoint();
}

std::vector<int> momentum_grid(const LatticeConfig& lattice) {
  lattice.validate();
  const int m = lattice.sites;
  std::vector<int> grid;
  grid.reserve(static_cast<std::size_t>(m));
  for (int q = -(m / 2) + 1; q <= (m + 1) / 2; ++q) grid.push_back(q);
  return grid;
}

double wavenumber(const LatticeConfig& lattice, int m) {
  return 2.0 * std::numbers::pi * double(m) / (double(lattice.sites) * lattice.lattice_spacing);
}

int wrap_momentum(const LatticeConfig& lattice, int m) {
  const int size = lattice.sites;
  const int lo = -(size / 2) + 1;
  int shifted = (m - lo) % size;
  if (shifted < 0) shifted += size;
  return shifted + lo;
}

double site_position(const LatticeConfig& lattice, int site) {
  return double(site + 1) * lattice.lattice_spacing;
}

SparseOperator momentum_annihilation_op(const FockBasis& from, const FockBasis& to, int m) {
  const LatticeConfig& lattice = from.config();
  require_periodic(lattice);
  if (wrap_momentum(lattice, m) != m) {
    throw ContractViolation("momentum label " + std::to_string(m) + " is off the grid");
  }
  const double scale = 1.0 / std::sqrt(double(lattice.sites));
  SparseOperator out(to.size(), from.size());
  for (int j = 0; j < lattice.sites; ++j) {
    out += annihilation_op(from, to, j) * (scale * plane_wave(lattice, m, j));
  }
  return out;
}

SparseOperator momentum_creation_op(const FockBasis& from, const FockBasis& to, int m) {
  if (to.atoms() != from.atoms() + 1) {
    throw ContractViolation("momentum_creation_op target sector must hold N+1 atoms");
  }
  return momentum_annihilation_op(to, from, m).adjoint();
}

SparseOperator momentum_transfer_op(const FockBasis& basis, int m_create, int m_annihilate) {
  const LatticeConfig& lattice = basis.config();
  require_periodic(lattice);
  for (int m : {m_create, m_annihilate}) {
    if (wrap_momentum(lattice, m) != m) {
      throw ContractViolation("momentum label " + std::to_string(m) + " is off the grid");
    }
  }
  const double inv_m = 1.0 / double(lattice.sites);
  return quadratic_op(basis, [&](int i, int j) {
    return inv_m * std::conj(plane_wave(lattice, m_create, i)) * plane_wave(lattice, m_annihilate, j);
  });
}

SparseOperator momentum_number_op(const FockBasis& basis, int m) {
  SparseOperator op = momentum_transfer_op(basis, m, m);
  op.mark_hermitian();
  return op;
}

}  // namespace zeno
