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


#include "zeno/steady_state.hpp"

#include <cmath>
#include <cstdlib>
#include <memory>
#include <numbers>

#include "zeno/errors.hpp"
#include "zeno/master_eq.hpp"
#include "zeno/rng.hpp"

namespace zeno {

namespace {

void require_even_periodic(const LatticeConfig& lattice) {
  if (lattice.boundary != Boundary::periodic) {
    throw UnsupportedConfiguration("dark-state construction needs a periodic lattice");
  }
  if (lattice.sites % 2 != 0) {
    throw UnsupportedConfiguration("dark-state construction needs an even number of sites");
  }
}

// Fitted a/b in the Frobenius sense and max |a - expected b|.
std::pair<double, double> compare(const SparseOperator& real_side, const SparseOperator& rbz, double expected) {
  const CMatrix a = real_side.dense();
  const CMatrix b = rbz.dense();
  const double bb = b.squaredNorm();
  const double factor = bb > 0.0 ? (b.adjoint() * a).trace().real() / bb : 0.0;
  const double residual = (a - expected * b).cwiseAbs().maxCoeff();
  return {factor, residual};
}

}  // namespace

std::vector<int> pair_momentum_labels(const LatticeConfig& lattice) {
  std::vector<int> labels;
  for (int m = 0; m <= lattice.sites / 4; ++m) labels.push_back(m);
  return labels;
}

void SteadyStateSpec::validate() const {
  lattice.validate();
  if (lattice.boundary != Boundary::periodic) throw ValidationError("boundary", "dark states need a periodic lattice");
  if (lattice.sites % 2 != 0) throw ValidationError("M", "dark states need an even number of sites");
  const int N = lattice.atoms;
  const int mag = std::abs(delta_n);
  if (mag > N) throw ValidationError("delta_N", "|delta_N| exceeds N = " + std::to_string(N));
  if ((N - mag) % 2 != 0) throw ValidationError("delta_N", "N - |delta_N| must be even");
  if (mag > 0 && lattice.sites % 4 != 0) {
    throw ValidationError("delta_N", "delta_N != 0 needs k = pi/2a on the grid (M divisible by 4)");
  }
  if (static_cast<int>(coefficients.size()) != pair_count()) {
    throw ValidationError("coefficients", "expected " + std::to_string(pair_count()) + " coefficient vectors, got " +
                                              std::to_string(coefficients.size()));
  }
  const std::size_t len = pair_momentum_labels(lattice).size();
  for (std::size_t i = 0; i < coefficients.size(); ++i) {
    if (coefficients[i].size() != len) {
      throw ValidationError("coefficients", "vector " + std::to_string(i) + " must have " + std::to_string(len) +
                                                " entries (k = 0 .. pi/2a)");
    }
    bool nonzero = false;
    for (cplx v : coefficients[i]) nonzero = nonzero || v != cplx{};
    if (!nonzero) throw ValidationError("coefficients", "vector " + std::to_string(i) + " is identically zero");
  }
}

SteadyStateSpec SteadyStateSpec::uniform(const LatticeConfig& lattice, int delta_n) {
  SteadyStateSpec s{lattice, delta_n, {}};
  const int pairs = s.pair_count() < 0 ? 0 : s.pair_count();
  s.coefficients.assign(static_cast<std::size_t>(pairs),
                        std::vector<cplx>(pair_momentum_labels(lattice).size(), cplx{1.0}));
  return s;
}

SteadyStateSpec SteadyStateSpec::random(const LatticeConfig& lattice, int delta_n, std::uint64_t seed) {
  SteadyStateSpec s = uniform(lattice, delta_n);
  Xoshiro256 rng(seed);
  auto normal = [&] {
    // Box-Muller keeps the draws platform independent.
    const double u1 = rng.uniform(), u2 = rng.uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  };
  for (auto& vec : s.coefficients) {
    for (cplx& v : vec) v = cplx{normal(), normal()};
  }
  return s;
}

SparseOperator alpha_creation_op(const SectorChain& chain, int atoms, int m) {
  const LatticeConfig& lat = chain.lattice();
  require_even_periodic(lat);
  const int M = lat.sites;
  if (m < 0 || 4 * m > M) {
    throw ContractViolation("pair momentum label " + std::to_string(m) + " is outside 0 <= k <= pi/2a");
  }
  const FockBasis& s0 = chain.sector(atoms);
  const FockBasis& s1 = chain.sector(atoms + 1);
  const FockBasis& s2 = chain.sector(atoms + 2);
  const int q = wrap_momentum(lat, M / 2 - m);
  const int mk = wrap_momentum(lat, -m);
  const int mq = wrap_momentum(lat, m - M / 2);
  return momentum_creation_op(s1, s2, m) * momentum_creation_op(s0, s1, q) -
         momentum_creation_op(s1, s2, mk) * momentum_creation_op(s0, s1, mq);
}

SparseOperator beta_creation_op(const SectorChain& chain, int atoms, int sign) {
  const LatticeConfig& lat = chain.lattice();
  if (lat.boundary != Boundary::periodic) throw UnsupportedConfiguration("beta operator needs a periodic lattice");
  if (lat.sites % 4 != 0) {
    throw UnsupportedConfiguration("k = pi/2a is not on the momentum grid of M = " + std::to_string(lat.sites) +
                                   " sites");
  }
  if (sign != 1 && sign != -1) throw ContractViolation("beta operator sign must be +1 or -1");
  const FockBasis& s0 = chain.sector(atoms);
  const FockBasis& s1 = chain.sector(atoms + 1);
  const int quarter = lat.sites / 4;
  return momentum_creation_op(s0, s1, quarter) +
         momentum_creation_op(s0, s1, wrap_momentum(lat, -quarter)) * cplx{double(sign)};
}

SparseOperator delta_n_operator(const FockBasis& basis) {
  std::vector<double> w(static_cast<std::size_t>(basis.sites()));
  for (int j = 0; j < basis.sites(); ++j) w[static_cast<std::size_t>(j)] = (j + 1) % 2 == 0 ? 1.0 : -1.0;
  return weighted_number_op(basis, std::span<const double>(w));
}

QuantumState superfluid_state(const FockBasis& basis) {
  const LatticeConfig& lat = basis.config();
  const int N = basis.atoms();
  SectorChain chain(lat.with_atoms(0), N);
  CVector v = CVector::Ones(1);
  for (int n = 0; n < N; ++n) v = momentum_creation_op(chain.sector(n), chain.sector(n + 1), 0).apply(v);
  return QuantumState::from_amplitudes(std::move(v));
}

QuantumState build_steady_state(const SteadyStateSpec& spec) {
  spec.validate();
  const LatticeConfig& lat = spec.lattice;
  const int N = lat.atoms;
  SectorChain chain(lat.with_atoms(0), N);
  CVector v = CVector::Ones(1);
  int n = 0;
  for (int b = 0; b < std::abs(spec.delta_n); ++b, ++n) v = beta_creation_op(chain, n, spec.sign()).apply(v);
  const auto labels = pair_momentum_labels(lat);
  for (const auto& coeffs : spec.coefficients) {
    SparseOperator pair(chain.sector(n + 2).size(), chain.sector(n).size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (coeffs[i] != cplx{}) pair += alpha_creation_op(chain, n, labels[i]) * coeffs[i];
    }
    v = pair.apply(v);
    n += 2;
  }
  if (!(v.norm() > 1e-12)) {
    throw DegenerateInput("the coefficients produce the zero vector (only alpha_0 terms or an exact cancellation)");
  }
  return QuantumState::from_amplitudes(std::move(v));
}

DarkStateReport verify_dark_state(const QuantumState& psi, const FockBasis& basis, const BhmParams& params,
                                  const MeasurementConfig& meas) {
  const CVector& v = psi.amplitudes;
  if (v.size() != basis.size()) throw ContractViolation("state does not live on the basis");
  const double nrm = v.norm();
  DarkStateReport r;
  r.tunnelling_residual = build_hopping_operator(basis).apply(v).norm() / nrm;

  auto eigen_residual = [&](const SparseOperator& op, double* mean) {
    const CVector ov = op.apply(v);
    const cplx mu = v.dot(ov) / (nrm * nrm);
    if (mean) *mean = mu.real();
    return (ov - mu * v).norm() / nrm;
  };
  const SparseOperator dn = delta_n_operator(basis);
  r.delta_n_residual = eigen_residual(dn, &r.delta_n_mean);

  const SparseOperator D = build_measurement_operator(meas, basis);
  const CVector dv = D.apply(v);
  const cplx dmean = v.dot(dv) / (nrm * nrm);
  r.measurement_variance = std::max(0.0, dv.squaredNorm() / (nrm * nrm) - std::norm(dmean));

  const SparseOperator H0 = build_hamiltonian(params, basis);
  r.h0_residual = eigen_residual(H0, nullptr);

  auto partition = std::make_shared<const SubspacePartition>(enumerate_zeno_subspaces(meas, basis));
  const LindbladGenerator gen(H0, build_jump_operator(meas, basis), partition);
  r.lindblad_residual = gen.rhs(BlockDensityMatrix::pure(partition, v / nrm)).max_abs();
  return r;
}

MomentumIdentityReport momentum_operator_identities(const FockBasis& basis) {
  const LatticeConfig& lat = basis.config();
  require_even_periodic(lat);
  const int M = lat.sites;
  const Index dim = basis.size();

  SparseOperator t_rbz(dim, dim), x_rbz(dim, dim);
  for (int m : momentum_grid(lat)) {
    if (!(4 * m > -M && 4 * m <= M)) continue;  // -pi/2a < k <= pi/2a
    const int q = wrap_momentum(lat, M / 2 - m);
    const int mq = wrap_momentum(lat, m - M / 2);
    const double ck = std::cos(wavenumber(lat, m) * lat.lattice_spacing);
    t_rbz += (momentum_number_op(basis, m) - momentum_number_op(basis, q)) * cplx{ck};
    x_rbz += momentum_transfer_op(basis, m, mq) + momentum_transfer_op(basis, mq, m);
  }

  std::vector<double> even(static_cast<std::size_t>(M));
  for (int j = 0; j < M; ++j) even[static_cast<std::size_t>(j)] = (j + 1) % 2 == 0 ? 1.0 : 0.0;
  const SparseOperator n_even_shift = weighted_number_op(basis, std::span<const double>(even)) -
                                      SparseOperator::identity(dim) * cplx{0.5 * basis.atoms()};

  MomentumIdentityReport r;
  std::tie(r.hopping_factor, r.hopping_residual) = compare(build_hopping_operator(basis), t_rbz, kHoppingIdentityFactor);
  std::tie(r.delta_n_factor, r.delta_n_residual) = compare(n_even_shift, x_rbz, kDeltaNIdentityFactor);
  return r;
}

}  // namespace zeno
