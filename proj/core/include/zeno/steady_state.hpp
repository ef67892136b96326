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


// Tunnelling dark states of a periodic lattice whose even sites are measured.
//
// With q = pi/a - k the pair operator
//   alpha^dag_k = b^dag_k b^dag_q - b^dag_{-k} b^dag_{-q}
// commutes with the hopping T and with Delta N = N_even - N_odd, and the
// single-mode operator
//   beta^dag_s = b^dag_{pi/2a} + s b^dag_{-pi/2a},   s = +-1,
// commutes with T and raises Delta N by s. Applying |Delta N| beta's and
// (N - |Delta N|)/2 pair factors sum_k phi_{i,k} alpha^dag_k to the vacuum
// gives a state that is dark to tunnelling and has zero measurement noise.
//
// Pair coefficients are indexed by the grid label m = 0, ..., floor(M/4),
// i.e. k in [0, pi/2a]. alpha^dag_0 vanishes identically on the grid
// (b_{-pi/a} = b_{pi/a}), so the m = 0 entry multiplies the zero operator.

#pragma once

#include <cstdint>
#include <vector>

#include "zeno/model.hpp"

namespace zeno {

struct SteadyStateSpec {
  LatticeConfig lattice;  // periodic, M even; lattice.atoms is N
  int delta_n = 0;
  /// One vector per pair factor, each of length floor(M/4) + 1.
  std::vector<std::vector<cplx>> coefficients;

  int pair_count() const { return (lattice.atoms - (delta_n < 0 ? -delta_n : delta_n)) / 2; }
  int sign() const { return delta_n > 0 ? 1 : (delta_n < 0 ? -1 : 0); }

  /// Throws ValidationError naming the field.
  void validate() const;

  static SteadyStateSpec uniform(const LatticeConfig& lattice, int delta_n);
  /// Coefficients with independent standard complex normal entries.
  static SteadyStateSpec random(const LatticeConfig& lattice, int delta_n, std::uint64_t seed);
};

/// Grid labels m = 0..floor(M/4) that index pair coefficients.
std::vector<int> pair_momentum_labels(const LatticeConfig& lattice);

/// alpha^dag_k from sector N to N+2 (chain must hold N+2 atoms); `m` is the
/// grid label of k with 0 <= k <= pi/2a.
SparseOperator alpha_creation_op(const SectorChain& chain, int atoms, int m);
/// beta^dag_sign from sector N to N+1. Throws UnsupportedConfiguration when
/// pi/2a is not on the momentum grid (M not divisible by 4).
SparseOperator beta_creation_op(const SectorChain& chain, int atoms, int sign);

/// Delta N = N_even - N_odd on one sector (1-based site labels).
SparseOperator delta_n_operator(const FockBasis& basis);

/// All N atoms in the k = 0 mode.
QuantumState superfluid_state(const FockBasis& basis);

/// Normalized N-atom dark state. Throws DegenerateInput when the coefficients
/// cancel to a zero vector.
QuantumState build_steady_state(const SteadyStateSpec& spec);

struct DarkStateReport {
  double tunnelling_residual = 0.0;   // || T psi ||
  double delta_n_mean = 0.0;          // <Delta N>
  double delta_n_residual = 0.0;      // || (Delta N - <Delta N>) psi ||
  double measurement_variance = 0.0;  // <D^2> - <D>^2
  double h0_residual = 0.0;           // || (H0 - <H0>) psi ||
  double lindblad_residual = 0.0;     // max |d rho/dt| for rho = |psi><psi|
};

DarkStateReport verify_dark_state(const QuantumState& psi, const FockBasis& basis, const BhmParams& params,
                                  const MeasurementConfig& meas);

struct MomentumIdentityReport {
  // Real-space operator / reduced-zone operator, fitted then checked
  // against the documented constant.
  double hopping_factor = 0.0;
  double hopping_residual = 0.0;      // max |T - 2 T_rbz|
  double delta_n_factor = 0.0;
  double delta_n_residual = 0.0;      // max |(N_even - N/2) - 0.5 X_rbz|
};

inline constexpr double kHoppingIdentityFactor = 2.0;
inline constexpr double kDeltaNIdentityFactor = 0.5;

/// Builds T_rbz = sum_{RBZ} (n_k - n_q) cos(ka) and
/// X_rbz = sum_{RBZ} (b^dag_k b_{-q} + b^dag_{-q} b_k) over -pi/2a < k <= pi/2a
/// and compares them with T and N_even - N/2. Periodic, M even.
MomentumIdentityReport momentum_operator_identities(const FockBasis& basis);

}  // namespace zeno
