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


// Quantum-jump unravelling of photon counting.
//
// Between detections the unnormalized state follows H_nh = H_0 - (i/2) c^dag c.
// A detection happens when the squared norm falls to a uniform draw r; the
// crossing is located inside the step, c is applied, the state renormalized
// and r redrawn.
//
// For a diagonal jump operator the diagonal of H_nh (decay and on-site
// energy) is integrated exactly and RK4 handles the off-diagonal hopping
// (integrating-factor RK4). This keeps the step stable when |c|^2 dt is
// large, as it is for eight atoms at gamma/J = 100.

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "zeno/master_eq.hpp"

namespace zeno {

struct DetectionRecord {
  std::vector<double> jump_times;  // strictly increasing, within [0, t_final]
  double t_final = 0.0;

  std::size_t count() const noexcept { return jump_times.size(); }
  /// Detections at or before t.
  std::size_t count_until(double t) const;
};

/// Restricts attention to runs whose record is consistent with a subspace:
/// a trajectory stays consistent while the weight of `target` in the
/// normalized state is at least `threshold` at every step.
struct ConsistencyFilter {
  std::shared_ptr<const SubspacePartition> partition;
  std::size_t target = 0;
  double threshold = 0.5;
};

struct TrajectoryOptions {
  double t_final = 1.0;
  double dt = 1e-3;
  int sample_points = 200;
  bool store_states = true;
  std::optional<ConsistencyFilter> consistency;
  /// Stop integrating once the run leaves the consistent set.
  bool stop_when_inconsistent = false;
};

/// Called at every sample with the normalized state.
using SampleObserver = std::function<void(int sample, double t, const CVector& psi)>;

struct TrajectoryResult {
  DetectionRecord record;
  std::uint64_t seed = 0;
  std::vector<double> times;        // the sample grid
  std::vector<CVector> states;      // normalized, when store_states
  /// Last time at which the run was still consistent (t_final if always).
  double consistent_until = 0.0;
  bool stopped_early = false;
};

/// Compressed rows with real values acting on complex vectors; the hopping
/// part of every dynamics generator here is real.
class RealCsr {
 public:
  RealCsr() = default;
  /// Empty optional when some entry has a nonzero imaginary part.
  static std::optional<RealCsr> from(const SparseOperator& op);
  void apply(const CVector& x, CVector& y) const;

 private:
  std::vector<int> outer_, inner_;
  std::vector<double> values_;
};

/// Non-Hermitian drift generator for one (H_0, c) pair, reusable across runs.
/// Holds scratch buffers, so one instance must not be shared between threads.
class JumpPropagator {
 public:
  JumpPropagator(const SparseOperator& H0, const SparseOperator& c);

  const SparseOperator& jump() const noexcept { return c_; }
  Index dim() const noexcept { return c_.rows(); }
  bool integrating_factor() const noexcept { return diagonal_c_; }
  /// Row-sum bound on the step generator treated explicitly.
  double explicit_rate_bound() const noexcept { return explicit_bound_; }

  /// Row-sum bound on the whole of H_nh.
  double full_rate_bound() const noexcept { return full_bound_; }

  /// Advances psi by h under H_nh (no jumps).
  void step(CVector& psi, double h) const;

  /// Squared norm p, decay rate g = <c^dag c>/p and dg/dt at psi. Caches
  /// the first RK stage so that the next step_prepared(psi, h) reuses it.
  struct RateInfo {
    double p = 0.0, g = 0.0, dg = 0.0;
  };
  RateInfo prepare(const CVector& psi) const;
  void step_prepared(CVector& psi, double h) const;
  /// Second-order Taylor step of length delta (either sign), for |delta| ||H_nh|| << 1.
  void nudge(CVector& psi, double delta) const;
  /// <psi|c^dag c|psi> (minus the derivative of the squared norm).
  double decay_rate(const CVector& psi) const;
  /// psi <- c psi.
  void apply_jump(CVector& psi) const;

 private:
  void explicit_rhs(const CVector& psi, CVector& out) const;
  void full_rhs(const CVector& psi, CVector& out) const;

  SparseOperator c_;
  SparseOperator h_nh_;       // full H_nh (plain RK4 path)
  SparseOperator off_;        // off-diagonal part of H_nh (integrating-factor path)
  CVector diag_;              // -i * diagonal of H_nh
  CVector cdc_diag_;          // |c_i|^2 when c is diagonal
  SparseOperator cdc_;        // c^dag c otherwise
  std::optional<RealCsr> off_real_;
  bool diagonal_c_ = false;
  bool diag_real_ = false;
  double explicit_bound_ = 0.0;
  double full_bound_ = 0.0;
  mutable CVector k1_, k2_, k3_, k4_, tmp_, e1_, e2_;
  mutable double cached_h_ = -1.0;
};

inline constexpr double kJumpTimeTolerance = 1e-6;
inline constexpr double kNormUnderflow = 1e-300;

/// One quantum-jump trajectory. Throws ContractViolation for an unnormalized
/// psi0 or a step above the stability bound and NumericalError on norm underflow.
TrajectoryResult run_trajectory(const QuantumState& psi0, const JumpPropagator& prop,
                                const TrajectoryOptions& options, std::uint64_t seed,
                                const SampleObserver& observer = {});
TrajectoryResult run_trajectory(const QuantumState& psi0, const SparseOperator& H0,
                                const SparseOperator& c, const TrajectoryOptions& options,
                                std::uint64_t seed);

struct EnsembleOptions {
  TrajectoryOptions trajectory;
  int n_traj = 1;
  std::uint64_t base_seed = 0;
  int threads = 1;
  /// Subspace populations are reported for this partition when set.
  std::shared_ptr<const SubspacePartition> partition;
  /// Averaged density matrices are kept up to this dimension.
  Index density_matrix_cap = 400;
  bool keep_records = true;
};

struct EnsembleSummary {
  std::vector<double> times;
  int n_traj = 0;
  /// mean |psi_i|^2 over running trajectories, [sample][basis index].
  std::vector<std::vector<double>> fock_populations;
  /// mean subspace weights over running trajectories, [sample][subspace].
  std::vector<std::vector<double>> subspace_populations;
  /// Same means restricted to trajectories still consistent at the sample.
  std::vector<std::vector<double>> consistent_fock_populations;
  std::vector<std::vector<double>> consistent_subspace_populations;
  std::vector<int> consistent_count;
  /// Trajectories that reached the sample (all of them unless runs stop early).
  std::vector<int> running_count;
  /// Averaged |psi><psi| per sample (empty above the cap).
  std::vector<CMatrix> density_matrices;
  std::vector<DetectionRecord> records;
  std::vector<std::uint64_t> seeds;
};

/// Runs n_traj trajectories with seeds derive_seed(base_seed, i). Results are
/// reduced in trajectory order and do not depend on the thread count.
EnsembleSummary run_ensemble(const QuantumState& psi0, const SparseOperator& H0,
                             const SparseOperator& c, const EnsembleOptions& options);

/// Observables along a stored trajectory.
struct ObservableSeries {
  std::vector<double> times;
  std::vector<double> fluct_d;          // <D^dag D> - |<D>|^2
  std::vector<double> fluct_c;          // 2 kappa |C|^2 times fluct_d
  std::vector<double> local_density_variance;
  std::vector<int> momentum_labels;     // empty for open boundaries
  std::vector<std::vector<double>> momentum_distribution;  // [sample][k]
};

ObservableSeries observables_series(const std::vector<double>& times, const std::vector<CVector>& states,
                                    const FockBasis& basis, const MeasurementConfig& meas);

/// Single-state versions used by the series and by the steady-state checks.
double measurement_fluctuation(const CVector& psi, const SparseOperator& D);
double local_density_variance(const CVector& psi, const FockBasis& basis);
/// <b^dag_k b_k> on the momentum grid (periodic only).
std::vector<double> momentum_distribution(const CVector& psi, const FockBasis& basis);

}  // namespace zeno
