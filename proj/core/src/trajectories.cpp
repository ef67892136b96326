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


#include "zeno/trajectories.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "zeno/errors.hpp"
#include "zeno/rng.hpp"

namespace zeno {

namespace {

constexpr int kChunkSize = 16;
constexpr std::size_t kDensitySeriesBytes = 256u << 20;

int substeps(double interval, double dt) {
  return std::max(1, static_cast<int>(std::ceil(interval / dt - 1e-9)));
}

// Cubic Hermite interpolant of the squared norm over one step, s in [0, 1].
double hermite(double s, double p0, double p1, double m0, double m1) {
  const double s2 = s * s;
  const double s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * p0 + (s3 - 2 * s2 + s) * m0 + (-2 * s3 + 3 * s2) * p1 + (s3 - s2) * m1;
}

double subspace_weight(const CVector& psi, const ZenoSubspace& sub) {
  double w = 0.0;
  for (Index i : sub.members) w += std::norm(psi[i]);
  return w;
}

}  // namespace

std::size_t DetectionRecord::count_until(double t) const {
  return static_cast<std::size_t>(std::upper_bound(jump_times.begin(), jump_times.end(), t) -
                                  jump_times.begin());
}

std::optional<RealCsr> RealCsr::from(const SparseOperator& op) {
  const auto& m = op.matrix();
  RealCsr out;
  out.outer_.assign(m.outerIndexPtr(), m.outerIndexPtr() + m.outerSize() + 1);
  out.inner_.reserve(static_cast<std::size_t>(m.nonZeros()));
  out.values_.reserve(static_cast<std::size_t>(m.nonZeros()));
  for (Index r = 0; r < m.outerSize(); ++r) {
    for (SparseOperator::Matrix::InnerIterator it(m, r); it; ++it) {
      if (it.value().imag() != 0.0) return std::nullopt;
      out.inner_.push_back(static_cast<int>(it.col()));
      out.values_.push_back(it.value().real());
    }
  }
  // Rebase the row pointers in case the matrix was not compressed.
  int acc = 0;
  for (Index r = 0; r < m.outerSize(); ++r) {
    const int len = m.isCompressed() ? m.outerIndexPtr()[r + 1] - m.outerIndexPtr()[r] : m.innerNonZeroPtr()[r];
    out.outer_[static_cast<std::size_t>(r)] = acc;
    acc += len;
  }
  out.outer_[static_cast<std::size_t>(m.outerSize())] = acc;
  return out;
}

void RealCsr::apply(const CVector& x, CVector& y) const {
  const auto rows = static_cast<Index>(outer_.size()) - 1;
  y.resize(rows);
  const double* xv = reinterpret_cast<const double*>(x.data());
  double* yv = reinterpret_cast<double*>(y.data());
  for (Index r = 0; r < rows; ++r) {
    double re = 0.0, im = 0.0;
    for (int k = outer_[static_cast<std::size_t>(r)]; k < outer_[static_cast<std::size_t>(r) + 1]; ++k) {
      const double v = values_[static_cast<std::size_t>(k)];
      const auto col = static_cast<std::size_t>(inner_[static_cast<std::size_t>(k)]);
      re += v * xv[2 * col];
      im += v * xv[2 * col + 1];
    }
    yv[2 * r] = re;
    yv[2 * r + 1] = im;
  }
}

JumpPropagator::JumpPropagator(const SparseOperator& H0, const SparseOperator& c) : c_(c) {
  if (!H0.square() || !c.square() || H0.rows() != c.rows()) {
    throw ContractViolation("H0 and c must be square operators on one basis");
  }
  cdc_ = c.adjoint() * c;
  h_nh_ = H0 - cdc_ * cplx{0.0, 0.5};
  diagonal_c_ = c.is_diagonal();
  if (diagonal_c_) {
    diag_ = -kI * h_nh_.matrix().diagonal();
    off_ = h_nh_.off_diagonal();
    off_real_ = RealCsr::from(off_);
    cdc_diag_ = cdc_.diagonal_entries();
    explicit_bound_ = off_.row_sum_norm();
  } else {
    explicit_bound_ = h_nh_.row_sum_norm();
  }
  full_bound_ = h_nh_.row_sum_norm();
  diag_real_ = diagonal_c_ && diag_.imag().cwiseAbs().maxCoeff() == 0.0;
  const Index n = c.rows();
  for (CVector* v : {&k1_, &k2_, &k3_, &k4_, &tmp_, &e1_, &e2_}) v->resize(n);
}

void JumpPropagator::explicit_rhs(const CVector& psi, CVector& out) const {
  if (off_real_) {
    off_real_->apply(psi, out);
  } else {
    (diagonal_c_ ? off_ : h_nh_).apply_into(psi, out);
  }
  out *= -kI;
}

void JumpPropagator::full_rhs(const CVector& psi, CVector& out) const {
  if (diagonal_c_) {
    explicit_rhs(psi, out);
    out.array() += diag_.array() * psi.array();
  } else {
    h_nh_.apply_into(psi, out);
    out *= -kI;
  }
}

void JumpPropagator::step(CVector& psi, double h) const {
  explicit_rhs(psi, k1_);
  step_prepared(psi, h);
}

void JumpPropagator::step_prepared(CVector& psi, double h) const {
  if (!diagonal_c_) {
    tmp_ = psi + 0.5 * h * k1_;
    explicit_rhs(tmp_, k2_);
    tmp_ = psi + 0.5 * h * k2_;
    explicit_rhs(tmp_, k3_);
    tmp_ = psi + h * k3_;
    explicit_rhs(tmp_, k4_);
    psi += (h / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
    return;
  }
  if (h != cached_h_) {
    if (diag_real_) {
      e1_ = (diag_.real() * (0.5 * h)).array().exp().matrix().cast<cplx>();
    } else {
      e1_ = (diag_ * (0.5 * h)).array().exp().matrix();
    }
    e2_ = e1_.cwiseProduct(e1_);
    cached_h_ = h;
  }
  const auto E = e1_.array();
  const auto E2 = e2_.array();
  tmp_ = (E * (psi + 0.5 * h * k1_).array()).matrix();
  explicit_rhs(tmp_, k2_);
  tmp_ = (E * psi.array()).matrix() + 0.5 * h * k2_;
  explicit_rhs(tmp_, k3_);
  tmp_ = (E2 * psi.array() + h * E * k3_.array()).matrix();
  explicit_rhs(tmp_, k4_);
  psi = (E2 * psi.array() +
         (h / 6.0) * (E2 * k1_.array() + 2.0 * E * (k2_.array() + k3_.array()) + k4_.array()))
            .matrix();
}

JumpPropagator::RateInfo JumpPropagator::prepare(const CVector& psi) const {
  explicit_rhs(psi, k1_);
  RateInfo info;
  info.p = psi.squaredNorm();
  if (!diagonal_c_) {
    info.g = cdc_.expectation(psi).real() / info.p;
    return info;
  }
  // d psi/dt = diag * psi + k1.
  const auto w = cdc_diag_.real().array();
  const auto a = psi.array();
  const auto da = diag_.array() * a + k1_.array();
  const double W = (w * a.abs2()).sum();
  const double dW = 2.0 * (w * (a.conjugate() * da).real()).sum();
  const double dp = 2.0 * (a.conjugate() * da).real().sum();
  info.g = W / info.p;
  info.dg = (dW - info.g * dp) / info.p;
  return info;
}

void JumpPropagator::nudge(CVector& psi, double delta) const {
  // psi + delta f + delta^2/2 f(f), f = -i H_nh psi.
  full_rhs(psi, k1_);
  full_rhs(k1_, k2_);
  psi += delta * k1_ + (0.5 * delta * delta) * k2_;
}

double JumpPropagator::decay_rate(const CVector& psi) const {
  if (diagonal_c_) return (cdc_diag_.real().array() * psi.array().abs2()).sum();
  return cdc_.expectation(psi).real();
}

void JumpPropagator::apply_jump(CVector& psi) const {
  c_.apply_into(psi, tmp_);
  psi.swap(tmp_);
}

TrajectoryResult run_trajectory(const QuantumState& psi0, const JumpPropagator& prop,
                                const TrajectoryOptions& options, std::uint64_t seed,
                                const SampleObserver& observer) {
  if (!(options.t_final > 0.0) || !(options.dt > 0.0) || options.sample_points < 1) {
    throw ContractViolation("run_trajectory needs t_final > 0, dt > 0 and sample_points >= 1");
  }
  if (psi0.amplitudes.size() != prop.dim()) throw ContractViolation("initial state has the wrong dimension");
  if (std::abs(psi0.amplitudes.squaredNorm() - 1.0) > 1e-10) {
    throw ContractViolation("initial state must be normalized");
  }
  if (options.dt * prop.explicit_rate_bound() > kRk4StabilityLimit) {
    std::ostringstream msg;
    msg << "dt = " << options.dt << " exceeds the RK4 stability bound "
        << kRk4StabilityLimit / prop.explicit_rate_bound();
    throw ContractViolation(msg.str());
  }
  const ZenoSubspace* target = nullptr;
  double threshold = 0.0;
  if (options.consistency) {
    const auto& f = *options.consistency;
    if (!f.partition || f.target >= f.partition->count() || f.partition->dim() != prop.dim()) {
      throw ContractViolation("consistency filter does not match the state space");
    }
    target = &(*f.partition)[f.target];
    threshold = f.threshold;
  }

  Xoshiro256 rng(seed);
  TrajectoryResult out;
  out.seed = seed;
  out.record.t_final = options.t_final;

  CVector psi = psi0.amplitudes;
  CVector trial(psi.size());
  double r = rng.uniform();
  double t = 0.0;
  bool consistent = !target || subspace_weight(psi, *target) >= threshold;
  out.consistent_until = 0.0;

  auto emit = [&](int sample, double time) {
    const double nrm = psi.squaredNorm();
    psi /= std::sqrt(nrm);
    r = std::min(1.0, r / nrm);
    out.times.push_back(time);
    if (options.store_states) out.states.push_back(psi);
    if (observer) observer(sample, time, psi);
  };

  // Jump times solve ln ||psi(t)||^2 = ln r. The crossing is predicted from
  // the exact derivative d ln p/dt = -<c^dag c>/p, reached with one step and
  // polished by Newton corrections taken as short Taylor steps. When the
  // prediction is poor the crossing is bracketed on the cubic Hermite
  // interpolant of the squared norm over a full trial step instead.
  const double nudge_limit = 1e-3 / std::max(prop.full_rate_bound(), 1e-300);
  CVector saved(psi.size());

  auto refine = [&](double& remaining, double h) {
    for (int it = 0; it < 16; ++it) {
      const double p = psi.squaredNorm();
      const double g = prop.decay_rate(psi) / p;
      if (!(g > 0.0)) return false;
      const double delta = (std::log(p) - std::log(r)) / g;
      if (std::abs(delta) <= kJumpTimeTolerance * h) return true;
      if (std::abs(delta) > nudge_limit) return false;
      prop.nudge(psi, delta);
      t += delta;
      remaining -= delta;
    }
    return true;
  };

  auto detect = [&] {
    out.record.jump_times.push_back(t);
    prop.apply_jump(psi);
    const double nrm = psi.squaredNorm();
    if (!(nrm >= kNormUnderflow)) {
      throw NumericalError("state annihilated by a detection at t = " + std::to_string(t) +
                           "; the jump operator has no support on the state");
    }
    psi /= std::sqrt(nrm);
    r = rng.uniform();
  };

  auto bracketed = [&](double& remaining, double h, double p0, double p1, double m0, double m1) {
    double lo = 0.0, hi = 1.0;
    while (hi - lo > kJumpTimeTolerance) {
      const double mid = 0.5 * (lo + hi);
      (hermite(mid, p0, p1, m0, m1) > r ? lo : hi) = mid;
    }
    const double tau = std::min(remaining, 0.5 * (lo + hi) * remaining);
    prop.step(psi, tau);
    t += tau;
    remaining -= tau;
    refine(remaining, h);
  };

  // Advances psi by h, applying every detection that falls inside the step.
  auto advance = [&](double h) {
    double remaining = h;
    while (remaining > 0.0) {
      const auto info = prop.prepare(psi);
      const double p0 = info.p;
      // Solve g tau + dg tau^2 / 2 = ln(p0 / r) for the first crossing.
      const double L = std::log(p0) - std::log(r);
      double predicted = INFINITY;
      if (info.g > 0.0) {
        const double disc = info.g * info.g + 2.0 * info.dg * L;
        predicted = disc >= 0.0 ? 2.0 * L / (info.g + std::sqrt(disc)) : L / info.g;
      }
      bool jumped = false;
      if (predicted < remaining) {
        saved = psi;
        const double t0 = t, rem0 = remaining;
        prop.step_prepared(psi, predicted);
        t += predicted;
        remaining -= predicted;
        if (refine(remaining, h)) {
          jumped = true;
        } else {
          psi = saved;
          t = t0;
          remaining = rem0;
          trial = psi;
          prop.step(trial, remaining);
          const double p1 = trial.squaredNorm();
          if (p1 > r) {
            psi.swap(trial);
            t += remaining;
            remaining = 0.0;
          } else {
            bracketed(remaining, h, p0, p1, -prop.decay_rate(psi) * remaining, -prop.decay_rate(trial) * remaining);
            jumped = true;
          }
        }
      } else {
        trial = psi;
        prop.step_prepared(trial, remaining);
        const double p1 = trial.squaredNorm();
        if (p1 > r) {
          psi.swap(trial);
          t += remaining;
          remaining = 0.0;
        } else {
          bracketed(remaining, h, p0, p1, -prop.decay_rate(psi) * remaining, -prop.decay_rate(trial) * remaining);
          jumped = true;
        }
      }
      if (jumped) {
        if (remaining < 0.0) {
          // The crossing lies just past the step end: stop at the end instead.
          prop.nudge(psi, remaining);
          t += remaining;
          remaining = 0.0;
        } else {
          if (remaining < 1e-12 * h) remaining = 0.0;
          detect();
        }
      }
      if (!(psi.squaredNorm() >= kNormUnderflow)) {
        throw NumericalError("norm underflow at t = " + std::to_string(t) + "; reduce dt");
      }
      if (consistent && target) {
        if (subspace_weight(psi, *target) >= threshold * psi.squaredNorm()) {
          out.consistent_until = t;
        } else {
          consistent = false;
        }
      }
    }
  };

  emit(0, 0.0);
  const double interval = options.t_final / options.sample_points;
  const int n_sub = substeps(interval, options.dt);
  const double h = interval / n_sub;
  for (int s = 1; s <= options.sample_points; ++s) {
    for (int k = 0; k < n_sub; ++k) advance(h);
    t = s * interval;  // removes accumulated rounding from the step sum
    if (consistent && target) out.consistent_until = t;
    if (!consistent && options.stop_when_inconsistent) {
      out.stopped_early = true;
      break;
    }
    emit(s, t);
  }
  if (!target) out.consistent_until = options.t_final;
  // Detections timed by the step sum can overshoot t_final by rounding only.
  for (double& jt : out.record.jump_times) jt = std::min(jt, options.t_final);
  return out;
}

TrajectoryResult run_trajectory(const QuantumState& psi0, const SparseOperator& H0,
                                const SparseOperator& c, const TrajectoryOptions& options,
                                std::uint64_t seed) {
  return run_trajectory(psi0, JumpPropagator(H0, c), options, seed);
}

namespace {

struct Accumulator {
  std::vector<std::vector<double>> fock, sub, cfock, csub;
  std::vector<int> ccount, running;
  std::vector<CMatrix> rho;

  Accumulator(std::size_t samples, Index dim, std::size_t subspaces, std::size_t rho_slots, bool with_rho)
      : fock(samples, std::vector<double>(static_cast<std::size_t>(dim), 0.0)),
        sub(samples, std::vector<double>(subspaces, 0.0)),
        cfock(samples, std::vector<double>(static_cast<std::size_t>(dim), 0.0)),
        csub(samples, std::vector<double>(subspaces, 0.0)),
        ccount(samples, 0),
        running(samples, 0) {
    if (with_rho) rho.assign(rho_slots, CMatrix::Zero(dim, dim));
  }

  void merge(const Accumulator& o) {
    for (std::size_t s = 0; s < fock.size(); ++s) {
      for (std::size_t i = 0; i < fock[s].size(); ++i) {
        fock[s][i] += o.fock[s][i];
        cfock[s][i] += o.cfock[s][i];
      }
      for (std::size_t m = 0; m < sub[s].size(); ++m) {
        sub[s][m] += o.sub[s][m];
        csub[s][m] += o.csub[s][m];
      }
      ccount[s] += o.ccount[s];
      running[s] += o.running[s];
    }
    for (std::size_t k = 0; k < rho.size(); ++k) rho[k] += o.rho[k];
  }
};

}  // namespace

EnsembleSummary run_ensemble(const QuantumState& psi0, const SparseOperator& H0,
                             const SparseOperator& c, const EnsembleOptions& options) {
  if (options.n_traj < 1) throw ContractViolation("run_ensemble needs n_traj >= 1");
  const JumpPropagator prototype(H0, c);
  const Index dim = prototype.dim();
  const auto samples = static_cast<std::size_t>(options.trajectory.sample_points) + 1;
  const auto& partition = options.partition;
  if (partition && partition->dim() != dim) throw ContractViolation("partition does not match the state space");
  const std::size_t subspaces = partition ? partition->count() : 0;
  const bool with_rho = dim <= options.density_matrix_cap;
  const std::size_t rho_bytes = samples * static_cast<std::size_t>(dim * dim) * sizeof(cplx);
  const std::size_t rho_slots = with_rho ? (rho_bytes <= kDensitySeriesBytes ? samples : 1) : 0;
  const bool filtered = options.trajectory.consistency.has_value();

  EnsembleSummary summary;
  summary.n_traj = options.n_traj;
  summary.seeds.resize(static_cast<std::size_t>(options.n_traj));
  if (options.keep_records) summary.records.resize(static_cast<std::size_t>(options.n_traj));
  for (int i = 0; i < options.n_traj; ++i) {
    summary.seeds[static_cast<std::size_t>(i)] = derive_seed(options.base_seed, static_cast<std::uint64_t>(i));
  }

  TrajectoryOptions topt = options.trajectory;
  topt.store_states = false;
  const int n_chunks = (options.n_traj + kChunkSize - 1) / kChunkSize;

  Accumulator total(samples, dim, subspaces, rho_slots, with_rho);
  std::mutex mu;
  std::map<int, Accumulator> pending;
  int next_merge = 0;
  std::atomic<int> next_chunk{0};
  std::exception_ptr failure;

  auto worker = [&] {
    JumpPropagator prop = prototype;
    try {
      for (int chunk = next_chunk++; chunk < n_chunks; chunk = next_chunk++) {
        Accumulator acc(samples, dim, subspaces, rho_slots, with_rho);
        const int first = chunk * kChunkSize;
        const int last = std::min(options.n_traj, first + kChunkSize);
        for (int i = first; i < last; ++i) {
          const auto seed = summary.seeds[static_cast<std::size_t>(i)];
          // Consistency at a sample is decided after the run from consistent_until.
          std::vector<CVector> kept;
          auto observe = [&](int s, double, const CVector& psi) {
            const auto su = static_cast<std::size_t>(s);
            acc.running[su] += 1;
            auto& f = acc.fock[su];
            for (Index j = 0; j < dim; ++j) f[static_cast<std::size_t>(j)] += std::norm(psi[j]);
            if (partition) {
              for (std::size_t m = 0; m < subspaces; ++m) acc.sub[su][m] += subspace_weight(psi, (*partition)[m]);
            }
            if (filtered) kept.push_back(psi);
            if (with_rho && (rho_slots == samples || su + 1 == samples)) {
              acc.rho[rho_slots == samples ? su : 0].noalias() += psi * psi.adjoint();
            }
          };
          TrajectoryResult res = run_trajectory(psi0, prop, topt, seed, observe);
          if (filtered) {
            for (std::size_t s = 0; s < kept.size(); ++s) {
              if (res.times[s] > res.consistent_until) break;
              acc.ccount[s] += 1;
              for (Index j = 0; j < dim; ++j) acc.cfock[s][static_cast<std::size_t>(j)] += std::norm(kept[s][j]);
              if (partition) {
                for (std::size_t m = 0; m < subspaces; ++m) acc.csub[s][m] += subspace_weight(kept[s], (*partition)[m]);
              }
            }
          }
          if (options.keep_records) summary.records[static_cast<std::size_t>(i)] = std::move(res.record);
        }
        std::lock_guard<std::mutex> lock(mu);
        pending.emplace(chunk, std::move(acc));
        for (auto it = pending.find(next_merge); it != pending.end(); it = pending.find(next_merge)) {
          total.merge(it->second);
          pending.erase(it);
          ++next_merge;
        }
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(mu);
      if (!failure) failure = std::current_exception();
      next_chunk = n_chunks;
    }
  };

  const int threads = std::clamp(options.threads, 1, std::max(1, n_chunks));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  const double interval = options.trajectory.t_final / options.trajectory.sample_points;
  for (std::size_t s = 0; s < samples; ++s) summary.times.push_back(static_cast<double>(s) * interval);
  auto mean = [](std::vector<double> v, int n) {
    if (n > 0) for (double& x : v) x /= n;
    return v;
  };
  for (std::size_t s = 0; s < samples; ++s) {
    summary.fock_populations.push_back(mean(total.fock[s], total.running[s]));
    summary.subspace_populations.push_back(mean(total.sub[s], total.running[s]));
    summary.consistent_fock_populations.push_back(mean(total.cfock[s], total.ccount[s]));
    summary.consistent_subspace_populations.push_back(mean(total.csub[s], total.ccount[s]));
  }
  summary.consistent_count = total.ccount;
  summary.running_count = total.running;
  for (std::size_t k = 0; k < total.rho.size(); ++k) {
    const int n = total.running[rho_slots == samples ? k : samples - 1];
    summary.density_matrices.push_back(n > 0 ? CMatrix(total.rho[k] / n) : total.rho[k]);
  }
  return summary;
}

double measurement_fluctuation(const CVector& psi, const SparseOperator& D) {
  const double nrm = psi.squaredNorm();
  const CVector dpsi = D.apply(psi);
  const double dd = dpsi.squaredNorm() / nrm;
  const cplx mean = psi.dot(dpsi) / nrm;
  return std::max(0.0, dd - std::norm(mean));
}

double local_density_variance(const CVector& psi, const FockBasis& basis) {
  const int M = basis.sites();
  std::vector<double> n1(static_cast<std::size_t>(M), 0.0), n2(static_cast<std::size_t>(M), 0.0);
  const double nrm = psi.squaredNorm();
  for (Index i = 0; i < basis.size(); ++i) {
    const double p = std::norm(psi[i]) / nrm;
    if (p == 0.0) continue;
    for (int j = 0; j < M; ++j) {
      const int n = basis.occupation(i, j);
      n1[static_cast<std::size_t>(j)] += p * n;
      n2[static_cast<std::size_t>(j)] += p * n * n;
    }
  }
  double v = 0.0;
  for (int j = 0; j < M; ++j) v += n2[static_cast<std::size_t>(j)] - n1[static_cast<std::size_t>(j)] * n1[static_cast<std::size_t>(j)];
  return v / M;
}

namespace {

// <b^dag_j b_l> evaluated with precomputed hops, then Fourier transformed.
class MomentumProbe {
 public:
  explicit MomentumProbe(const FockBasis& basis) : basis_(basis), labels_(momentum_grid(basis.config())) {
    if (basis.config().boundary != Boundary::periodic) {
      throw UnsupportedConfiguration("momentum distribution requires a periodic lattice");
    }
    const int M = basis.sites();
    for (int j = 0; j < M; ++j) {
      for (int l = j + 1; l < M; ++l) hops_.push_back({j, l, hop_op(basis, j, l)});
    }
  }
  const std::vector<int>& labels() const { return labels_; }

  std::vector<double> operator()(const CVector& psi) const {
    const int M = basis_.sites();
    const double nrm = psi.squaredNorm();
    CMatrix g = CMatrix::Zero(M, M);
    for (Index i = 0; i < basis_.size(); ++i) {
      const double p = std::norm(psi[i]) / nrm;
      for (int j = 0; j < M; ++j) g(j, j) += p * basis_.occupation(i, j);
    }
    for (const auto& h : hops_) {
      const cplx v = h.op.expectation(psi) / nrm;
      g(h.j, h.l) = v;
      g(h.l, h.j) = std::conj(v);
    }
    const LatticeConfig& lat = basis_.config();
    std::vector<double> nk;
    nk.reserve(labels_.size());
    for (int m : labels_) {
      const double k = wavenumber(lat, m);
      cplx acc{};
      for (int j = 0; j < M; ++j) {
        for (int l = 0; l < M; ++l) {
          acc += std::polar(1.0, -k * (site_position(lat, j) - site_position(lat, l))) * g(j, l);
        }
      }
      nk.push_back(acc.real() / M);
    }
    return nk;
  }

 private:
  struct Hop {
    int j, l;
    SparseOperator op;
  };
  const FockBasis& basis_;
  std::vector<int> labels_;
  std::vector<Hop> hops_;
};

}  // namespace

std::vector<double> momentum_distribution(const CVector& psi, const FockBasis& basis) {
  return MomentumProbe(basis)(psi);
}

ObservableSeries observables_series(const std::vector<double>& times, const std::vector<CVector>& states,
                                    const FockBasis& basis, const MeasurementConfig& meas) {
  if (times.size() != states.size()) throw ContractViolation("times and states differ in length");
  const SparseOperator D = build_measurement_operator(meas, basis);
  const double scale = 2.0 * meas.kappa * std::norm(meas.C);
  ObservableSeries out;
  out.times = times;
  std::optional<MomentumProbe> probe;
  if (basis.config().boundary == Boundary::periodic) {
    probe.emplace(basis);
    out.momentum_labels = probe->labels();
  }
  for (const CVector& psi : states) {
    const double f = measurement_fluctuation(psi, D);
    out.fluct_d.push_back(f);
    out.fluct_c.push_back(scale * f);
    out.local_density_variance.push_back(local_density_variance(psi, basis));
    if (probe) out.momentum_distribution.push_back((*probe)(psi));
  }
  return out;
}

}  // namespace zeno
