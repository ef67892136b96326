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


// Which Zeno subspace is occupied, judged from the photocount.
//
// On times short against the slow Zeno dynamics the count m in time t is a
// Poisson mixture with one component of mean |c_n|^2 t per subspace. All
// probabilities are evaluated in log space.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zeno/rng.hpp"
#include "zeno/trajectories.hpp"

namespace zeno {

struct SubspaceHypothesis {
  double rate = 0.0;   // |c_n|^2
  double prior = 0.0;  // p_0(c_n)
  std::string label;
};

/// Throws ContractViolation for negative rates or priors, or priors not summing to 1 (1e-12).
void validate_hypotheses(const std::vector<SubspaceHypothesis>& hyps);

/// log of the Poisson pmf with the given mean (mean 0 handled exactly).
double log_poisson(std::uint64_t m, double mean);

/// P(m, t) = sum_n Poisson(m; rate_n t) weight_n. Weights must sum to 1.
double detection_distribution(const std::vector<double>& rates, const std::vector<double>& weights,
                              std::uint64_t m, double t);
double detection_distribution(const std::vector<SubspaceHypothesis>& hyps, std::uint64_t m, double t);

/// Power of (rate t) in the likelihood. `count` is the Poisson likelihood;
/// `doubled` uses (rate t)^{2m} for comparison with the alternative display.
enum class LikelihoodExponent { count, doubled };

struct Posterior {
  std::vector<double> probabilities;
  std::uint64_t count = 0;
  double t = 0.0;
  std::optional<std::string> warning;

  std::size_t argmax() const;
};

/// p(c_n | m) proportional to p_0(c_n) L_n(m, t). When every likelihood
/// underflows the prior is returned with a warning.
Posterior bayes_update(const std::vector<SubspaceHypothesis>& hyps, std::uint64_t m, double t,
                       LikelihoodExponent exponent = LikelihoodExponent::count);

inline constexpr double kDefaultConfidenceFactor = 25.0;

/// t_n = kappa_c max(r_0, r_n) / (r_0 - r_n)^2 for every n, with r the rates
/// and index `target` playing r_0. Entry `target` is 0; equal rates give +inf.
std::vector<double> distinguishability_time(const std::vector<SubspaceHypothesis>& hyps, std::size_t target = 0,
                                            double confidence = kDefaultConfidenceFactor);
/// Largest entry of distinguishability_time.
double required_observation_time(const std::vector<SubspaceHypothesis>& hyps, std::size_t target = 0,
                                 double confidence = kDefaultConfidenceFactor);

/// Poisson process of the given rate on [0, t] from exponential waiting times.
DetectionRecord simulate_poisson_record(double rate, double t, Xoshiro256& rng);

/// Posterior after the detections in `record` up to each time in `times`.
std::vector<Posterior> posterior_series(const std::vector<SubspaceHypothesis>& hyps, const DetectionRecord& record,
                                        const std::vector<double>& times,
                                        LikelihoodExponent exponent = LikelihoodExponent::count);

/// Hypotheses |c_n|^2 for every subspace of a partition, with uniform prior.
std::vector<SubspaceHypothesis> hypotheses_from_partition(const SubspacePartition& partition,
                                                          const MeasurementConfig& meas);

}  // namespace zeno
