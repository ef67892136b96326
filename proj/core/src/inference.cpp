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


#include "zeno/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "zeno/errors.hpp"

namespace zeno {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_sum_exp(const std::vector<double>& x) {
  const double mx = *std::max_element(x.begin(), x.end());
  if (mx == kNegInf) return kNegInf;
  double s = 0.0;
  for (double v : x) s += std::exp(v - mx);
  return mx + std::log(s);
}

double log_likelihood(std::uint64_t m, double mean, LikelihoodExponent e) {
  if (e == LikelihoodExponent::count) return log_poisson(m, mean);
  const double k = 2.0 * static_cast<double>(m);
  if (mean == 0.0) return m == 0 ? 0.0 : kNegInf;
  return k * std::log(mean) - std::lgamma(static_cast<double>(m) + 1.0) - mean;
}

}  // namespace

void validate_hypotheses(const std::vector<SubspaceHypothesis>& hyps) {
  if (hyps.empty()) throw ContractViolation("at least one hypothesis is required");
  double total = 0.0;
  for (const auto& h : hyps) {
    if (!(h.rate >= 0.0) || !std::isfinite(h.rate)) throw ContractViolation("hypothesis rates must be finite and >= 0");
    if (!(h.prior >= 0.0)) throw ContractViolation("hypothesis priors must be >= 0");
    total += h.prior;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg << "priors sum to " << total << ", not 1";
    throw ContractViolation(msg.str());
  }
}

double log_poisson(std::uint64_t m, double mean) {
  if (mean < 0.0) throw ContractViolation("Poisson mean must be >= 0");
  if (mean == 0.0) return m == 0 ? 0.0 : kNegInf;
  const double md = static_cast<double>(m);
  return md * std::log(mean) - mean - std::lgamma(md + 1.0);
}

double detection_distribution(const std::vector<double>& rates, const std::vector<double>& weights,
                              std::uint64_t m, double t) {
  if (rates.size() != weights.size() || rates.empty()) {
    throw ContractViolation("rates and weights must be nonempty and of equal length");
  }
  if (!(t > 0.0)) throw ContractViolation("detection_distribution needs t > 0");
  std::vector<double> terms;
  terms.reserve(rates.size());
  for (std::size_t n = 0; n < rates.size(); ++n) {
    terms.push_back(weights[n] > 0.0 ? std::log(weights[n]) + log_poisson(m, rates[n] * t) : kNegInf);
  }
  return std::exp(log_sum_exp(terms));
}

double detection_distribution(const std::vector<SubspaceHypothesis>& hyps, std::uint64_t m, double t) {
  validate_hypotheses(hyps);
  std::vector<double> rates, weights;
  for (const auto& h : hyps) {
    rates.push_back(h.rate);
    weights.push_back(h.prior);
  }
  return detection_distribution(rates, weights, m, t);
}

std::size_t Posterior::argmax() const {
  return static_cast<std::size_t>(std::max_element(probabilities.begin(), probabilities.end()) -
                                  probabilities.begin());
}

Posterior bayes_update(const std::vector<SubspaceHypothesis>& hyps, std::uint64_t m, double t,
                       LikelihoodExponent exponent) {
  validate_hypotheses(hyps);
  if (!(t >= 0.0)) throw ContractViolation("bayes_update needs t >= 0");
  Posterior post;
  post.count = m;
  post.t = t;
  std::vector<double> logs;
  logs.reserve(hyps.size());
  for (const auto& h : hyps) {
    logs.push_back(h.prior > 0.0 ? std::log(h.prior) + log_likelihood(m, h.rate * t, exponent) : kNegInf);
  }
  const double z = log_sum_exp(logs);
  if (z == kNegInf || !std::isfinite(z)) {
    for (const auto& h : hyps) post.probabilities.push_back(h.prior);
    post.warning = "all likelihoods underflow; returning the prior";
    return post;
  }
  for (double l : logs) post.probabilities.push_back(l == kNegInf ? 0.0 : std::exp(l - z));
  return post;
}

std::vector<double> distinguishability_time(const std::vector<SubspaceHypothesis>& hyps, std::size_t target,
                                            double confidence) {
  validate_hypotheses(hyps);
  if (target >= hyps.size()) throw ContractViolation("target hypothesis out of range");
  if (!(confidence > 0.0)) throw ContractViolation("confidence factor must be positive");
  const double r0 = hyps[target].rate;
  std::vector<double> out(hyps.size(), 0.0);
  for (std::size_t n = 0; n < hyps.size(); ++n) {
    if (n == target) continue;
    const double rn = hyps[n].rate;
    const double gap = r0 - rn;
    out[n] = gap == 0.0 ? std::numeric_limits<double>::infinity() : confidence * std::max(r0, rn) / (gap * gap);
  }
  return out;
}

double required_observation_time(const std::vector<SubspaceHypothesis>& hyps, std::size_t target,
                                 double confidence) {
  const auto times = distinguishability_time(hyps, target, confidence);
  return *std::max_element(times.begin(), times.end());
}

DetectionRecord simulate_poisson_record(double rate, double t, Xoshiro256& rng) {
  if (!(rate >= 0.0) || !(t >= 0.0)) throw ContractViolation("simulate_poisson_record needs rate, t >= 0");
  DetectionRecord rec;
  rec.t_final = t;
  if (rate == 0.0) return rec;
  for (double s = rng.exponential(rate); s <= t; s += rng.exponential(rate)) rec.jump_times.push_back(s);
  return rec;
}

std::vector<Posterior> posterior_series(const std::vector<SubspaceHypothesis>& hyps, const DetectionRecord& record,
                                        const std::vector<double>& times, LikelihoodExponent exponent) {
  std::vector<Posterior> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(bayes_update(hyps, record.count_until(t), t, exponent));
  return out;
}

std::vector<SubspaceHypothesis> hypotheses_from_partition(const SubspacePartition& partition,
                                                          const MeasurementConfig& meas) {
  std::vector<SubspaceHypothesis> hyps;
  const double p = 1.0 / static_cast<double>(partition.count());
  for (std::size_t m = 0; m < partition.count(); ++m) {
    std::ostringstream label;
    label << "o=" << partition[m].eigenvalue.real();
    if (partition[m].eigenvalue.imag() != 0.0) label << (partition[m].eigenvalue.imag() > 0 ? "+" : "") << partition[m].eigenvalue.imag() << "i";
    hyps.push_back({std::norm(meas.jump_eigenvalue(partition[m].eigenvalue)), p, label.str()});
  }
  return hyps;
}

}  // namespace zeno
