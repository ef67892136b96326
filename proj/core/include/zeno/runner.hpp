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


// Scenario execution. A run owns one directory; manifest.json is written
// before any payload with status "running", rewritten as every file lands,
// and finally marked "complete" (or "failed" with the error message).

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "zeno/inference.hpp"
#include "zeno/scenario.hpp"

namespace zeno {

/// "zeno-nh <semver> (rng <id>)".
std::string version_string();
const char* version_number();

struct RunOptions {
  std::optional<std::filesystem::path> out_dir;  // overrides Scenario::outputs
  std::optional<std::uint64_t> seed;             // overrides numerics.base_seed
  std::optional<int> threads;
  std::function<void(const std::string&)> log;   // progress lines
};

struct ProducedFile {
  std::string path;  // relative to the run directory
  std::string engine;
  std::string kind;
  std::size_t rows = 0;
};

struct RunReport {
  std::filesystem::path directory;
  std::string status;
  std::vector<ProducedFile> files;
  std::vector<std::string> warnings;
};

/// Payload files are byte-identical for identical configuration and seed;
/// only the manifest carries a timestamp.
RunReport run_scenario(const Scenario& scenario, const RunOptions& options = {});

/// "o=<value>" label of a D eigenvalue.
std::string subspace_label(cplx o);

/// DetectionRecord from a trajectory JSON sidecar (fields jump_times, t_final).
DetectionRecord load_detection_record(const std::filesystem::path& path);
/// Hypotheses from {"hypotheses": [{"rate", "prior", "label"}, ...]} or a bare array.
std::vector<SubspaceHypothesis> load_hypotheses(const std::filesystem::path& path);
/// Posterior series on t_k = k t_final / samples; returns the row count.
std::size_t write_posterior_csv(const std::filesystem::path& path, const std::vector<SubspaceHypothesis>& hyps,
                                const DetectionRecord& record, int samples,
                                LikelihoodExponent exponent = LikelihoodExponent::count);

}  // namespace zeno
