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


// Scenario files: JSON description of one run (model, measurement, engines,
// numerics, output directory). Quantities are in units of J = 1 by default.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "zeno/model.hpp"

namespace zeno {

enum class Engine { lindblad, trajectory, ensemble, nonhermitian, raman, steady_state, infer };

std::string to_string(Engine e);
Engine engine_from_string(const std::string& s);

struct Numerics {
  std::optional<double> dt;  // default: 0.05 / max(J, |U|, gamma)
  double t_final = 10.0;
  int n_traj = 100;
  std::uint64_t base_seed = 1;
  int sample_points = 200;
};

struct EnsembleSettings {
  /// Average over trajectories whose record stays in the target subspace.
  bool postselect = false;
  bool stop_when_inconsistent = false;
};

struct SteadyStateSettings {
  int delta_n = 0;
  enum class Coefficients { uniform, random, explicit_values } coefficients = Coefficients::uniform;
  std::uint64_t coefficient_seed = 1;
  std::vector<std::vector<cplx>> values;  // explicit_values only
};

struct InferSettings {
  /// Subspace that generates the simulated record; nullopt means the target.
  std::optional<std::size_t> true_subspace;
  bool doubled_exponent = false;
  double confidence = 25.0;
};

struct Scenario {
  std::string name = "unnamed";
  BhmParams model;
  MeasurementConfig measurement;
  std::optional<Pattern> named_pattern;  // kept for the parameter echo
  std::vector<Engine> engines;
  Numerics numerics;
  Occupation initial_state;
  EnsembleSettings ensemble;
  SteadyStateSettings steady_state;
  InferSettings infer;
  std::string outputs = "runs";
  int threads = 1;

  double dt() const;
  bool uses(Engine e) const;
  /// Full configuration check; throws ValidationError naming the field.
  void validate() const;
};

/// Parses and validates scenario JSON text.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::filesystem::path& path);
/// Canonical JSON (sorted keys, two-space indent) accepted by parse_scenario.
std::string scenario_to_json(const Scenario& s);

std::vector<std::string> builtin_scenario_names();
/// Throws ValidationError("scenario", ...) for unknown names.
Scenario builtin_scenario(const std::string& name);

}  // namespace zeno
