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


#include "zeno/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "zeno/errors.hpp"
#include "zeno/steady_state.hpp"

namespace zeno {

using nlohmann::json;

namespace {

// Run length of the built-in eight-site dark-state formation trajectory (units of 1/J).
constexpr double kDarkFormationDuration = 200.0;

const std::vector<std::pair<Engine, const char*>>& engine_names() {
  static const std::vector<std::pair<Engine, const char*>> names = {
      {Engine::lindblad, "lindblad"},   {Engine::trajectory, "trajectory"},
      {Engine::ensemble, "ensemble"},   {Engine::nonhermitian, "nonhermitian"},
      {Engine::raman, "raman"},         {Engine::steady_state, "steady_state"},
      {Engine::infer, "infer"},
  };
  return names;
}

bool needs_initial_state(Engine e) {
  return e == Engine::lindblad || e == Engine::trajectory || e == Engine::ensemble ||
         e == Engine::nonhermitian || e == Engine::raman;
}

[[noreturn]] void fail(const std::string& field, const std::string& msg) { throw ValidationError(field, msg); }

double number(const json& j, const std::string& field) {
  if (!j.is_number()) fail(field, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(field, "must be finite");
  return v;
}

int integer(const json& j, const std::string& field) {
  if (!j.is_number_integer()) fail(field, "expected an integer");
  const auto v = j.get<long long>();
  if (v < -1'000'000'000LL || v > 1'000'000'000LL) fail(field, "out of range");
  return static_cast<int>(v);
}

std::uint64_t unsigned_integer(const json& j, const std::string& field) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0)) {
    fail(field, "expected a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

bool boolean(const json& j, const std::string& field) {
  if (!j.is_boolean()) fail(field, "expected true or false");
  return j.get<bool>();
}

std::string text(const json& j, const std::string& field) {
  if (!j.is_string()) fail(field, "expected a string");
  return j.get<std::string>();
}

// A number or a [re, im] pair.
cplx complex_value(const json& j, const std::string& field) {
  if (j.is_number()) return {number(j, field), 0.0};
  if (j.is_array() && j.size() == 2) return {number(j[0], field + "[0]"), number(j[1], field + "[1]")};
  fail(field, "expected a number or a [re, im] pair");
}

json complex_json(cplx v) {
  if (v.imag() == 0.0) return v.real();
  return json::array({v.real(), v.imag()});
}

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& prefix) {
  for (const auto& [key, value] : obj.items()) {
    if (!known.count(key)) fail(prefix + key, "unknown field");
  }
}

}  // namespace

std::string to_string(Engine e) {
  for (const auto& [v, n] : engine_names()) {
    if (v == e) return n;
  }
  return "?";
}

Engine engine_from_string(const std::string& s) {
  for (const auto& [v, n] : engine_names()) {
    if (s == n) return v;
  }
  fail("engines", "unknown engine \"" + s + "\"");
}

double Scenario::dt() const {
  if (numerics.dt) return *numerics.dt;
  const double scale = std::max({model.J, std::abs(model.U), measurement.gamma()});
  return 0.05 / (scale > 0.0 ? scale : 1.0);
}

bool Scenario::uses(Engine e) const { return std::find(engines.begin(), engines.end(), e) != engines.end(); }

void Scenario::validate() const {
  if (name.empty()) fail("name", "must not be empty");
  model.validate();
  if (model.lattice.atoms == 0) fail("N", "at least one atom is required");
  measurement.validate(model.lattice.sites);
  if (engines.empty()) fail("engines", "at least one engine is required");

  if (numerics.dt && !(*numerics.dt > 0.0)) fail("numerics.dt", "must be positive");
  if (!(numerics.t_final > 0.0) || !std::isfinite(numerics.t_final)) fail("numerics.t_final", "must be positive");
  if (numerics.n_traj < 1) fail("numerics.n_traj", "must be positive");
  if (numerics.sample_points < 1) fail("numerics.sample_points", "must be positive");
  if (threads < 1) fail("threads", "must be positive");
  if (outputs.empty()) fail("outputs", "must not be empty");

  const bool dynamics = std::any_of(engines.begin(), engines.end(), needs_initial_state);
  if (dynamics) {
    if (initial_state.empty()) fail("initial_state", "required by the selected engines");
    if (static_cast<int>(initial_state.size()) != model.lattice.sites) {
      fail("initial_state", "length " + std::to_string(initial_state.size()) + " does not match M");
    }
    int total = 0;
    for (int n : initial_state) {
      if (n < 0) fail("initial_state", "occupations must be non-negative");
      total += n;
    }
    if (total != model.lattice.atoms) fail("initial_state", "occupations sum to " + std::to_string(total) + ", not N");
  }

  // The selected Zeno subspace must exist. D eigenvalues are sums of A_i n_i,
  // so they are enumerated over the basis itself.
  const FockBasis basis = build_basis(model.lattice);
  const SubspacePartition partition = enumerate_zeno_subspaces(measurement, basis);
  if (!partition.find(measurement.zeno_eigenvalue)) fail("N0_K", "not an eigenvalue of the measurement operator");

  if (uses(Engine::raman) && !(model.J > 0.0)) fail("J", "the raman engine needs J > 0");
  if (uses(Engine::infer) && infer.true_subspace && *infer.true_subspace >= partition.count()) {
    fail("infer.true_subspace", "index exceeds the number of subspaces (" + std::to_string(partition.count()) + ")");
  }
  if (uses(Engine::infer) && !(infer.confidence > 0.0)) fail("infer.confidence", "must be positive");
  if (uses(Engine::steady_state)) {
    SteadyStateSpec spec{model.lattice, steady_state.delta_n, {}};
    if (steady_state.coefficients == SteadyStateSettings::Coefficients::explicit_values) {
      spec.coefficients = steady_state.values;
    } else {
      spec = SteadyStateSpec::uniform(model.lattice, steady_state.delta_n);
    }
    spec.validate();
  }
}

Scenario parse_scenario(const std::string& source) {
  json j;
  try {
    j = json::parse(source);
  } catch (const json::parse_error& e) {
    fail("scenario", std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) fail("scenario", "top level must be an object");
  if (j.empty()) fail("scenario", "empty scenario");
  reject_unknown(j,
                 {"name", "M", "N", "J", "U", "lattice_spacing", "boundary", "kappa", "C_re", "C_im", "pattern",
                  "N0_K", "engines", "numerics", "initial_state", "ensemble", "steady_state", "infer", "outputs",
                  "threads"},
                 "");

  Scenario s;
  for (const char* key : {"M", "N", "kappa", "pattern", "N0_K", "engines"}) {
    if (!j.contains(key)) fail(key, "required field is missing");
  }
  if (j.contains("name")) s.name = text(j["name"], "name");
  s.model.lattice.sites = integer(j["M"], "M");
  s.model.lattice.atoms = integer(j["N"], "N");
  if (j.contains("J")) s.model.J = number(j["J"], "J");
  if (j.contains("U")) s.model.U = number(j["U"], "U");
  if (j.contains("lattice_spacing")) s.model.lattice.lattice_spacing = number(j["lattice_spacing"], "lattice_spacing");
  if (j.contains("boundary")) s.model.lattice.boundary = boundary_from_string(text(j["boundary"], "boundary"));
  s.model.lattice.validate();

  s.measurement.kappa = number(j["kappa"], "kappa");
  s.measurement.C = {j.contains("C_re") ? number(j["C_re"], "C_re") : 1.0,
                     j.contains("C_im") ? number(j["C_im"], "C_im") : 0.0};
  const json& pat = j["pattern"];
  if (pat.is_string()) {
    s.named_pattern = pattern_from_string(pat.get<std::string>());
    s.measurement.pattern = pattern_weights(*s.named_pattern, s.model.lattice.sites);
  } else if (pat.is_array()) {
    for (std::size_t i = 0; i < pat.size(); ++i) {
      s.measurement.pattern.push_back(complex_value(pat[i], "pattern[" + std::to_string(i) + "]"));
    }
  } else {
    fail("pattern", "expected a pattern name or a vector");
  }
  s.measurement.zeno_eigenvalue = complex_value(j["N0_K"], "N0_K");

  const json& eng = j["engines"];
  if (eng.is_string()) {
    s.engines.push_back(engine_from_string(eng.get<std::string>()));
  } else if (eng.is_array()) {
    for (const auto& e : eng) s.engines.push_back(engine_from_string(text(e, "engines")));
  } else {
    fail("engines", "expected an engine name or a list of names");
  }

  if (j.contains("numerics")) {
    const json& n = j["numerics"];
    if (!n.is_object()) fail("numerics", "expected an object");
    reject_unknown(n, {"dt", "t_final", "n_traj", "base_seed", "sample_points"}, "numerics.");
    if (n.contains("dt")) s.numerics.dt = number(n["dt"], "numerics.dt");
    if (n.contains("t_final")) s.numerics.t_final = number(n["t_final"], "numerics.t_final");
    if (n.contains("n_traj")) s.numerics.n_traj = integer(n["n_traj"], "numerics.n_traj");
    if (n.contains("base_seed")) s.numerics.base_seed = unsigned_integer(n["base_seed"], "numerics.base_seed");
    if (n.contains("sample_points")) s.numerics.sample_points = integer(n["sample_points"], "numerics.sample_points");
  }

  if (j.contains("initial_state")) {
    const json& o = j["initial_state"];
    if (!o.is_array()) fail("initial_state", "expected an occupation vector");
    for (const auto& v : o) s.initial_state.push_back(integer(v, "initial_state"));
  }

  if (j.contains("ensemble")) {
    const json& e = j["ensemble"];
    if (!e.is_object()) fail("ensemble", "expected an object");
    reject_unknown(e, {"postselect", "stop_when_inconsistent"}, "ensemble.");
    if (e.contains("postselect")) s.ensemble.postselect = boolean(e["postselect"], "ensemble.postselect");
    if (e.contains("stop_when_inconsistent")) {
      s.ensemble.stop_when_inconsistent = boolean(e["stop_when_inconsistent"], "ensemble.stop_when_inconsistent");
    }
  }

  if (j.contains("steady_state")) {
    const json& d = j["steady_state"];
    if (!d.is_object()) fail("steady_state", "expected an object");
    reject_unknown(d, {"delta_N", "coefficients", "seed"}, "steady_state.");
    if (d.contains("delta_N")) s.steady_state.delta_n = integer(d["delta_N"], "delta_N");
    if (d.contains("seed")) s.steady_state.coefficient_seed = unsigned_integer(d["seed"], "steady_state.seed");
    if (d.contains("coefficients")) {
      const json& c = d["coefficients"];
      using C = SteadyStateSettings::Coefficients;
      if (c.is_string() && c == "uniform") {
        s.steady_state.coefficients = C::uniform;
      } else if (c.is_string() && c == "random") {
        s.steady_state.coefficients = C::random;
      } else if (c.is_array()) {
        s.steady_state.coefficients = C::explicit_values;
        for (std::size_t i = 0; i < c.size(); ++i) {
          if (!c[i].is_array()) fail("coefficients", "expected a list of coefficient vectors");
          std::vector<cplx> row;
          for (std::size_t k = 0; k < c[i].size(); ++k) {
            row.push_back(complex_value(c[i][k], "coefficients[" + std::to_string(i) + "][" + std::to_string(k) + "]"));
          }
          s.steady_state.values.push_back(std::move(row));
        }
      } else {
        fail("coefficients", "expected \"uniform\", \"random\" or explicit vectors");
      }
    }
  }

  if (j.contains("infer")) {
    const json& f = j["infer"];
    if (!f.is_object()) fail("infer", "expected an object");
    reject_unknown(f, {"true_subspace", "exponent", "confidence"}, "infer.");
    if (f.contains("true_subspace")) {
      s.infer.true_subspace = static_cast<std::size_t>(unsigned_integer(f["true_subspace"], "infer.true_subspace"));
    }
    if (f.contains("exponent")) {
      const std::string e = text(f["exponent"], "infer.exponent");
      if (e != "count" && e != "doubled") fail("infer.exponent", "expected \"count\" or \"doubled\"");
      s.infer.doubled_exponent = e == "doubled";
    }
    if (f.contains("confidence")) s.infer.confidence = number(f["confidence"], "infer.confidence");
  }

  if (j.contains("outputs")) s.outputs = text(j["outputs"], "outputs");
  if (j.contains("threads")) s.threads = integer(j["threads"], "threads");

  s.validate();
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ResourceError("cannot read scenario file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string scenario_to_json(const Scenario& s) {
  json j;
  j["name"] = s.name;
  j["M"] = s.model.lattice.sites;
  j["N"] = s.model.lattice.atoms;
  j["J"] = s.model.J;
  j["U"] = s.model.U;
  j["lattice_spacing"] = s.model.lattice.lattice_spacing;
  j["boundary"] = to_string(s.model.lattice.boundary);
  j["kappa"] = s.measurement.kappa;
  j["C_re"] = s.measurement.C.real();
  j["C_im"] = s.measurement.C.imag();
  if (s.named_pattern) {
    j["pattern"] = to_string(*s.named_pattern);
  } else {
    json p = json::array();
    for (cplx a : s.measurement.pattern) p.push_back(complex_json(a));
    j["pattern"] = p;
  }
  j["N0_K"] = complex_json(s.measurement.zeno_eigenvalue);
  json e = json::array();
  for (Engine x : s.engines) e.push_back(to_string(x));
  j["engines"] = e;
  json n;
  if (s.numerics.dt) n["dt"] = *s.numerics.dt;
  n["t_final"] = s.numerics.t_final;
  n["n_traj"] = s.numerics.n_traj;
  n["base_seed"] = s.numerics.base_seed;
  n["sample_points"] = s.numerics.sample_points;
  j["numerics"] = n;
  if (!s.initial_state.empty()) j["initial_state"] = s.initial_state;
  j["ensemble"] = {{"postselect", s.ensemble.postselect},
                   {"stop_when_inconsistent", s.ensemble.stop_when_inconsistent}};
  json d;
  d["delta_N"] = s.steady_state.delta_n;
  d["seed"] = s.steady_state.coefficient_seed;
  switch (s.steady_state.coefficients) {
    case SteadyStateSettings::Coefficients::uniform: d["coefficients"] = "uniform"; break;
    case SteadyStateSettings::Coefficients::random: d["coefficients"] = "random"; break;
    case SteadyStateSettings::Coefficients::explicit_values: {
      json rows = json::array();
      for (const auto& row : s.steady_state.values) {
        json r = json::array();
        for (cplx v : row) r.push_back(complex_json(v));
        rows.push_back(r);
      }
      d["coefficients"] = rows;
      break;
    }
  }
  j["steady_state"] = d;
  json f;
  if (s.infer.true_subspace) f["true_subspace"] = *s.infer.true_subspace;
  f["exponent"] = s.infer.doubled_exponent ? "doubled" : "count";
  f["confidence"] = s.infer.confidence;
  j["infer"] = f;
  j["outputs"] = s.outputs;
  j["threads"] = s.threads;
  return j.dump(2);
}

std::vector<std::string> builtin_scenario_names() {
  return {"fig2", "fig3", "unraveling_n2m2", "dark_state_m8", "raman_m4", "inference_n3m3"};
}

Scenario builtin_scenario(const std::string& name) {
  Scenario s;
  s.name = name;
  s.outputs = "runs/" + name;
  if (name == "fig2" || name == "inference_n3m3") {
    s.model.lattice = {3, 3, 1.0, Boundary::open};
    s.named_pattern = Pattern::middle_site;
    s.measurement = measurement_for_gamma(100.0, pattern_weights(Pattern::middle_site, 3), 1.0);
    s.initial_state = {2, 1, 0};
    if (name == "fig2") {
      s.engines = {Engine::nonhermitian, Engine::ensemble};
      s.numerics = {std::nullopt, 100.0, 1000, 2024, 200};
      s.ensemble = {true, true};
    } else {
      s.engines = {Engine::infer};
      s.numerics = {std::nullopt, 1.0, 1000, 7, 100};
    }
  } else if (name == "fig3") {
    s.model.lattice = {8, 8, 1.0, Boundary::periodic};
    s.named_pattern = Pattern::even_sites;
    s.measurement = measurement_for_gamma(100.0, pattern_weights(Pattern::even_sites, 8), 4.0);
    s.initial_state = Occupation(8, 1);
    s.engines = {Engine::trajectory};
    s.numerics = {std::nullopt, kDarkFormationDuration, 1, 3, 240};
  } else if (name == "unraveling_n2m2") {
    s.model.lattice = {2, 2, 1.0, Boundary::open};
    s.named_pattern = Pattern::middle_site;
    s.measurement = measurement_for_gamma(10.0, pattern_weights(Pattern::middle_site, 2), 1.0);
    s.initial_state = {2, 0};
    s.engines = {Engine::lindblad, Engine::ensemble};
    s.numerics = {std::nullopt, 2.0, 1000, 11, 40};
  } else if (name == "dark_state_m8") {
    s.model.lattice = {8, 4, 1.0, Boundary::periodic};
    s.named_pattern = Pattern::even_sites;
    s.measurement = measurement_for_gamma(100.0, pattern_weights(Pattern::even_sites, 8), 2.0);
    s.engines = {Engine::steady_state};
    s.steady_state.delta_n = 0;
  } else if (name == "raman_m4") {
    s.model.lattice = {4, 2, 1.0, Boundary::periodic};
    s.named_pattern = Pattern::even_sites;
    s.measurement = measurement_for_gamma(100.0, pattern_weights(Pattern::even_sites, 4), 1.0);
    s.initial_state = {1, 1, 0, 0};
    s.engines = {Engine::raman, Engine::nonhermitian};
    s.numerics = {std::nullopt, 50.0, 1, 5, 200};
  } else {
    std::string known;
    for (const auto& n : builtin_scenario_names()) known += (known.empty() ? "" : ", ") + n;
    fail("scenario", "unknown built-in \"" + name + "\" (known: " + known + ")");
  }
  s.validate();
  return s;
}

}  // namespace zeno
