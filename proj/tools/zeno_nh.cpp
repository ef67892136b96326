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


// zeno-nh: runs scenarios and exposes the inference step on saved records.
//
// Exit codes: 0 success, 1 internal error, 2 usage or validation error,
// 3 resource limit, 4 numerical failure.

#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "zeno/errors.hpp"
#include "zeno/runner.hpp"
#include "zeno/scenario.hpp"

namespace {

namespace fs = std::filesystem;

zeno::Scenario resolve(const std::string& arg) {
  if (fs::exists(arg)) return zeno::load_scenario(arg);
  for (const auto& name : zeno::builtin_scenario_names()) {
    if (arg == name) return zeno::builtin_scenario(name);
  }
  throw zeno::ValidationError("scenario", "\"" + arg + "\" is neither a file nor a built-in scenario");
}

int report(const std::exception& e, int code) {
  std::cerr << "zeno-nh: " << e.what() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Measurement-induced Zeno dynamics of lattice bosons"};
  app.require_subcommand(1);

  std::string scenario_arg;
  std::string out_dir;
  std::uint64_t seed = 0;
  int threads = 0;
  bool quiet = false;

  auto* run = app.add_subcommand("run", "Run a scenario file or built-in scenario");
  run->add_option("scenario", scenario_arg, "Scenario JSON path or built-in name")->required();
  auto* out_opt = run->add_option("--out", out_dir, "Run directory (default: the scenario's outputs)");
  auto* seed_opt = run->add_option("--seed", seed, "Base seed override");
  auto* threads_opt = run->add_option("--threads", threads, "Worker threads for ensembles")->check(CLI::PositiveNumber);
  run->add_flag("-q,--quiet", quiet, "No progress lines");

  auto* validate = app.add_subcommand("validate", "Check a scenario without running it");
  validate->add_option("scenario", scenario_arg, "Scenario JSON path or built-in name")->required();

  auto* list = app.add_subcommand("list-scenarios", "List built-in scenarios");
  auto* show = app.add_subcommand("show-scenario", "Print a scenario as canonical JSON");
  show->add_option("scenario", scenario_arg, "Scenario JSON path or built-in name")->required();
  auto* version = app.add_subcommand("version", "Print version and RNG identifier");

  std::string record_path, hyp_path, posterior_out = "posterior.csv", exponent = "count";
  int samples = 200;
  auto* infer = app.add_subcommand("infer", "Posterior over subspaces from a saved detection record");
  infer->add_option("--record", record_path, "Trajectory JSON sidecar")->required()->check(CLI::ExistingFile);
  infer->add_option("--hypotheses", hyp_path, "Hypotheses JSON")->required()->check(CLI::ExistingFile);
  infer->add_option("--out", posterior_out, "Posterior CSV path");
  infer->add_option("--samples", samples, "Time samples")->check(CLI::PositiveNumber);
  infer->add_option("--exponent", exponent, "Likelihood exponent")->check(CLI::IsMember({"count", "doubled"}));

  if (argc <= 1) {
    std::cerr << app.help();
    return 2;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*version) {
      std::cout << zeno::version_string() << '\n';
    } else if (*list) {
      for (const auto& name : zeno::builtin_scenario_names()) std::cout << name << '\n';
    } else if (*show) {
      std::cout << zeno::scenario_to_json(resolve(scenario_arg)) << '\n';
    } else if (*validate) {
      const zeno::Scenario s = resolve(scenario_arg);
      std::cout << "OK " << s.name << '\n';
    } else if (*run) {
      const zeno::Scenario s = resolve(scenario_arg);
      zeno::RunOptions opt;
      if (*out_opt) opt.out_dir = out_dir;
      if (*seed_opt) opt.seed = seed;
      if (*threads_opt) opt.threads = threads;
      if (!quiet) opt.log = [](const std::string& line) { std::cerr << line << '\n'; };
      const zeno::RunReport rep = zeno::run_scenario(s, opt);
      for (const auto& w : rep.warnings) std::cerr << "warning: " << w << '\n';
      for (const auto& f : rep.files) std::cout << (rep.directory / f.path).string() << '\n';
      std::cout << (rep.directory / "manifest.json").string() << '\n';
    } else if (*infer) {
      const auto record = zeno::load_detection_record(record_path);
      const auto hyps = zeno::load_hypotheses(hyp_path);
      const auto exp = exponent == "doubled" ? zeno::LikelihoodExponent::doubled : zeno::LikelihoodExponent::count;
      zeno::write_posterior_csv(posterior_out, hyps, record, samples, exp);
      std::cout << posterior_out << '\n';
    }
  } catch (const zeno::ValidationError& e) {
    std::cerr << "zeno-nh: invalid configuration: " << e.what() << '\n';
    if (e.field() == "scenario") std::cerr << app.help();
    return 2;
  } catch (const zeno::ResourceError& e) {
    return report(e, 3);
  } catch (const zeno::NumericalError& e) {
    return report(e, 4);
  } catch (const zeno::Error& e) {
    return report(e, 1);
  } catch (const std::exception& e) {
    return report(e, 1);
  }
  return 0;
}
