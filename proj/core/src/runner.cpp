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


#include "zeno/runner.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <memory>
#include <sstream>

#include "json.hpp"
#include "zeno/csv.hpp"
#include "zeno/errors.hpp"
#include "zeno/master_eq.hpp"
#include "zeno/rng.hpp"
#include "zeno/steady_state.hpp"
#include "zeno/trajectories.hpp"
#include "zeno/zeno_effective.hpp"

namespace zeno {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Largest basis the dense Lindblad engine accepts.
constexpr Index kLindbladDimensionCap = 500;
// Tracked Fock states per population table.
constexpr std::size_t kTrackedStateCap = 64;
// Relative size below which steady-state amplitudes are not listed.
constexpr double kAmplitudeFloor = 1e-12;

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string column_label(const FockBasis& basis, Index i) {
  std::string s = "p_";
  const auto occ = basis.state(i);
  for (std::size_t k = 0; k < occ.size(); ++k) s += (k ? "_" : "") + std::to_string(occ[k]);
  return s;
}

std::vector<Index> tracked_states(const ZenoSubspace& target) {
  std::vector<Index> idx = target.members;
  if (idx.size() > kTrackedStateCap) idx.resize(kTrackedStateCap);
  return idx;
}

class Manifest {
 public:
  Manifest(fs::path dir, const Scenario& s, std::uint64_t seed, int threads) : dir_(std::move(dir)) {
    doc_["tool"] = "zeno-nh";
    doc_["version"] = version_number();
    doc_["rng"] = kRngId;
    doc_["created"] = utc_timestamp();
    doc_["scenario"] = s.name;
    doc_["status"] = "running";
    doc_["seed"] = seed;
    doc_["threads"] = threads;
    doc_["parameters"] = json::parse(scenario_to_json(s));
    doc_["files"] = json::array();
    doc_["warnings"] = json::array();
    flush();
  }

  void add(const ProducedFile& f) {
    doc_["files"].push_back({{"path", f.path}, {"engine", f.engine}, {"kind", f.kind}, {"rows", f.rows}});
    flush();
  }
  void warn(const std::string& w) {
    doc_["warnings"].push_back(w);
    flush();
  }
  void finish(const std::string& status, const std::string& error = {}) {
    doc_["status"] = status;
    if (!error.empty()) doc_["error"] = error;
    flush();
  }

 private:
  void flush() {
    const fs::path tmp = dir_ / "manifest.json.tmp";
    {
      std::ofstream out(tmp);
      out << doc_.dump(2) << '\n';
      if (!out) throw ResourceError("cannot write " + tmp.string());
    }
    fs::rename(tmp, dir_ / "manifest.json");
  }

  fs::path dir_;
  json doc_;
};

// Shared state of one run.
struct Context {
  const Scenario& s;
  fs::path dir;
  std::uint64_t seed;
  int threads;
  Manifest& manifest;
  RunReport& report;
  const std::function<void(const std::string&)>& log;

  FockBasis basis;
  std::shared_ptr<const SubspacePartition> partition;
  std::size_t target = 0;
  SparseOperator H0, c;
  std::optional<LindbladSeries> lindblad;
  std::optional<DetectionRecord> trajectory_record;

  void note(const std::string& msg) const {
    if (log) log(msg);
  }
  void produced(const std::string& path, const std::string& engine, const std::string& kind, std::size_t rows) {
    ProducedFile f{path, engine, kind, rows};
    report.files.push_back(f);
    manifest.add(f);
  }
  QuantumState initial() const { return QuantumState::fock(basis, s.initial_state); }
  std::vector<std::string> subspace_columns() const {
    std::vector<std::string> cols;
    for (const auto& sub : partition->subspaces()) cols.push_back("P_" + subspace_label(sub.eigenvalue));
    return cols;
  }
};

void write_population_table(Context& ctx, const std::string& file, const std::string& engine,
                            const NonHermitianSeries& series, const std::vector<Index>& tracked,
                            const std::vector<Index>& support) {
  std::vector<std::string> header{"t"};
  for (Index i : tracked) header.push_back(column_label(ctx.basis, i));
  header.insert(header.end(), {"norm", "leakage"});
  CsvWriter csv(ctx.dir / file, header);
  for (std::size_t k = 0; k < series.times.size(); ++k) {
    const CVector& psi = series.states[k];
    const double total = psi.squaredNorm();
    std::vector<double> row{series.times[k]};
    for (Index i : tracked) row.push_back(std::norm(psi[i]) / total);
    double inside = 0.0;
    for (Index i : support) inside += std::norm(psi[i]);
    row.push_back(series.raw_norm_sq[k]);
    row.push_back(1.0 - inside / total);
    csv.row(row);
  }
  csv.close();
  ctx.produced(file, engine, "population_series", csv.rows());
}

void write_eigenvalue_table(Context& ctx, const std::string& file, const std::string& engine,
                            const EffectiveHamiltonian& heff) {
  const Spectrum spec = spectrum(heff);
  // Slow modes decay on the J^2/gamma scale, fast ones on the gamma scale;
  // 0.1 gamma separates the two with a wide margin in the Zeno regime.
  const double split = 0.1 * ctx.s.measurement.gamma();
  CsvWriter csv(ctx.dir / file, {"index", "re", "im", "class"});
  for (Index i = 0; i < spec.eigenvalues.size(); ++i) {
    const cplx e = spec.eigenvalues[i];
    csv.row(std::vector<CsvCell>{static_cast<long long>(i), e.real(), e.imag(),
                                 std::string(std::abs(e.imag()) < split ? "slow" : "fast")});
  }
  csv.close();
  ctx.produced(file, engine, "eigenvalues", csv.rows());
}

void run_nonhermitian(Context& ctx) {
  const Scenario& s = ctx.s;
  ctx.note("nonhermitian: evolving under H_eff");
  const EffectiveHamiltonian heff = build_effective_hamiltonian(s.model, s.measurement, ctx.basis);
  NonHermitianOptions opt{s.numerics.t_final, s.dt(), s.numerics.sample_points, true};
  const NonHermitianSeries series = evolve_nonhermitian(ctx.initial().amplitudes, heff, opt);
  const auto& target = (*ctx.partition)[ctx.target];
  write_population_table(ctx, "nonhermitian.csv", "nonhermitian", series, tracked_states(target), target.members);
  if (ctx.basis.size() <= kDenseEigenCap) write_eigenvalue_table(ctx, "eigenvalues.csv", "nonhermitian", heff);
}

void run_raman(Context& ctx) {
  const Scenario& s = ctx.s;
  const auto& target = (*ctx.partition)[ctx.target];
  if (ctx.partition->owner(ctx.basis.index_of(s.initial_state)) != ctx.target) {
    throw ValidationError("initial_state", "the raman engine needs an initial state inside the N0_K subspace");
  }
  ctx.note("raman: evolving under the projected second-order Hamiltonian");
  const EffectiveHamiltonian heff = build_projected_raman_hamiltonian(
      ctx.H0, ctx.basis, s.measurement, *ctx.partition, ctx.target, s.model.J, s.measurement.gamma());
  NonHermitianOptions opt{s.numerics.t_final, s.dt(), s.numerics.sample_points, true};
  const NonHermitianSeries series = evolve_nonhermitian(ctx.initial().amplitudes, heff, opt);
  write_population_table(ctx, "raman.csv", "raman", series, tracked_states(target), target.members);
  if (target.size() <= kDenseEigenCap) write_eigenvalue_table(ctx, "raman_eigenvalues.csv", "raman", heff);
}

void run_lindblad(Context& ctx) {
  const Scenario& s = ctx.s;
  if (ctx.basis.size() > kLindbladDimensionCap) {
    throw ResourceError("lindblad engine: dimension " + std::to_string(ctx.basis.size()) + " exceeds the dense cap " +
                        std::to_string(kLindbladDimensionCap));
  }
  ctx.note("lindblad: integrating the master equation");
  LindbladGenerator gen(ctx.H0, ctx.c, ctx.partition);
  LindbladOptions opt;
  opt.t_final = s.numerics.t_final;
  opt.dt = s.dt();
  opt.sample_points = s.numerics.sample_points;
  const auto rho0 = BlockDensityMatrix::pure(ctx.partition, ctx.initial().amplitudes);
  ctx.lindblad = integrate_lindblad(rho0, gen, opt);

  std::vector<std::string> header{"t", "trace", "purity_total", "purity_remainder"};
  for (const auto& col : ctx.subspace_columns()) header.push_back(col);
  CsvWriter csv(ctx.dir / "lindblad.csv", header);
  for (std::size_t k = 0; k < ctx.lindblad->times.size(); ++k) {
    const auto& rho = ctx.lindblad->states[k];
    const PurityReport pur = purity(rho, ctx.target);
    std::vector<double> row{ctx.lindblad->times[k], rho.trace().real(), pur.total, pur.remainder};
    for (double p : rho.populations()) row.push_back(p);
    csv.row(row);
  }
  csv.close();
  ctx.produced("lindblad.csv", "lindblad", "density_series", csv.rows());
}

void run_ensemble_engine(Context& ctx) {
  const Scenario& s = ctx.s;
  ctx.note("ensemble: " + std::to_string(s.numerics.n_traj) + " trajectories");
  EnsembleOptions opt;
  opt.trajectory.t_final = s.numerics.t_final;
  opt.trajectory.dt = s.dt();
  opt.trajectory.sample_points = s.numerics.sample_points;
  if (s.ensemble.postselect) {
    opt.trajectory.consistency = ConsistencyFilter{ctx.partition, ctx.target, 0.5};
    opt.trajectory.stop_when_inconsistent = s.ensemble.stop_when_inconsistent;
  }
  opt.n_traj = s.numerics.n_traj;
  opt.base_seed = ctx.seed;
  opt.threads = ctx.threads;
  opt.partition = ctx.partition;
  opt.keep_records = true;
  const EnsembleSummary sum = run_ensemble(ctx.initial(), ctx.H0, ctx.c, opt);

  const auto tracked = tracked_states((*ctx.partition)[ctx.target]);
  std::vector<std::string> header{"t", "running", "consistent"};
  for (Index i : tracked) header.push_back(column_label(ctx.basis, i));
  for (const auto& col : ctx.subspace_columns()) header.push_back(col);
  CsvWriter csv(ctx.dir / "ensemble.csv", header);
  for (std::size_t k = 0; k < sum.times.size(); ++k) {
    std::vector<double> row{sum.times[k], static_cast<double>(sum.running_count[k]),
                            static_cast<double>(s.ensemble.postselect ? sum.consistent_count[k] : sum.running_count[k])};
    const auto& fock = s.ensemble.postselect ? sum.consistent_fock_populations[k] : sum.fock_populations[k];
    // Target-state columns are normalized within the averaged subset; NaN
    // marks samples with no contributing trajectory.
    const int n = s.ensemble.postselect ? sum.consistent_count[k] : sum.running_count[k];
    for (Index i : tracked) row.push_back(n > 0 ? fock[static_cast<std::size_t>(i)] : std::nan(""));
    for (double p : sum.subspace_populations[k]) row.push_back(p);
    csv.row(row);
  }
  csv.close();
  ctx.produced("ensemble.csv", "ensemble", "population_series", csv.rows());

  json rec;
  rec["rng"] = kRngId;
  rec["base_seed"] = ctx.seed;
  rec["t_final"] = s.numerics.t_final;
  json runs = json::array();
  for (std::size_t i = 0; i < sum.records.size(); ++i) {
    runs.push_back({{"index", i}, {"seed", sum.seeds[i]}, {"detections", sum.records[i].count()}});
  }
  rec["trajectories"] = runs;
  {
    std::ofstream out(ctx.dir / "ensemble_records.json");
    out << rec.dump(1) << '\n';
    if (!out) throw ResourceError("cannot write ensemble_records.json");
  }
  ctx.produced("ensemble_records.json", "ensemble", "record_summary", sum.records.size());

  if (ctx.lindblad && !sum.density_matrices.empty() && sum.times.size() == ctx.lindblad->times.size()) {
    CsvWriter cmp(ctx.dir / "unraveling_comparison.csv", {"t", "trace_distance"});
    for (std::size_t k = 0; k < sum.times.size(); ++k) {
      cmp.row(std::vector<double>{sum.times[k], trace_distance(sum.density_matrices[k], ctx.lindblad->states[k].to_dense())});
    }
    cmp.close();
    ctx.produced("unraveling_comparison.csv", "ensemble", "trace_distance_series", cmp.rows());
  }
}

void run_trajectory_engine(Context& ctx) {
  const Scenario& s = ctx.s;
  const std::uint64_t seed = derive_seed(ctx.seed, 0);
  ctx.note("trajectory: dimension " + std::to_string(ctx.basis.size()) + ", seed " + std::to_string(seed));
  TrajectoryOptions opt;
  opt.t_final = s.numerics.t_final;
  opt.dt = s.dt();
  opt.sample_points = s.numerics.sample_points;
  opt.store_states = true;
  JumpPropagator prop(ctx.H0, ctx.c);
  const TrajectoryResult res = run_trajectory(ctx.initial(), prop, opt, seed);
  const ObservableSeries obs = observables_series(res.times, res.states, ctx.basis, s.measurement);

  std::vector<std::string> header{"t", "fluct_c", "fluct_D", "local_density_variance"};
  for (int m : obs.momentum_labels) header.push_back("n_k" + std::to_string(m));
  for (const auto& col : ctx.subspace_columns()) header.push_back(col);
  header.push_back("detections");
  CsvWriter csv(ctx.dir / "trajectory.csv", header);
  for (std::size_t k = 0; k < obs.times.size(); ++k) {
    std::vector<double> row{obs.times[k], obs.fluct_c[k], obs.fluct_d[k], obs.local_density_variance[k]};
    if (!obs.momentum_labels.empty()) {
      for (double n : obs.momentum_distribution[k]) row.push_back(n);
    }
    for (double p : ctx.partition->populations(res.states[k])) row.push_back(p);
    row.push_back(static_cast<double>(res.record.count_until(obs.times[k])));
    csv.row(row);
  }
  csv.close();
  ctx.produced("trajectory.csv", "trajectory", "observable_series", csv.rows());

  json side;
  side["rng"] = kRngId;
  side["seed"] = seed;
  side["base_seed"] = ctx.seed;
  side["parameters"] = json::parse(scenario_to_json(s));
  side["t_final"] = res.record.t_final;
  side["momentum_labels"] = obs.momentum_labels;
  side["jump_times"] = res.record.jump_times;
  {
    std::ofstream out(ctx.dir / "trajectory.json");
    out << side.dump() << '\n';
    if (!out) throw ResourceError("cannot write trajectory.json");
  }
  ctx.produced("trajectory.json", "trajectory", "detection_record", res.record.count());
  ctx.trajectory_record = res.record;
}

SteadyStateSpec steady_spec(const Scenario& s) {
  using C = SteadyStateSettings::Coefficients;
  switch (s.steady_state.coefficients) {
    case C::uniform: return SteadyStateSpec::uniform(s.model.lattice, s.steady_state.delta_n);
    case C::random:
      return SteadyStateSpec::random(s.model.lattice, s.steady_state.delta_n, s.steady_state.coefficient_seed);
    case C::explicit_values: break;
  }
  SteadyStateSpec spec{s.model.lattice, s.steady_state.delta_n, s.steady_state.values};
  spec.validate();
  return spec;
}

void run_steady_state(Context& ctx) {
  const Scenario& s = ctx.s;
  ctx.note("steady_state: building the dark state");
  const QuantumState psi = build_steady_state(steady_spec(s));
  // Interference between pair factors leaves rounding residue on
  // cancelled configurations; it is dropped from the table.
  const double floor = kAmplitudeFloor * psi.amplitudes.cwiseAbs().maxCoeff();
  CsvWriter csv(ctx.dir / "steady_state.csv", {"occupation", "re", "im"});
  for (Index i = 0; i < psi.amplitudes.size(); ++i) {
    const cplx a = psi.amplitudes[i];
    if (std::abs(a) <= floor) continue;
    csv.row(std::vector<CsvCell>{ctx.basis.label(i), a.real(), a.imag()});
  }
  csv.close();
  ctx.produced("steady_state.csv", "steady_state", "amplitudes", csv.rows());

  const DarkStateReport rep = verify_dark_state(psi, ctx.basis, s.model, s.measurement);
  const QuantumState sf = superfluid_state(ctx.basis);
  json j;
  j["tunnelling_residual"] = rep.tunnelling_residual;
  j["delta_N_mean"] = rep.delta_n_mean;
  j["delta_N_residual"] = rep.delta_n_residual;
  j["measurement_variance"] = rep.measurement_variance;
  j["h0_residual"] = rep.h0_residual;
  j["lindblad_residual"] = rep.lindblad_residual;
  j["superfluid_overlap"] = std::abs(sf.amplitudes.dot(psi.amplitudes));
  {
    std::ofstream out(ctx.dir / "steady_state_report.json");
    out << j.dump(2) << '\n';
    if (!out) throw ResourceError("cannot write steady_state_report.json");
  }
  ctx.produced("steady_state_report.json", "steady_state", "dark_state_report", 1);
}

void run_infer(Context& ctx) {
  const Scenario& s = ctx.s;
  const auto hyps = hypotheses_from_partition(*ctx.partition, s.measurement);
  const std::size_t truth = s.infer.true_subspace.value_or(ctx.target);
  DetectionRecord record;
  std::string source;
  if (ctx.trajectory_record) {
    record = *ctx.trajectory_record;
    source = "trajectory";
  } else {
    Xoshiro256 rng(derive_seed(ctx.seed, 0));
    record = simulate_poisson_record(hyps[truth].rate, s.numerics.t_final, rng);
    source = "poisson";
  }
  ctx.note("infer: " + std::to_string(record.count()) + " detections from " + source + " record");
  const auto exponent = s.infer.doubled_exponent ? LikelihoodExponent::doubled : LikelihoodExponent::count;
  const std::size_t rows = write_posterior_csv(ctx.dir / "posterior.csv", hyps, record, s.numerics.sample_points,
                                               exponent);
  ctx.produced("posterior.csv", "infer", "posterior_series", rows);

  const Posterior final_post = bayes_update(hyps, record.count(), record.t_final, exponent);
  json j;
  j["record_source"] = source;
  j["true_subspace"] = source == "poisson" ? json(hyps[truth].label) : json(nullptr);
  j["detections"] = record.count();
  j["t_final"] = record.t_final;
  j["confidence_factor"] = s.infer.confidence;
  j["exponent"] = s.infer.doubled_exponent ? "doubled" : "count";
  json hs = json::array();
  const auto times = distinguishability_time(hyps, truth, s.infer.confidence);
  for (std::size_t n = 0; n < hyps.size(); ++n) {
    hs.push_back({{"label", hyps[n].label},
                  {"rate", hyps[n].rate},
                  {"prior", hyps[n].prior},
                  {"posterior", final_post.probabilities[n]},
                  {"distinguishability_time", std::isfinite(times[n]) ? json(times[n]) : json(nullptr)}});
  }
  j["hypotheses"] = hs;
  j["argmax"] = hyps[final_post.argmax()].label;
  if (final_post.warning) j["warning"] = *final_post.warning;
  {
    std::ofstream out(ctx.dir / "inference.json");
    out << j.dump(2) << '\n';
    if (!out) throw ResourceError("cannot write inference.json");
  }
  ctx.produced("inference.json", "infer", "inference_summary", 1);
}

}  // namespace

const char* version_number() { return ZENO_VERSION_STRING; }

std::string version_string() { return std::string("zeno-nh ") + version_number() + " (rng " + std::string(kRngId) + ")"; }

std::string subspace_label(cplx o) {
  std::ostringstream label;
  label << "o=" << o.real();
  if (o.imag() != 0.0) label << (o.imag() > 0 ? "+" : "") << o.imag() << "i";
  return label.str();
}

RunReport run_scenario(const Scenario& scenario, const RunOptions& options) {
  scenario.validate();
  RunReport report;
  report.directory = options.out_dir.value_or(fs::path(scenario.outputs));
  const std::uint64_t seed = options.seed.value_or(scenario.numerics.base_seed);
  const int threads = options.threads.value_or(scenario.threads);
  if (threads < 1) throw ValidationError("threads", "must be positive");

  std::error_code ec;
  fs::create_directories(report.directory, ec);
  if (ec) throw ResourceError("cannot create run directory " + report.directory.string() + ": " + ec.message());

  Manifest manifest(report.directory, scenario, seed, threads);
  report.status = "running";
  try {
    Context ctx{scenario, report.directory, seed, threads, manifest, report, options.log,
                build_basis(scenario.model.lattice), nullptr, 0, {}, {}, std::nullopt, std::nullopt};
    ctx.partition =
        std::make_shared<const SubspacePartition>(enumerate_zeno_subspaces(scenario.measurement, ctx.basis));
    ctx.target = *ctx.partition->find(scenario.measurement.zeno_eigenvalue);
    ctx.H0 = build_hamiltonian(scenario.model, ctx.basis);
    ctx.c = build_jump_operator(scenario.measurement, ctx.basis);

    const ScaleEstimate scales = estimate_scales(scenario.model, scenario.measurement, (*ctx.partition)[ctx.target]);
    if (scales.warning) {
      report.warnings.push_back(*scales.warning);
      manifest.warn(*scales.warning);
    }

    // Lindblad before ensemble (for the comparison table) and trajectory
    // before infer (for the record); otherwise scenario order.
    std::vector<Engine> order;
    for (Engine first : {Engine::lindblad, Engine::trajectory}) {
      if (scenario.uses(first)) order.push_back(first);
    }
    for (Engine e : scenario.engines) {
      if (e != Engine::lindblad && e != Engine::trajectory) order.push_back(e);
    }
    for (Engine e : order) {
      switch (e) {
        case Engine::lindblad: run_lindblad(ctx); break;
        case Engine::trajectory: run_trajectory_engine(ctx); break;
        case Engine::ensemble: run_ensemble_engine(ctx); break;
        case Engine::nonhermitian: run_nonhermitian(ctx); break;
        case Engine::raman: run_raman(ctx); break;
        case Engine::steady_state: run_steady_state(ctx); break;
        case Engine::infer: run_infer(ctx); break;
      }
    }
  } catch (const std::exception& e) {
    report.status = "failed";
    manifest.finish("failed", e.what());
    throw;
  }
  report.status = "complete";
  manifest.finish("complete");
  return report;
}

DetectionRecord load_detection_record(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ResourceError("cannot read detection record " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("record", std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("jump_times") || !j["jump_times"].is_array()) {
    throw ValidationError("jump_times", "detection record needs a jump_times array");
  }
  if (!j.contains("t_final") || !j["t_final"].is_number()) throw ValidationError("t_final", "missing or not a number");
  DetectionRecord r;
  r.t_final = j["t_final"].get<double>();
  double last = -INFINITY;
  for (const auto& v : j["jump_times"]) {
    if (!v.is_number()) throw ValidationError("jump_times", "entries must be numbers");
    const double t = v.get<double>();
    if (!(t >= 0.0) || t > r.t_final || t < last) {
      throw ValidationError("jump_times", "times must be non-decreasing within [0, t_final]");
    }
    r.jump_times.push_back(t);
    last = t;
  }
  return r;
}

std::vector<SubspaceHypothesis> load_hypotheses(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ResourceError("cannot read hypotheses " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("hypotheses", std::string("malformed JSON: ") + e.what());
  }
  const json& list = j.is_object() && j.contains("hypotheses") ? j["hypotheses"] : j;
  if (!list.is_array() || list.empty()) throw ValidationError("hypotheses", "expected a nonempty list");
  std::vector<SubspaceHypothesis> hyps;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const json& h = list[i];
    const std::string field = "hypotheses[" + std::to_string(i) + "]";
    if (!h.is_object() || !h.contains("rate") || !h["rate"].is_number()) {
      throw ValidationError(field + ".rate", "missing or not a number");
    }
    SubspaceHypothesis x;
    x.rate = h["rate"].get<double>();
    x.prior = h.contains("prior") ? h["prior"].get<double>() : 1.0 / static_cast<double>(list.size());
    x.label = h.contains("label") ? h["label"].get<std::string>() : "h" + std::to_string(i);
    hyps.push_back(x);
  }
  try {
    validate_hypotheses(hyps);
  } catch (const ContractViolation& e) {
    throw ValidationError("hypotheses", e.what());
  }
  return hyps;
}

std::size_t write_posterior_csv(const fs::path& path, const std::vector<SubspaceHypothesis>& hyps,
                                const DetectionRecord& record, int samples, LikelihoodExponent exponent) {
  if (samples < 1) throw ValidationError("sample_points", "must be positive");
  std::vector<double> times;
  for (int k = 0; k <= samples; ++k) times.push_back(record.t_final * k / samples);
  const auto series = posterior_series(hyps, record, times, exponent);
  std::vector<std::string> header{"t", "count"};
  for (const auto& h : hyps) header.push_back("p_" + h.label);
  CsvWriter csv(path, header);
  for (std::size_t k = 0; k < series.size(); ++k) {
    std::vector<double> row{times[k], static_cast<double>(series[k].count)};
    for (double p : series[k].probabilities) row.push_back(p);
    csv.row(row);
  }
  csv.close();
  return csv.rows();
}

}  // namespace zeno
