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


#include <benchmark/benchmark.h>

#include <memory>

#include "zeno/master_eq.hpp"
#include "zeno/model.hpp"
#include "zeno/trajectories.hpp"

namespace {

using namespace zeno;

struct EightSites {
  FockBasis basis = build_basis({8, 8, 1.0, Boundary::periodic});
  MeasurementConfig meas = measurement_for_gamma(100.0, pattern_weights(Pattern::even_sites, 8), 4.0);
  SparseOperator H0 = build_hamiltonian({1.0, 0.0, basis.config()}, basis);
  SparseOperator c = build_jump_operator(meas, basis);
};

const EightSites& eight() {
  static const EightSites s;
  return s;
}

void BM_BasisBuild(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) {
    FockBasis b = build_basis({m, m, 1.0, Boundary::periodic});
    benchmark::DoNotOptimize(b.size());
  }
}
BENCHMARK(BM_BasisBuild)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_HamiltonianMatvec(benchmark::State& state) {
  const auto& s = eight();
  CVector x = CVector::Random(s.basis.size()), y(s.basis.size());
  for (auto _ : state) {
    s.H0.apply_into(x, y);
    benchmark::DoNotOptimize(y.data());
  }
}
BENCHMARK(BM_HamiltonianMatvec)->Unit(benchmark::kMicrosecond);

void BM_RealCsrMatvec(benchmark::State& state) {
  const auto& s = eight();
  const RealCsr op = *RealCsr::from(s.H0);
  CVector x = CVector::Random(s.basis.size()), y(s.basis.size());
  for (auto _ : state) {
    op.apply(x, y);
    benchmark::DoNotOptimize(y.data());
  }
}
BENCHMARK(BM_RealCsrMatvec)->Unit(benchmark::kMicrosecond);

void BM_IntegratingFactorStep(benchmark::State& state) {
  const auto& s = eight();
  const JumpPropagator prop(s.H0, s.c);
  CVector psi = CVector::Random(s.basis.size()).normalized();
  for (auto _ : state) {
    prop.step(psi, 5e-4);
    psi.normalize();
    benchmark::DoNotOptimize(psi.data());
  }
}
BENCHMARK(BM_IntegratingFactorStep)->Unit(benchmark::kMicrosecond);

struct ThreeSites {
  FockBasis basis = build_basis({3, 3, 1.0, Boundary::open});
  MeasurementConfig meas = measurement_for_gamma(100.0, pattern_weights(Pattern::middle_site, 3), 1.0);
  std::shared_ptr<const SubspacePartition> partition =
      std::make_shared<SubspacePartition>(enumerate_zeno_subspaces(meas, basis));
  LindbladGenerator gen{build_hamiltonian({1.0, 0.0, basis.config()}, basis), build_jump_operator(meas, basis),
                        partition};
  BlockDensityMatrix rho = BlockDensityMatrix::pure(partition, CVector::Random(basis.size()).normalized());
};

void BM_LindbladBlockRhs(benchmark::State& state) {
  static const ThreeSites s;
  BlockDensityMatrix out(s.partition);
  for (auto _ : state) {
    s.gen.rhs_into(s.rho, out);
    benchmark::DoNotOptimize(out.block(0, 0).data());
  }
}
BENCHMARK(BM_LindbladBlockRhs)->Unit(benchmark::kMicrosecond);

void BM_LindbladUnblockedRhs(benchmark::State& state) {
  static const ThreeSites s;
  for (auto _ : state) {
    BlockDensityMatrix out = s.gen.rhs_unblocked(s.rho);
    benchmark::DoNotOptimize(out.block(0, 0).data());
  }
}
BENCHMARK(BM_LindbladUnblockedRhs)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
