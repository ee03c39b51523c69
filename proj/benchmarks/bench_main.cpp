// Copyright 2026 The dmftqsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "dmftqsim/analysis.hpp"
#include "dmftqsim/circuits.hpp"
#include "dmftqsim/dmft.hpp"
#include "dmftqsim/greens.hpp"
#include "dmftqsim/ground_state.hpp"
#include "dmftqsim/mitigation.hpp"

namespace {

using namespace dmftqsim;

const AimParameters kMott = AimParameters::half_filled(8, 1);

void BM_PureCircuit(benchmark::State& state) {
  const auto prep = ansatz_circuit(atomic_limit_angles());
  const auto c = interferometry_circuit(prep, trotterized_evolution(kMott, 6, 0.5), Axis::X, Axis::Y);
  for (auto _ : state) {
    auto s = QuantumState::zero(5);
    apply_circuit(s, c);
    benchmark::DoNotOptimize(s.vector().data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c.gates.size()));
}
BENCHMARK(BM_PureCircuit);

void BM_NoisyDensityCircuit(benchmark::State& state) {
  const auto c = interferometry_circuit(ansatz_circuit(atomic_limit_angles()),
                                        trotterized_evolution(kMott, 6, 0.5), Axis::X, Axis::Y);
  NoiseModel noise;
  noise.two_qubit_depolarizing = 0.01;
  for (auto _ : state) {
    auto s = QuantumState::zero(5, StateMode::Density);
    apply_circuit(s, c, noise);
    benchmark::DoNotOptimize(s.density().data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c.gates.size()));
}
BENCHMARK(BM_NoisyDensityCircuit);

void BM_TrotterStepMatrix(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(trotter_step_matrix(kMott, 0.5));
}
BENCHMARK(BM_TrotterStepMatrix);

void BM_TrotterErrorBound(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(trotter_error_bound(kMott, 7, 0.5));
}
BENCHMARK(BM_TrotterErrorBound);

void BM_VariationalGroundState(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(optimize_ansatz(kMott).energy);
}
BENCHMARK(BM_VariationalGroundState)->Unit(benchmark::kMillisecond);

void BM_SampledGreens(benchmark::State& state) {
  const auto prep = prepare_ground_state(kMott, 1e-2);
  MeasureOptions o;
  o.shots = 8192;
  for (auto _ : state) {
    ++o.seed;
    benchmark::DoNotOptimize(measure_greens_series(kMott, prep.circuit, 6, 0.5, o).series.ig_retarded);
  }
}
BENCHMARK(BM_SampledGreens)->Unit(benchmark::kMillisecond);

void BM_TwoCosineFit(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const double dt = 3.0 / n;
  const auto series = exact_greens_series(kMott, time_grid(n, dt));
  for (auto _ : state) benchmark::DoNotOptimize(fit_time_series(series, dt).residual);
}
BENCHMARK(BM_TwoCosineFit)->Arg(6)->Arg(30)->Unit(benchmark::kMillisecond);

void BM_Spectra(benchmark::State& state) {
  const auto fit = fit_time_series(exact_greens_series(kMott, time_grid(6, 0.5)), 0.5);
  for (auto _ : state) {
    const auto s = compute_spectra(fit, kMott);
    benchmark::DoNotOptimize(qp_weight_kramers_kronig(s.sigma).z);
  }
}
BENCHMARK(BM_Spectra)->Unit(benchmark::kMillisecond);

void BM_ZeroNoiseExtrapolation(benchmark::State& state) {
  const auto prep = prepare_ground_state(kMott, 1e-2);
  MeasureOptions o;
  o.exact_expectations = true;
  o.noise.two_qubit_depolarizing = 0.01;
  o.mitigation.zne = true;
  for (auto _ : state) {
    benchmark::DoNotOptimize(measure_greens_series(kMott, prep.circuit, 6, 0.5, o).series.ig_retarded);
  }
}
BENCHMARK(BM_ZeroNoiseExtrapolation)->Unit(benchmark::kMillisecond);

void BM_DmftIteration(benchmark::State& state) {
  DmftConfig c;
  c.solver = static_cast<SolverKind>(state.range(0));
  c.noise.two_qubit_depolarizing = c.solver == SolverKind::Sampled ? 0.01 : 0.0;
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(dmft_iterate(c, 1.0, ++seed).v_out);
}
BENCHMARK(BM_DmftIteration)
    ->Arg(static_cast<int>(SolverKind::ExactUnitary))
    ->Arg(static_cast<int>(SolverKind::ExactTrotter))
    ->Arg(static_cast<int>(SolverKind::Sampled))
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
