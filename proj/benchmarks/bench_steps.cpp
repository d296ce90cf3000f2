#include <benchmark/benchmark.h>

#include "zenogate/ensemble.hpp"
#include "zenogate/filter.hpp"
#include "zenogate/geometry.hpp"
#include "zenogate/sde.hpp"

namespace {

using namespace zenogate;

GateSpec five_qubit_gate(double omega) {
  GateSpec spec;
  spec.code = append_ancillas(StabilizerCode::bit_flip(), 2);
  spec.H = Pauli::from_string("ZZZII");
  spec.X = Pauli::from_string("XIZXX");
  spec.theta = GateSpec::kPi / 6.0;
  spec.omega = omega;
  spec.kappa = 1.0;
  return spec;
}

void BM_sse_dense_step(benchmark::State& state) {
  const GateSpec spec = five_qubit_gate(0.1);
  std::vector<Mat> gens;
  for (const Pauli& g : spec.code.generators) gens.push_back(pauli_to_matrix(g));
  Vec psi = logical_plus(spec.code);
  Rng rng(1);
  for (auto _ : state) {
    sse_step(psi, gens, 1.0, 1e-3, rng);
    benchmark::DoNotOptimize(psi.data());
  }
}
BENCHMARK(BM_sse_dense_step);

void BM_trajectory_pure(benchmark::State& state) {
  const GateSpec spec = five_qubit_gate(0.5);
  SimOptions options;
  options.dt = 1e-3;
  options.initial_state = logical_plus(spec.code);
  long steps = 0;
  for (auto _ : state) {
    auto result = run_trajectory(spec, NoiseModel::none(), options, nullptr,
                                 Rng(state.iterations()));
    benchmark::DoNotOptimize(result.final_psi.data());
    steps += std::llround(spec.total_time() / options.dt);
  }
  state.counters["steps/s"] =
      benchmark::Counter(static_cast<double>(steps), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_trajectory_pure);

void BM_trajectory_with_filter(benchmark::State& state) {
  const GateSpec spec = five_qubit_gate(0.5);
  const DecodeTable table = build_decode_table(spec.code, spec.H, spec.X);
  const NoiseModel noise = NoiseModel::bitflip_jumps(1e-3);
  SimOptions options;
  options.dt = 1e-3;
  options.initial_state = logical_plus(spec.code);
  FilterParams params;
  long steps = 0;
  for (auto _ : state) {
    SteeringController controller(spec, noise, &table, params, true);
    auto result = run_trajectory(spec, noise, options, &controller,
                                 Rng(state.iterations()));
    benchmark::DoNotOptimize(result.final_psi.data());
    steps += std::llround(spec.total_time() / options.dt);
  }
  state.counters["steps/s"] =
      benchmark::Counter(static_cast<double>(steps), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_trajectory_with_filter);

void BM_horizontal_lift_loop(benchmark::State& state) {
  const GateSpec spec = five_qubit_gate(0.1);
  const Mat L0 = code_frame(spec.code);
  const double T = spec.total_time();
  for (auto _ : state) {
    auto lift = horizontal_lift(spec, PathState::base(), L0, 0.0, T, T / 4000);
    benchmark::DoNotOptimize(lift.holonomy_part.data());
  }
}
BENCHMARK(BM_horizontal_lift_loop);

void BM_estimator_step(benchmark::State& state) {
  const GateSpec spec = five_qubit_gate(0.1);
  FilterParams params;
  EstimatorEngine est(spec, NoiseModel::bitflip_jumps(1e-3), params);
  std::vector<double> q(4, 1.0);
  double t = 0.0;
  for (auto _ : state) {
    t += 5e-3;
    if (t > 0.9 * spec.total_time()) t = 0.0;
    est.step(q, t, 5e-3, false);
    benchmark::DoNotOptimize(est.expectations().data());
  }
}
BENCHMARK(BM_estimator_step);

}  // namespace

BENCHMARK_MAIN();
