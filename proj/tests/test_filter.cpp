#include <doctest.h>

#include <cmath>

#include "test_helpers.hpp"
#include "zenogate/filter.hpp"

using namespace zenogate;
using zenogate::testing::adapted_gate;
using zenogate::testing::max_abs;

TEST_CASE("estimator initialization") {
  const GateSpec spec = adapted_gate();
  FilterParams params;
  EstimatorEngine est(spec, NoiseModel::none(), params);

  // rho_hat(0) = P0 / 2^k: half |00000><00000| + half |11100><11100|
  // (ancillas in |0>), purity 1/2, all generator expectations +1.
  const Mat& rho = est.rho_hat();
  CHECK(std::abs(rho.trace().real() - 1.0) < 1e-12);
  CHECK(std::abs((rho * rho).trace().real() - 0.5) < 1e-12);
  const Mat frame = code_frame(spec.code);
  CHECK(max_abs(rho - frame * frame.adjoint() / 2.0) < 1e-12);
  for (double e : est.expectations()) CHECK(e == doctest::Approx(1.0));
  CHECK(est.read_syndrome(0.0).trivial());
}

TEST_CASE("estimator is constant in the zero-information limit") {
  // kappa -> 0 with no noise: the estimator equation reduces to the drive
  // alone; with a frozen path nothing moves at all.
  GateSpec spec = adapted_gate();
  spec.kappa = 0.0;
  FilterParams params;
  EstimatorEngine est(spec, NoiseModel::none(), params);
  const Mat before = est.rho_hat();
  std::vector<double> q(4, 0.3);
  for (int i = 0; i < 50; ++i)
    est.step(q, i * 1e-2, 1e-2, /*frozen=*/true);
  CHECK(max_abs(est.rho_hat() - before) < 1e-12);
}

TEST_CASE("syndrome readout hysteresis") {
  const GateSpec spec = adapted_gate();
  FilterParams params;
  params.threshold = 0.8;
  params.hold = 5.0;
  EstimatorEngine est(spec, NoiseModel::none(), params);

  // Drive the estimator with currents synthesized for a sigma_x_2 error:
  // generators 1 and 2 flip to -1, generators 3 and 4 stay at +1.
  std::vector<double> q_flip = {-1.0, -1.0, 1.0, 1.0};
  double t = 0.0;
  const double delta = 5e-3;
  bool flipped = false;
  for (int i = 0; i < 6000 && !flipped; ++i) {
    t += delta;
    est.step(q_flip, t, delta, /*frozen=*/true);
    flipped = !est.read_syndrome(t).trivial();
  }
  CHECK(flipped);
  CHECK(est.read_syndrome(t).to_string() == "1100");
  // Sustained for at least the hold window before acceptance.
  CHECK(t >= params.hold);

  // Expectations dithering inside the dead band leave the syndrome unchanged.
  std::vector<double> q_dither = {-0.5, 0.5, 1.0, 1.0};
  for (int i = 0; i < 2000; ++i) {
    t += delta;
    est.step(q_dither, t, delta, /*frozen=*/true);
    est.read_syndrome(t);
  }
  CHECK(est.read_syndrome(t).to_string() == "1100");
}

TEST_CASE("detect_jump decodes through the table") {
  const GateSpec spec = adapted_gate();
  const DecodeTable table = build_decode_table(spec.code, spec.H, spec.X);
  const Syndrome trivial = Syndrome::from_string("0000");

  CHECK_FALSE(detect_jump(trivial, trivial, 1.0, 1.0, &table).has_value());

  const auto x2 = detect_jump(trivial, Syndrome::from_string("1100"), 2.5, 2.0,
                              &table);
  REQUIRE(x2.has_value());
  REQUIRE(x2->decoded != nullptr);
  CHECK(x2->decoded->error == Pauli::from_string("IXIII"));
  CHECK(x2->detect_time == 2.5);
  CHECK(x2->tau_estimate == 2.0);

  const auto xjump = detect_jump(trivial, Syndrome::from_string("1011"), 3.0,
                                 2.8, &table);
  REQUIRE(xjump.has_value());
  REQUIRE(xjump->decoded != nullptr);
  CHECK(xjump->decoded->error == Pauli::from_string("XIZXX"));

  const auto unknown = detect_jump(trivial, Syndrome::from_string("0110"), 3.0,
                                   2.8, &table);
  REQUIRE(unknown.has_value());
  CHECK(unknown->decoded == nullptr);
}

TEST_CASE("closed loop: injected error is detected with the right syndrome") {
  GateSpec spec = adapted_gate(0.05, 1.0);
  const DecodeTable table = build_decode_table(spec.code, spec.H, spec.X);
  FilterParams params;
  SimOptions options;
  options.dt = 1e-3;
  options.initial_state = logical_plus(spec.code);
  options.inject = InjectedError{Pauli::from_string("IXIII"), 20.0};
  options.settle_time = 30.0;

  int detected = 0, correct_syndrome = 0;
  double worst_latency = 0.0;
  const int n_traj = 10;
  for (int i = 0; i < n_traj; ++i) {
    SteeringController controller(spec, NoiseModel::none(), &table, params,
                                  /*steering_enabled=*/false);
    run_trajectory(spec, NoiseModel::none(), options, &controller,
                   Rng::for_trajectory(1234, i));
    if (!controller.jump_detected()) continue;
    ++detected;
    const JumpEvent& jump = controller.jumps().front();
    if (jump.syndrome.to_string() == "1100") ++correct_syndrome;
    worst_latency = std::max(worst_latency, jump.detect_time - 20.0);
  }
  CHECK(detected == n_traj);
  CHECK(correct_syndrome == n_traj);
  CHECK(worst_latency < 50.0);
}

TEST_CASE("no-error closed loop keeps expectations high") {
  GateSpec spec = adapted_gate(0.01, 1.0);
  FilterParams params;
  SimOptions options;
  options.dt = 2e-3;
  options.initial_state = logical_plus(spec.code);

  SteeringController controller(spec, NoiseModel::none(), nullptr, params,
                                false);
  controller.enable_trace();
  run_trajectory(spec, NoiseModel::none(), options, &controller,
                 Rng::for_trajectory(777, 3));
  REQUIRE_FALSE(controller.trace_times().empty());
  // This seed produces a no-jump trajectory; every smoothed expectation stays
  // near +1 throughout.
  if (!controller.jump_detected()) {
    double worst = 1.0;
    for (const auto& row : controller.trace_expectations())
      for (double e : row) worst = std::min(worst, e);
    CHECK(worst > 0.9);
  }
}

TEST_CASE("estimator syndrome is independent of the initialization") {
  // Feed the same synthetic record to the maximally mixed estimator and to a
  // pure-code-state estimator: the detected syndromes must match (detection
  // times may differ within the hold window).
  GateSpec spec = adapted_gate(0.05, 1.0);
  FilterParams params;
  EstimatorEngine mixed(spec, NoiseModel::none(), params);
  EstimatorEngine pure(spec, NoiseModel::none(), params);
  const Mat frame = code_frame(spec.code);
  const Vec plus = (frame.col(0) + frame.col(1)).normalized();
  pure.reset_to(Mat(plus * plus.adjoint()));

  Rng rng(2024);
  const double delta = 5e-3;
  double t = 0.0;
  std::vector<double> q(4);
  std::string mixed_syndrome, pure_syndrome;
  // Record synthesized for an X3 error after t = 10 (syndrome 0100), with
  // realistic current noise 1/(2 sqrt(kappa delta)).
  for (int i = 0; i < 8000; ++i) {
    t += delta;
    const bool after = t > 10.0;
    const double noise_scale = 1.0 / (2.0 * std::sqrt(delta));
    q[0] = 1.0 + noise_scale * rng.gaussian();
    q[1] = (after ? -1.0 : 1.0) + noise_scale * rng.gaussian();
    q[2] = 1.0 + noise_scale * rng.gaussian();
    q[3] = 1.0 + noise_scale * rng.gaussian();
    mixed.step(q, t, delta, true);
    pure.step(q, t, delta, true);
    const Syndrome& sm = mixed.read_syndrome(t);
    const Syndrome& sp = pure.read_syndrome(t);
    if (!sm.trivial() && mixed_syndrome.empty()) mixed_syndrome = sm.to_string();
    if (!sp.trivial() && pure_syndrome.empty()) pure_syndrome = sp.to_string();
  }
  CHECK(mixed_syndrome == "0100");
  CHECK(pure_syndrome == "0100");
}
