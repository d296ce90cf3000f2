#include <doctest.h>

#include <cmath>

#include "test_helpers.hpp"
#include "zenogate/noise.hpp"

using namespace zenogate;

TEST_CASE("static realization is constant and bounded") {
  const NoiseModel model = NoiseModel::static_noise(0.3);
  Rng rng(1);
  const auto r = sample_realization(model, 3, 50.0, 1e-3, rng);
  REQUIRE(r.static_values.size() == 3);
  for (int q = 0; q < 3; ++q) {
    CHECK(std::abs(r.static_values[q]) <= 0.3);
    CHECK(r.amplitude(q, 0.0) == r.amplitude(q, 42.0));
  }
  Rng rng2(2);
  const auto zero = sample_realization(NoiseModel::static_noise(0.0), 3, 1.0,
                                       1e-3, rng2);
  CHECK(zero.amplitude(0, 0.5) == 0.0);
}

TEST_CASE("one-over-f realization causality and vanishing-rate limit") {
  Rng rng(3);
  const auto empty = sample_realization(
      NoiseModel::one_over_f(1.0, 0.0, 2.0), 2, 10.0, 1e-3, rng);
  CHECK(empty.amplitude(0, 5.0) == 0.0);

  NoiseRealization manual;
  manual.pulse_lifetime = 2.0;
  manual.pulses = {{{1.0, 0.5}, {4.0, -0.25}}};
  CHECK(manual.amplitude(0, 0.5) == 0.0);  // before the first pulse
  CHECK(manual.amplitude(0, 1.0) == doctest::Approx(0.5));
  CHECK(manual.amplitude(0, 3.0) == doctest::Approx(0.5 * std::exp(-1.0)));
  CHECK(manual.amplitude(0, 5.0) ==
        doctest::Approx(0.5 * std::exp(-2.0) - 0.25 * std::exp(-0.5)));

  FluctuatorTrace trace(manual, 0);
  for (double t : {0.25, 0.5, 1.5, 2.5, 4.1, 6.0})
    CHECK(trace.advance_to(t) == doctest::Approx(manual.amplitude(0, t)));
}

TEST_CASE("one-over-f ensemble correlation matches the Lorentzian form") {
  // C(s) = (rate * tau * eps^2 / 6) exp(-s/tau), estimated over many samples.
  const double eps = 0.8, rate = 1.0, tau = 2.0;
  const NoiseModel model = NoiseModel::one_over_f(eps, rate, tau);
  const double t0 = 25.0;
  const int samples = 20000;
  Rng rng(77);
  std::vector<double> lags = {0.0, 1.0, 2.0, 4.0};
  std::vector<double> acc(lags.size(), 0.0);
  for (int s = 0; s < samples; ++s) {
    const auto r = sample_realization(model, 1, 40.0, 1e-2, rng);
    const double base = r.amplitude(0, t0);
    for (size_t i = 0; i < lags.size(); ++i)
      acc[i] += base * r.amplitude(0, t0 + lags[i]);
  }
  const double c0 = rate * tau * eps * eps / 6.0;
  for (size_t i = 0; i < lags.size(); ++i) {
    const double estimate = acc[i] / samples;
    const double expected = c0 * std::exp(-lags[i] / tau);
    CHECK(estimate == doctest::Approx(expected).epsilon(0.12));
  }
  // Fitted decay constant from the lag-1 / lag-0 ratio within 20% of tau.
  const double fitted = -1.0 / std::log(acc[1] / acc[0]);
  CHECK(fitted == doctest::Approx(tau).epsilon(0.2));
}

TEST_CASE("decoherence rates and strength matching") {
  const double T = 60.0;
  const NoiseModel stat = NoiseModel::static_noise(0.05);
  const double gamma_ref = 0.05 * 0.05 * T / 3.0;
  CHECK(decoherence_rate(stat, T).value == doctest::Approx(gamma_ref));

  SUBCASE("static to static is the identity") {
    const NoiseModel back = match_strength(decoherence_rate(stat, T), stat, T);
    CHECK(back.epsilon == doctest::Approx(stat.epsilon));
  }
  SUBCASE("formula instantiation for 1/f") {
    const NoiseModel target = NoiseModel::one_over_f(1.0, 1.0, 10.0);
    const NoiseModel matched =
        match_strength(decoherence_rate(stat, T), target, T);
    CHECK(matched.epsilon ==
          doctest::Approx(0.05 * std::sqrt(2.0 * T / (1.0 * 100.0))));
    // Idempotence: re-matching does not move the amplitude.
    const NoiseModel again =
        match_strength(decoherence_rate(stat, T), matched, T);
    CHECK(again.epsilon == doctest::Approx(matched.epsilon));
  }
  SUBCASE("white matching equals the reference rate") {
    const NoiseModel white =
        match_strength(decoherence_rate(stat, T), NoiseModel::white(1.0), T);
    CHECK(white.gamma == doctest::Approx(gamma_ref));
    CHECK(decoherence_rate(white, T).value == doctest::Approx(gamma_ref));
  }
  SUBCASE("degenerate 1/f parameters are rejected") {
    CHECK_THROWS(match_strength({1.0}, NoiseModel::one_over_f(1.0, 0.0, 1.0), T));
    CHECK_THROWS(match_strength({0.0}, NoiseModel::white(1.0), T));
  }
}

TEST_CASE("white matching reproduces the static coherence decay to leading order") {
  // Single qubit under H = lambda X with lambda ~ U(-eps, eps):
  // <Z>(T) = E[cos(2 lambda T)] = sinc(2 eps T) ~ 1 - (2/3) eps^2 T^2.
  // The matched Lindblad gives <Z>(T) = exp(-2 gamma T) ~ 1 - 2 gamma T with
  // gamma = eps^2 T / 3: identical second-order decay.
  const double T = 2.0, eps = 0.02;
  const double ensemble = std::sin(2 * eps * T) / (2 * eps * T);
  const double gamma = eps * eps * T / 3.0;
  const double lindblad = std::exp(-2.0 * gamma * T);
  CHECK(ensemble == doctest::Approx(lindblad).epsilon(1e-6));
}

TEST_CASE("noise generator descriptors") {
  Rng rng(5);
  const NoiseModel stat = NoiseModel::static_noise(0.0);
  const auto r = sample_realization(stat, 2, 1.0, 1e-3, rng);
  const auto terms = noise_generator(stat, r, 2, 0.5);
  REQUIRE(terms.hamiltonian.size() == 2);
  for (const auto& h : terms.hamiltonian) CHECK(h.amplitude == 0.0);
  CHECK(terms.dissipators.empty());

  const auto white = noise_generator(NoiseModel::white(0.25), {}, 3, 0.0);
  REQUIRE(white.dissipators.size() == 3);
  for (const auto& d : white.dissipators) {
    CHECK(d.rate == doctest::Approx(0.25));
    CHECK(d.op.weight() == 1);
  }
}

TEST_CASE("Lindblad oracle step") {
  Mat rho(2, 2);
  rho << 1, 0, 0, 0;
  const Pauli x = Pauli::from_string("X");

  SUBCASE("dt = 0 is the identity") {
    const Mat out = lindblad_oracle_step(rho, {{0.3, x}}, 0.0);
    CHECK(zenogate::testing::max_abs(out - rho) < 1e-15);
  }
  SUBCASE("|+> is a dark state of the sigma-x dissipator") {
    Mat plus(2, 2);
    plus << 0.5, 0.5, 0.5, 0.5;
    const Mat out = lindblad_oracle_step(plus, {{0.3, x}}, 1e-3);
    CHECK(zenogate::testing::max_abs(out - plus) < 1e-12);
  }
  SUBCASE("<Z> decays as exp(-2 sigma^2 t)") {
    const double s2 = 0.5, dt = 1e-3;
    Mat state = rho;
    const int steps = 2000;
    for (int i = 0; i < steps; ++i)
      state = lindblad_oracle_step(state, {{s2, x}}, dt);
    const double z = (state(0, 0) - state(1, 1)).real();
    CHECK(z == doctest::Approx(std::exp(-2 * s2 * steps * dt)).epsilon(1e-3));
  }
}
