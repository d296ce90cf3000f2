#include <doctest.h>

#include <cmath>
#include <map>

#include "test_helpers.hpp"
#include "zenogate/steer.hpp"

using namespace zenogate;
using zenogate::testing::adapted_gate;

namespace {
constexpr double kPi = GateSpec::kPi;
}  // namespace

TEST_CASE("decode table reproduces the published rows") {
  const GateSpec spec = adapted_gate();
  const DecodeTable table = build_decode_table(spec.code, spec.H, spec.X);
  CHECK(table.entries().size() == 12);

  // Published rows as (syndrome, error-as-product, class).
  struct Row {
    const char* syndrome;
    const char* base;  // environmental factor E
    bool times_x;
    int error_class;
  };
  const Row rows[] = {
      {"0000", "IIIII", false, 0}, {"1000", "XIIII", false, 2},
      {"1100", "IXIII", false, 2}, {"0100", "IIXII", false, 2},
      {"0010", "IIIXI", false, 0}, {"0001", "IIIIX", false, 0},
      {"0011", "XIIII", true, 1},  {"0111", "IXIII", true, 1},
      {"1111", "IIXII", true, 0},  {"1001", "IIIXI", true, 1},
      {"1010", "IIIIX", true, 1},  {"1011", "IIIII", true, 2},
  };
  for (const Row& row : rows) {
    const DecodeEntry* entry = table.find(Syndrome::from_string(row.syndrome));
    REQUIRE_MESSAGE(entry != nullptr, row.syndrome);
    const Pauli base = Pauli::from_string(row.base);
    const Pauli expected_error = row.times_x ? base * spec.X : base;
    CHECK_MESSAGE(entry->error == expected_error, row.syndrome);
    CHECK_MESSAGE(static_cast<int>(entry->error_class) == row.error_class,
                  row.syndrome);
  }
}

TEST_CASE("classification follows the commutation structure") {
  const GateSpec spec = adapted_gate();
  const Pauli x2 = Pauli::from_string("IXIII");
  const Pauli x3 = Pauli::from_string("IIXII");
  const Pauli x4 = Pauli::from_string("IIIXI");
  CHECK(classify(x4, ErrorSubspace::E, spec.H, spec.X) == ErrorClass::Class0);
  CHECK(classify(x2, ErrorSubspace::E, spec.H, spec.X) == ErrorClass::Class2);
  CHECK(classify(x2, ErrorSubspace::EX, spec.H, spec.X) == ErrorClass::Class1);
  CHECK(classify(x3, ErrorSubspace::EX, spec.H, spec.X) == ErrorClass::Class0);
  CHECK(classify(Pauli::identity(5), ErrorSubspace::EX, spec.H, spec.X) ==
        ErrorClass::Class2);  // the measurement-induced X itself
}

TEST_CASE("correction angles") {
  const GateSpec spec = adapted_gate();
  const double T = spec.total_time();

  CHECK(correction_angle(ErrorClass::Class0, spec, 0.3 * T, 1.23) == 0.0);

  // Class 1 at tau -> 0: denominator -> 1, angle -> pi/2.
  CHECK(correction_angle(ErrorClass::Class1, spec, 1e-9, 0.0) ==
        doctest::Approx(kPi / 2).epsilon(1e-9));

  // Class 2 at tau = T/4 with the published denominator 1 - 1/4 (sinc(pi)=0).
  const double beta = 0.37;
  CHECK(correction_angle(ErrorClass::Class2, spec, T / 4, beta) ==
        doctest::Approx(-(beta + 2 * spec.theta) / 0.75));

  CHECK_THROWS(correction_angle(ErrorClass::Class1, spec, T, 0.0));
}

TEST_CASE("main-text class formulas agree with the branch angles") {
  // Class 1 is (pi/2)/denominator precisely because beta_EX = pi/2 in the
  // {E,H}=0, [E,X]=0 branch.
  const GateSpec spec = adapted_gate();
  const double T = spec.total_time();
  const Pauli e = Pauli::from_string("IXIII");
  for (double tau : {T / 8, T / 4, T / 3}) {
    const auto branches = error_state_spec(spec, e, tau);
    REQUIRE(branches.size() == 2);
    CHECK(branches[1].beta == doctest::Approx(kPi / 2));
    const double denom = steering_denominator(spec, tau);
    CHECK(correction_angle(ErrorClass::Class1, spec, tau, 0.0) ==
          doctest::Approx(branches[1].beta / denom));
  }
}

TEST_CASE("steering decisions per syndrome") {
  const GateSpec spec = adapted_gate();
  const DecodeTable table = build_decode_table(spec.code, spec.H, spec.X);
  const double T = spec.total_time();
  const double tau = T / 4;

  SUBCASE("class 0 rows leave the path unchanged") {
    const auto d = steer(Syndrome::from_string("0010"), tau, spec, table);
    REQUIRE(d.has_value());
    CHECK(d->theta_tilde == 0.0);
    CHECK_FALSE(d->new_path.steered);
  }
  SUBCASE("measurement jump steers with the class-2 formula") {
    const auto d = steer(Syndrome::from_string("1011"), tau, spec, table);
    REQUIRE(d.has_value());
    const double beta = measurement_induced_angle(spec, tau);
    CHECK(d->theta_tilde ==
          doctest::Approx(-(beta + 2 * spec.theta) /
                          steering_denominator(spec, tau)));
    CHECK(d->new_path.steered);
    CHECK(d->new_path.tau == tau);
  }
  SUBCASE("environmental class-2 row uses the tabulated branch angle") {
    const auto d = steer(Syndrome::from_string("1100"), tau, spec, table);
    REQUIRE(d.has_value());
    const auto branches =
        error_state_spec(spec, Pauli::from_string("IXIII"), tau);
    CHECK(d->theta_tilde ==
          doctest::Approx(-(branches[0].beta + 2 * spec.theta) /
                          steering_denominator(spec, tau)));
  }
  SUBCASE("unknown syndrome yields no decision") {
    CHECK_FALSE(steer(Syndrome::from_string("0110"), tau, spec, table)
                    .has_value());
  }
  SUBCASE("late jumps are refused") {
    CHECK_FALSE(steer(Syndrome::from_string("1011"), 0.999999 * T, spec, table)
                    .has_value());
  }
}

TEST_CASE("steered path is continuous at tau") {
  const GateSpec spec = adapted_gate();
  const double T = spec.total_time();
  const double tau = 0.37 * T;
  const PathState steered = PathState::steered_from(tau, -1.1);
  CHECK(zenogate::testing::max_abs(path_unitary(spec, steered, tau) -
                                   path_unitary(spec, PathState::base(), tau)) ==
        0.0);
}

TEST_CASE("final frame oracle for every published row") {
  const GateSpec spec = adapted_gate();
  const DecodeTable table = build_decode_table(spec.code, spec.H, spec.X);
  const double T = spec.total_time();
  for (const DecodeEntry& entry : table.entries()) {
    for (double tau : {T / 8, T / 4, T / 3}) {
      const auto decision = steer(entry.syndrome, tau, spec, table);
      REQUIRE(decision.has_value());
      const SteeringDecision* applied =
          entry.rule == SteerRule::NoChange ? nullptr : &*decision;
      const double fidelity =
          emulated_final_frame_check(spec, entry, tau, applied);
      CHECK_MESSAGE(fidelity > 1.0 - 1e-6,
                    entry.syndrome.to_string() << " tau=" << tau);
    }
  }
}

TEST_CASE("class 1 limit tau -> 0") {
  const GateSpec spec = adapted_gate();
  const DecodeTable table = build_decode_table(spec.code, spec.H, spec.X);
  const DecodeEntry* entry = table.find(Syndrome::from_string("0011"));
  REQUIRE(entry != nullptr);
  const double tau = 1e-7 * spec.total_time();
  const auto decision = steer(entry->syndrome, tau, spec, table);
  REQUIRE(decision.has_value());
  CHECK(decision->theta_tilde == doctest::Approx(kPi / 2).epsilon(1e-5));
  CHECK(emulated_final_frame_check(spec, *entry, tau, &*decision) > 1.0 - 1e-6);
}

TEST_CASE("without steering, class 1 and 2 rows miss the target frame") {
  const GateSpec spec = adapted_gate();
  const DecodeTable table = build_decode_table(spec.code, spec.H, spec.X);
  const double tau = spec.total_time() / 4;
  for (const char* syn : {"1100", "1011", "0011"}) {
    const DecodeEntry* entry = table.find(Syndrome::from_string(syn));
    REQUIRE(entry != nullptr);
    CHECK(emulated_final_frame_check(spec, *entry, tau, nullptr) < 1.0 - 1e-3);
  }
}

TEST_CASE("decode table JSON export") {
  const GateSpec spec = adapted_gate();
  const DecodeTable table = build_decode_table(spec.code, spec.H, spec.X);
  const std::string json = table.to_json();
  CHECK(json.find("\"syndrome\":\"1100\"") != std::string::npos);
  CHECK(json.find("\"error\":\"IXIII\"") != std::string::npos);
  CHECK(json.find("\"class\":2") != std::string::npos);
}

TEST_CASE("syndrome collision raises a code-unsuitable error") {
  // The bare bit-flip code with X = X1 Z3: s_X equals the syndrome of X1.
  const StabilizerCode code = StabilizerCode::bit_flip();
  CHECK_THROWS(build_decode_table(code, Pauli::from_string("XXX"),
                                  Pauli::from_string("XIZ")));
}
