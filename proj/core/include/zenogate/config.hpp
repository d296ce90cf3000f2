#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "zenogate/filter.hpp"
#include "zenogate/geometry.hpp"
#include "zenogate/noise.hpp"
#include "zenogate/pauli.hpp"
#include "zenogate/sde.hpp"

namespace zenogate {

// Raised for malformed configuration; carries the JSON field path. Maps to
// exit code 2 in the CLI.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentSpec {
  enum class Kind { Curve, Prop1, GammaSweep, OmegaSweep, NoiseCompare };
  Kind kind = Kind::Curve;
  std::vector<double> values;       // sweep values (omega/kappa or gamma)
  double fidelity_floor = 0.9;      // omega-sweep acceptance floor
  double pulse_rate = 1.0;          // noise-compare fluctuator rate
  std::vector<double> pulse_lifetimes{10.0, 1e-3};
};

struct RunConfig {
  StabilizerCode code;
  Pauli h;
  Pauli x;
  double theta = 0.0;
  double omega = 0.0;
  double kappa = 1.0;
  NoiseModel noise;

  double dt = 1e-3;
  long trajectories = 1;
  uint64_t seed = 1;
  bool steering = false;
  bool density_mode = false;
  std::string initial_state = "plus";  // "plus" or "zero"
  double settle_time = 0.0;
  FilterParams filter;
  std::optional<InjectedError> inject;
  int threads = 0;  // 0 = hardware concurrency

  std::string out_dir = "out";
  int bins = 200;
  bool events = false;
  bool traces = false;

  ExperimentSpec experiment;

  GateSpec gate_spec() const;
  Vec initial_state_vector() const;
  SimOptions sim_options() const;
  std::string echo_json() const;

  // Strict parsing: unknown keys are rejected with their field path.
  static RunConfig from_json_text(const std::string& text);
  static RunConfig from_file(const std::string& path);
};

}  // namespace zenogate
