#include "zenogate/config.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace zenogate {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::string& path,
                         std::initializer_list<const char*> allowed) {
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed)
      if (key == a) ok = true;
    if (!ok) throw ConfigError("unknown key at " + path + "." + key);
  }
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback) {
  return obj.contains(key) ? obj.at(key).get<T>() : fallback;
}

double require_positive(double v, const std::string& path) {
  if (!(v > 0)) throw ConfigError(path + " must be positive");
  return v;
}

NoiseModel parse_noise(const json& j, const std::string& path) {
  reject_unknown_keys(j, path,
                      {"type", "epsilon", "pulse_rate", "pulse_lifetime",
                       "gamma", "axis"});
  const std::string type = get_or<std::string>(j, "type", "none");
  const std::string axis_s = get_or<std::string>(j, "axis", "X");
  if (axis_s.size() != 1) throw ConfigError(path + ".axis must be X, Y or Z");
  const char axis = axis_s[0];
  try {
    if (type == "none") return NoiseModel::none();
    if (type == "static")
      return NoiseModel::static_noise(j.at("epsilon").get<double>(), axis);
    if (type == "one_over_f")
      return NoiseModel::one_over_f(j.at("epsilon").get<double>(),
                                    j.at("pulse_rate").get<double>(),
                                    j.at("pulse_lifetime").get<double>(), axis);
    if (type == "white")
      return NoiseModel::white(j.at("gamma").get<double>(), axis);
    if (type == "bitflip_jumps")
      return NoiseModel::bitflip_jumps(j.at("gamma").get<double>(), axis);
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path + ": " + e.what());
  }
  throw ConfigError(path + ".type: unknown noise type \"" + type + "\"");
}

ExperimentSpec parse_experiment(const json& j, const std::string& path) {
  reject_unknown_keys(j, path,
                      {"kind", "values", "fidelity_floor", "pulse_rate",
                       "pulse_lifetimes"});
  ExperimentSpec spec;
  const std::string kind = get_or<std::string>(j, "kind", "curve");
  if (kind == "curve")
    spec.kind = ExperimentSpec::Kind::Curve;
  else if (kind == "prop1")
    spec.kind = ExperimentSpec::Kind::Prop1;
  else if (kind == "gamma_sweep")
    spec.kind = ExperimentSpec::Kind::GammaSweep;
  else if (kind == "omega_sweep")
    spec.kind = ExperimentSpec::Kind::OmegaSweep;
  else if (kind == "noise_compare")
    spec.kind = ExperimentSpec::Kind::NoiseCompare;
  else
    throw ConfigError(path + ".kind: unknown experiment \"" + kind + "\"");
  if (j.contains("values"))
    spec.values = j.at("values").get<std::vector<double>>();
  spec.fidelity_floor = get_or<double>(j, "fidelity_floor", 0.9);
  spec.pulse_rate = get_or<double>(j, "pulse_rate", 1.0);
  if (j.contains("pulse_lifetimes"))
    spec.pulse_lifetimes = j.at("pulse_lifetimes").get<std::vector<double>>();
  return spec;
}

}  // namespace

RunConfig RunConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  reject_unknown_keys(j, "$", {"code", "gate", "noise", "run", "output",
                               "experiment"});
  RunConfig cfg;
  try {
    if (!j.contains("code")) throw ConfigError("$.code is required");
    if (j.at("code").contains("file")) {
      reject_unknown_keys(j.at("code"), "$.code", {"file"});
      std::ifstream in(j.at("code").at("file").get<std::string>());
      if (!in) throw ConfigError("$.code.file: cannot open file");
      std::stringstream ss;
      ss << in.rdbuf();
      cfg.code = StabilizerCode::from_json(ss.str());
    } else {
      cfg.code = StabilizerCode::from_json(j.at("code").dump());
    }

    if (!j.contains("gate")) throw ConfigError("$.gate is required");
    const json& gate = j.at("gate");
    reject_unknown_keys(gate, "$.gate", {"h", "x", "theta", "omega", "kappa"});
    cfg.h = Pauli::from_string(gate.at("h").get<std::string>());
    cfg.x = Pauli::from_string(gate.at("x").get<std::string>());
    cfg.theta = gate.at("theta").get<double>();
    cfg.omega = require_positive(gate.at("omega").get<double>(), "$.gate.omega");
    cfg.kappa = require_positive(get_or<double>(gate, "kappa", 1.0),
                                 "$.gate.kappa");

    if (j.contains("noise")) cfg.noise = parse_noise(j.at("noise"), "$.noise");

    if (j.contains("run")) {
      const json& run = j.at("run");
      reject_unknown_keys(run, "$.run",
                          {"dt", "trajectories", "seed", "steering", "mode",
                           "initial_state", "settle_time", "filter", "inject",
                           "threads"});
      cfg.dt = require_positive(get_or<double>(run, "dt", 1e-3), "$.run.dt");
      cfg.trajectories = get_or<long>(run, "trajectories", 1);
      if (cfg.trajectories < 1)
        throw ConfigError("$.run.trajectories must be at least 1");
      cfg.seed = get_or<uint64_t>(run, "seed", 1);
      cfg.steering = get_or<bool>(run, "steering", false);
      const std::string mode = get_or<std::string>(run, "mode", "pure");
      if (mode != "pure" && mode != "density")
        throw ConfigError("$.run.mode must be \"pure\" or \"density\"");
      cfg.density_mode = mode == "density";
      cfg.initial_state = get_or<std::string>(run, "initial_state", "plus");
      if (cfg.initial_state != "plus" && cfg.initial_state != "zero")
        throw ConfigError("$.run.initial_state must be \"plus\" or \"zero\"");
      cfg.settle_time = get_or<double>(run, "settle_time", 0.0);
      if (cfg.settle_time < 0)
        throw ConfigError("$.run.settle_time must be non-negative");
      cfg.threads = get_or<int>(run, "threads", 0);
      if (run.contains("filter")) {
        const json& f = run.at("filter");
        reject_unknown_keys(f, "$.run.filter",
                            {"enabled", "threshold", "hold", "stride"});
        cfg.filter.enabled = get_or<bool>(f, "enabled", true);
        cfg.filter.threshold = get_or<double>(f, "threshold", 0.8);
        if (cfg.filter.threshold <= 0 || cfg.filter.threshold >= 1)
          throw ConfigError("$.run.filter.threshold must be in (0, 1)");
        cfg.filter.hold = get_or<double>(f, "hold", 5.0);
        cfg.filter.stride = get_or<int>(f, "stride", 5);
        if (cfg.filter.stride < 1)
          throw ConfigError("$.run.filter.stride must be at least 1");
      }
      if (run.contains("inject")) {
        const json& inj = run.at("inject");
        reject_unknown_keys(inj, "$.run.inject", {"error", "time"});
        InjectedError injected;
        injected.error = Pauli::from_string(inj.at("error").get<std::string>());
        injected.time = inj.at("time").get<double>();
        cfg.inject = injected;
      }
    }

    if (j.contains("output")) {
      const json& out = j.at("output");
      reject_unknown_keys(out, "$.output", {"dir", "bins", "events", "traces"});
      cfg.out_dir = get_or<std::string>(out, "dir", "out");
      cfg.bins = get_or<int>(out, "bins", 200);
      if (cfg.bins < 0) throw ConfigError("$.output.bins must be non-negative");
      cfg.events = get_or<bool>(out, "events", false);
      cfg.traces = get_or<bool>(out, "traces", false);
    }

    if (j.contains("experiment"))
      cfg.experiment = parse_experiment(j.at("experiment"), "$.experiment");
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }

  try {
    cfg.gate_spec().validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("inconsistent gate block: ") + e.what());
  }
  return cfg;
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

GateSpec RunConfig::gate_spec() const {
  GateSpec spec;
  spec.code = code;
  spec.H = h;
  spec.X = x;
  spec.theta = theta;
  spec.omega = omega;
  spec.kappa = kappa;
  return spec;
}

Vec RunConfig::initial_state_vector() const {
  return initial_state == "zero" ? Vec(code_frame(code).col(0))
                                 : logical_plus(code);
}

SimOptions RunConfig::sim_options() const {
  SimOptions opts;
  opts.dt = dt;
  opts.density_mode = density_mode;
  opts.settle_time = settle_time;
  opts.fidelity_bins = bins;
  opts.inject = inject;
  opts.initial_state = initial_state_vector();
  return opts;
}

std::string RunConfig::echo_json() const {
  json j;
  j["code"] = json::parse(code.to_json());
  j["gate"] = {{"h", h.to_string()},
               {"x", x.to_string()},
               {"theta", theta},
               {"omega", omega},
               {"kappa", kappa}};
  switch (noise.kind) {
    case NoiseModel::Kind::None:
      j["noise"] = {{"type", "none"}};
      break;
    case NoiseModel::Kind::Static:
      j["noise"] = {{"type", "static"}, {"epsilon", noise.epsilon}};
      break;
    case NoiseModel::Kind::OneOverF:
      j["noise"] = {{"type", "one_over_f"},
                    {"epsilon", noise.epsilon},
                    {"pulse_rate", noise.pulse_rate},
                    {"pulse_lifetime", noise.pulse_lifetime}};
      break;
    case NoiseModel::Kind::White:
      j["noise"] = {{"type", "white"}, {"gamma", noise.gamma}};
      break;
    case NoiseModel::Kind::BitFlipJumps:
      j["noise"] = {{"type", "bitflip_jumps"}, {"gamma", noise.gamma}};
      break;
  }
  j["run"] = {{"dt", dt},
              {"trajectories", trajectories},
              {"seed", seed},
              {"steering", steering},
              {"mode", density_mode ? "density" : "pure"},
              {"initial_state", initial_state},
              {"settle_time", settle_time},
              {"threads", threads},
              {"filter",
               {{"enabled", filter.enabled},
                {"threshold", filter.threshold},
                {"hold", filter.hold},
                {"stride", filter.stride}}}};
  if (inject)
    j["run"]["inject"] = {{"error", inject->error.to_string()},
                          {"time", inject->time}};
  j["output"] = {{"dir", out_dir},
                 {"bins", bins},
                 {"events", events},
                 {"traces", traces}};
  return j.dump(2);
}

}  // namespace zenogate
