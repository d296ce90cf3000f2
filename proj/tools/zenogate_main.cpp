// Command-line front end: deterministic ensemble runs, experiment presets,
// code checking, decode-table inspection and the confinement-probability
// sweep. Exit codes: 0 success, 2 configuration error, 3 numerical-health
// failure.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "zenogate/config.hpp"
#include "zenogate/ensemble.hpp"
#include "zenogate/filter.hpp"
#include "zenogate/report.hpp"

namespace {

using namespace zenogate;

struct Overrides {
  std::optional<uint64_t> seed;
  std::optional<long> trajectories;
  std::optional<std::string> out_dir;
  std::optional<int> threads;

  void apply(RunConfig& cfg) const {
    if (seed) cfg.seed = *seed;
    if (trajectories) cfg.trajectories = *trajectories;
    if (out_dir) cfg.out_dir = *out_dir;
    if (threads) cfg.threads = *threads;
  }
};

std::string find_preset(const std::string& name) {
  std::vector<std::string> candidates;
  if (const char* env = std::getenv("ZENOGATE_PRESET_DIR"))
    candidates.push_back(std::string(env) + "/" + name + ".json");
#ifdef ZENOGATE_PRESET_DIR
  candidates.push_back(std::string(ZENOGATE_PRESET_DIR) + "/" + name + ".json");
#endif
  candidates.push_back("presets/" + name + ".json");
  for (const auto& path : candidates)
    if (std::filesystem::exists(path)) return path;
  throw ConfigError("preset \"" + name + "\" not found");
}

void write_single_trajectory_traces(const RunConfig& cfg) {
  // One fully-instrumented trajectory: measurement currents, estimator
  // expectations and the event log.
  GateSpec spec = cfg.gate_spec();
  SimOptions options = cfg.sim_options();
  options.record_currents = true;
  DecodeTable table = build_decode_table(cfg.code, cfg.h, cfg.x);
  SteeringController controller(spec, cfg.noise, &table, cfg.filter,
                                cfg.steering);
  controller.enable_trace();
  TrajectoryResult result =
      run_trajectory(spec, cfg.noise, options, &controller,
                     Rng::for_trajectory(cfg.seed, 0));
  write_record_csv(cfg.out_dir + "/currents.csv", result.record);
  write_estimator_trace_csv(cfg.out_dir + "/estimator.csv",
                            controller.trace_times(),
                            controller.trace_expectations());
  std::vector<TrajectoryOutcome> one(1);
  one[0].events = result.events;
  write_events_jsonl(cfg.out_dir + "/events.jsonl", one);
}

int run_config(RunConfig cfg) {
  ensure_directory(cfg.out_dir);
  switch (cfg.experiment.kind) {
    case ExperimentSpec::Kind::Curve: {
      const EnsembleReport report = run_ensemble(cfg);
      write_curve_csv(cfg.out_dir + "/fidelity.csv", report.fidelity_curve);
      write_summary_json(cfg.out_dir + "/summary.json", report);
      if (cfg.events)
        write_events_jsonl(cfg.out_dir + "/events.jsonl", report.outcomes);
      if (cfg.traces) write_single_trajectory_traces(cfg);
      std::cout << "final gate fidelity  " << report.final_gate_fidelity_mean
                << " +/- " << report.final_gate_fidelity_se << "\n"
                << "final target fidelity " << report.final_target_fidelity_mean
                << " +/- " << report.final_target_fidelity_se << "\n"
                << "jumped " << report.jumped << "/" << report.trajectories
                << ", steered " << report.steered << "\n";
      break;
    }
    case ExperimentSpec::Kind::Prop1: {
      const auto points = prop1_sweep(cfg);
      write_prop1_csv(cfg.out_dir + "/prop1.csv", points);
      std::cout << "omega/kappa  MC_jump  analytic  3*binom_se\n";
      for (const auto& p : points)
        std::cout << p.omega_over_kappa << "  " << p.mc_jump_fraction << "  "
                  << p.analytic_jump_probability << "  " << 3 * p.binomial_se
                  << "\n";
      break;
    }
    case ExperimentSpec::Kind::GammaSweep:
    case ExperimentSpec::Kind::OmegaSweep: {
      const auto points = fidelity_sweep(cfg);
      write_sweep_csv(cfg.out_dir + "/sweep.csv", points);
      std::cout << "value  F_steer  F_nosteer\n";
      for (const auto& p : points)
        std::cout << p.value << "  " << p.steer_mean << " +/- " << p.steer_se
                  << "  " << p.nosteer_mean << " +/- " << p.nosteer_se << "\n";
      if (cfg.experiment.kind == ExperimentSpec::Kind::OmegaSweep) {
        double best_steer = 0.0, best_nosteer = 0.0;
        for (const auto& p : points) {
          if (p.steer_mean >= cfg.experiment.fidelity_floor)
            best_steer = std::max(best_steer, p.value);
          if (p.nosteer_mean >= cfg.experiment.fidelity_floor)
            best_nosteer = std::max(best_nosteer, p.value);
        }
        std::cout << "max omega/kappa at floor " << cfg.experiment.fidelity_floor
                  << ": steered " << best_steer << ", unsteered "
                  << best_nosteer << "\n";
      }
      break;
    }
    case ExperimentSpec::Kind::NoiseCompare: {
      const auto curves = noise_compare(cfg);
      write_noise_compare_csv(cfg.out_dir, curves);
      std::cout << "model  final_fidelity\n";
      for (const auto& c : curves)
        std::cout << c.label << "  " << c.final_mean << " +/- " << c.final_se
                  << "\n";
      break;
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trajectory simulator for measurement-driven holonomic gates "
               "on stabilizer codes"};
  app.require_subcommand(1);

  Overrides overrides;
  std::string config_path, preset_name, code_path;

  auto add_overrides = [&](CLI::App* cmd) {
    cmd->add_option("--seed", overrides.seed, "Master RNG seed override");
    cmd->add_option("--trajectories", overrides.trajectories,
                    "Trajectory count override");
    cmd->add_option("--out-dir", overrides.out_dir, "Output directory override");
    cmd->add_option("--threads", overrides.threads,
                    "Worker threads (0 = hardware)");
  };

  CLI::App* run = app.add_subcommand("run", "Run a config file");
  run->add_option("config", config_path, "JSON run configuration")->required();
  add_overrides(run);

  CLI::App* preset = app.add_subcommand("preset", "Run a bundled preset");
  preset->add_option("name", preset_name, "Preset name (e.g. fig2, fig4a)")
      ->required();
  add_overrides(preset);

  CLI::App* check = app.add_subcommand("check-code", "Validate a code file");
  check->add_option("code", code_path, "JSON code definition")->required();

  CLI::App* decode = app.add_subcommand(
      "decode-table", "Print the decode table of a config as JSON");
  decode->add_option("config", config_path, "JSON run configuration")
      ->required();

  CLI::App* prop1 = app.add_subcommand(
      "prop1", "Confinement-probability sweep from a config");
  prop1->add_option("config", config_path, "JSON run configuration")->required();
  add_overrides(prop1);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      RunConfig cfg = RunConfig::from_file(config_path);
      overrides.apply(cfg);
      return run_config(std::move(cfg));
    }
    if (preset->parsed()) {
      RunConfig cfg = RunConfig::from_file(find_preset(preset_name));
      overrides.apply(cfg);
      return run_config(std::move(cfg));
    }
    if (check->parsed()) {
      std::ifstream in(code_path);
      if (!in) throw ConfigError("cannot open " + code_path);
      std::stringstream ss;
      ss << in.rdbuf();
      const StabilizerCode code = StabilizerCode::from_json(ss.str());
      std::cout << "code [[" << code.n << "," << code.k << "," << code.d
                << "]] valid: generators commute, logicals commute with the "
                   "stabilizer, correctable errors distinguishable\n";
      if (code.logicals.size() >= 2) {
        const auto x = search_rotation_operator(code, code.logicals[code.k]);
        if (x)
          std::cout << "rotation operator found: " << x->to_string() << "\n";
        else
          std::cout << "no rotation operator satisfies the conditions\n";
      }
      return 0;
    }
    if (decode->parsed()) {
      const RunConfig cfg = RunConfig::from_file(config_path);
      const DecodeTable table = build_decode_table(cfg.code, cfg.h, cfg.x);
      std::cout << table.to_json() << "\n";
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }

  try {
    RunConfig cfg = RunConfig::from_file(config_path);
    overrides.apply(cfg);
    if (cfg.experiment.kind != ExperimentSpec::Kind::Prop1)
      cfg.experiment.kind = ExperimentSpec::Kind::Prop1;
    return run_config(std::move(cfg));
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
}
