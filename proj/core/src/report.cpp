#include "zenogate/report.hpp"

#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace zenogate {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.precision(17);
  return out;
}

}  // namespace

void ensure_directory(const std::string& path) {
  std::filesystem::create_directories(path);
}

void write_text_file(const std::string& path, const std::string& content) {
  auto out = open_out(path);
  out << content;
}

void write_curve_csv(const std::string& path, const std::vector<BinStat>& curve) {
  auto out = open_out(path);
  out << "t,mean,stderr,n\n";
  for (const auto& b : curve)
    out << b.t << ',' << b.mean << ',' << b.stderr_of_mean << ',' << b.n << '\n';
}

void write_summary_json(const std::string& path, const EnsembleReport& report) {
  nlohmann::json j;
  j["version"] = kVersion;
  j["trajectories"] = report.trajectories;
  j["final_gate_fidelity"] = {{"mean", report.final_gate_fidelity_mean},
                              {"stderr", report.final_gate_fidelity_se}};
  j["final_target_fidelity"] = {{"mean", report.final_target_fidelity_mean},
                                {"stderr", report.final_target_fidelity_se}};
  j["jumped"] = report.jumped;
  j["steered"] = report.steered;
  j["config"] = nlohmann::json::parse(report.config_echo);
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

void write_events_jsonl(const std::string& path,
                        const std::vector<TrajectoryOutcome>& outcomes) {
  auto out = open_out(path);
  for (size_t i = 0; i < outcomes.size(); ++i) {
    for (const Event& e : outcomes[i].events) {
      nlohmann::json j;
      j["trajectory"] = i;
      j["t"] = e.t;
      j["kind"] = event_kind_name(e.kind);
      if (!e.syndrome.empty()) j["syndrome"] = e.syndrome;
      if (!e.error.empty()) j["error"] = e.error;
      if (e.kind == Event::Kind::PathSwitch) j["theta_tilde"] = e.value;
      if (e.kind == Event::Kind::PositivityWarning) j["eigenvalue"] = e.value;
      out << j.dump() << '\n';
    }
  }
}

void write_record_csv(const std::string& path, const MeasurementRecord& record) {
  auto out = open_out(path);
  out << "t,generator_index,Q\n";
  const long steps = record.steps();
  for (long s = 0; s < steps; ++s)
    for (int g = 0; g < record.n_generators; ++g)
      out << (s + 1) * record.dt << ',' << g << ',' << record.q(s, g) << '\n';
}

void write_estimator_trace_csv(
    const std::string& path, const std::vector<double>& times,
    const std::vector<std::vector<double>>& expectations) {
  auto out = open_out(path);
  out << "t,generator_index,expectation\n";
  for (size_t s = 0; s < times.size(); ++s)
    for (size_t g = 0; g < expectations[s].size(); ++g)
      out << times[s] << ',' << g << ',' << expectations[s][g] << '\n';
}

void write_prop1_csv(const std::string& path,
                     const std::vector<Prop1Point>& points) {
  auto out = open_out(path);
  out << "omega_over_kappa,mc_jump_fraction,analytic_p_jump,binomial_se,n\n";
  for (const auto& p : points)
    out << p.omega_over_kappa << ',' << p.mc_jump_fraction << ','
        << p.analytic_jump_probability << ',' << p.binomial_se << ',' << p.n
        << '\n';
}

void write_sweep_csv(const std::string& path,
                     const std::vector<SweepPoint>& points) {
  auto out = open_out(path);
  out << "value,steer_mean,steer_se,nosteer_mean,nosteer_se,n\n";
  for (const auto& p : points)
    out << p.value << ',' << p.steer_mean << ',' << p.steer_se << ','
        << p.nosteer_mean << ',' << p.nosteer_se << ',' << p.n << '\n';
}

void write_noise_compare_csv(const std::string& dir,
                             const std::vector<NoiseCompareCurve>& curves) {
  for (const auto& c : curves)
    write_curve_csv(dir + "/fidelity_" + c.label + ".csv", c.curve);
}

}  // namespace zenogate
