#pragma once

#include <string>
#include <vector>

#include "zenogate/ensemble.hpp"

namespace zenogate {

inline constexpr const char* kVersion = "zenogate 0.1.0";

void ensure_directory(const std::string& path);

// Plot-ready CSV: t,mean,stderr,n
void write_curve_csv(const std::string& path, const std::vector<BinStat>& curve);

// Summary JSON with config echo, version, final metrics and jump statistics.
void write_summary_json(const std::string& path, const EnsembleReport& report);

// One JSON object per line: {"trajectory":i,"t":...,"kind":...,...}
void write_events_jsonl(const std::string& path,
                        const std::vector<TrajectoryOutcome>& outcomes);

// Measurement currents: t,generator_index,Q
void write_record_csv(const std::string& path, const MeasurementRecord& record);

// Estimator expectations: t,generator_index,expectation
void write_estimator_trace_csv(
    const std::string& path, const std::vector<double>& times,
    const std::vector<std::vector<double>>& expectations);

// omega_over_kappa,mc_jump_fraction,analytic_p_jump,binomial_se,n
void write_prop1_csv(const std::string& path,
                     const std::vector<Prop1Point>& points);

// value,steer_mean,steer_se,nosteer_mean,nosteer_se,n
void write_sweep_csv(const std::string& path,
                     const std::vector<SweepPoint>& points);

void write_noise_compare_csv(const std::string& dir,
                             const std::vector<NoiseCompareCurve>& curves);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace zenogate
