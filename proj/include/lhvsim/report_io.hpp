#pragma once

// JSON documents for configs and reports, CSV for angle scans.
//
// Config keys: model, model_params{}, state ("singlet" | "product_up" |
// "custom"), amplitudes[8], a[3], b[3], n_times, horizon, m_lambda, seed,
// variant ("standard" | "general"), evolution{omega1, axis1[3], omega2,
// axis2[3]}. Missing keys keep their defaults; unknown keys are rejected.
//
// Reports hold {"config": <config>, "results": {...}, "postulates": {...},
// "wall_time_seconds": x}. Doubles are written with round-trip precision.

#include <iosfwd>
#include <string>
#include <vector>

#include "lhvsim/experiment.hpp"

namespace lhvsim {

std::string config_to_json(const ExperimentConfig& config);
/// Throws ConfigError on malformed documents.
ExperimentConfig config_from_json(const std::string& text);

std::string report_to_json(const RunReport& report);
RunReport report_from_json(const std::string& text);

inline constexpr const char* kScanHeader = "theta,e_qm,e_model,stderr,gap";
void write_scan_csv(std::ostream& out, const std::vector<ScanRow>& rows);

std::string state_name(StateKind kind);
std::string variant_name(Variant variant);

}  // namespace lhvsim
