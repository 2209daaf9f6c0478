#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lhvsim/estimator.hpp"
#include "lhvsim/models.hpp"
#include "lhvsim/quantum.hpp"

namespace lhvsim {

enum class StateKind { singlet, product_up, custom };

/// Everything needed to reproduce one run.
struct ExperimentConfig {
  std::string model_name = "paper_constrained";
  std::map<std::string, double> model_params;
  StateKind state = StateKind::singlet;
  /// Interleaved real/imaginary parts of the four amplitudes; used when
  /// state == custom.
  std::array<double, 8> custom_amplitudes{};
  std::array<double, 3> a{0.0, 0.0, 1.0};
  std::array<double, 3> b{0.0, 0.0, 1.0};
  std::size_t n_times = 10000;
  double horizon = 1.0;
  std::size_t m_lambda = 100000;
  std::uint64_t seed = 20140601;
  Variant variant = Variant::standard;
  double omega1 = 0.0;
  std::array<double, 3> axis1{0.0, 0.0, 1.0};
  double omega2 = 0.0;
  std::array<double, 3> axis2{0.0, 0.0, 1.0};
};

/// Checks every field and throws ConfigError naming the first bad one.
/// Custom amplitudes off unit norm by more than 1e-9 are renormalized in
/// place and a warning is appended to `warnings`.
void validate(ExperimentConfig& config, std::vector<std::string>* warnings = nullptr);

PureState build_state(const ExperimentConfig& config);
LocalEvolution build_evolution(const ExperimentConfig& config);

struct RunReport {
  ExperimentConfig config;
  double e_qm = 0.0;
  double e_model_mean = 0.0;
  double e_model_stderr = 0.0;
  double avg_a_mean = 0.0;
  double avg_a_stderr = 0.0;
  double avg_b_mean = 0.0;
  double avg_b_stderr = 0.0;
  double gap = 0.0;
  double lambda_dependence_score = 0.0;
  Postulates postulates;
  double wall_time_seconds = 0.0;
};

/// Builds model, state and grids from the config and evaluates the gap.
/// Throws ConfigError for invalid configs and NumericError for non-finite
/// results.
RunReport run_experiment(ExperimentConfig config);

struct ScanRow {
  double theta = 0.0;
  double e_qm = 0.0;
  double e_model = 0.0;
  double std_error = 0.0;
  double gap = 0.0;
};

/// Fixes a = z and sweeps b = (sin theta, 0, cos theta) over `steps`
/// equally spaced theta in [0, pi]. Every row reuses the config's seed.
std::vector<ScanRow> scan_angles(ExperimentConfig config, std::size_t steps);

/// Canonical configuration: singlet, paper-constrained model with
/// p = 1/2, a = b = z, N = 10^4, m_lambda = 10^5.
ExperimentConfig demo_config(std::uint64_t seed);

struct DemoResult {
  RunReport report;
  std::string verdict;
};

/// Runs `config` and classifies the model against the quantum prediction.
DemoResult demo_contradiction(const ExperimentConfig& config);

/// Thresholds used by the verdict.
inline constexpr double kLambdaIndependenceEps = 0.05;
inline constexpr double kContradictionGap = 0.9;

}  // namespace lhvsim
