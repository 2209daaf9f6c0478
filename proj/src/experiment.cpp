#include "lhvsim/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

#include "lhvsim/errors.hpp"

namespace lhvsim {

namespace {

Direction to_direction(const std::array<double, 3>& v, const char* field) {
  try {
    return {v[0], v[1], v[2]};
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string(field) + ": " + e.what());
  }
}

void require_count(std::size_t n, const char* field) {
  if (n < 2) throw ConfigError(std::string(field) + " must be >= 2");
}

void require_finite(double v, const char* field) {
  if (!std::isfinite(v)) throw ConfigError(std::string(field) + " must be finite");
}

std::string fixed(double v, int precision = 4) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(precision);
  os << v;
  return os.str();
}

}  // namespace

void validate(ExperimentConfig& config, std::vector<std::string>* warnings) {
  require_count(config.n_times, "n_times");
  require_count(config.m_lambda, "m_lambda");
  if (!(config.horizon > 0.0) || !std::isfinite(config.horizon)) {
    throw ConfigError("horizon must be > 0");
  }
  to_direction(config.a, "a");
  to_direction(config.b, "b");
  require_finite(config.omega1, "omega1");
  require_finite(config.omega2, "omega2");
  to_direction(config.axis1, "axis1");
  to_direction(config.axis2, "axis2");

  if (config.state == StateKind::custom) {
    double n2 = 0.0;
    for (double v : config.custom_amplitudes) {
      require_finite(v, "amplitudes");
      n2 += v * v;
    }
    if (n2 == 0.0) throw ConfigError("amplitudes must not all be zero");
    if (std::abs(std::sqrt(n2) - 1.0) > 1e-9) {
      const double inv = 1.0 / std::sqrt(n2);
      for (double& v : config.custom_amplitudes) v *= inv;
      if (warnings) warnings->push_back("custom amplitudes were not normalized; renormalized");
    }
  }
  make_model(config.model_name, config.model_params, build_state(config), config.horizon);
}

PureState build_state(const ExperimentConfig& config) {
  switch (config.state) {
    case StateKind::singlet:
      return make_singlet();
    case StateKind::product_up:
      return make_product_up();
    case StateKind::custom: {
      PureState::Amplitudes amp;
      for (std::size_t k = 0; k < 4; ++k) {
        amp[k] = {config.custom_amplitudes[2 * k], config.custom_amplitudes[2 * k + 1]};
      }
      try {
        return PureState::from_amplitudes(amp);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("amplitudes: ") + e.what());
      }
    }
  }
  throw ConfigError("unknown state kind");
}

LocalEvolution build_evolution(const ExperimentConfig& config) {
  return {config.omega1, to_direction(config.axis1, "axis1"), config.omega2,
          to_direction(config.axis2, "axis2")};
}

RunReport run_experiment(ExperimentConfig config) {
  const auto start = std::chrono::steady_clock::now();
  validate(config);

  const PureState psi = build_state(config);
  const ModelPtr model = make_model(config.model_name, config.model_params, psi, config.horizon);
  const Direction a = to_direction(config.a, "a");
  const Direction b = to_direction(config.b, "b");

  Rng grid_rng(config.seed, streams::kGridA);
  auto grids = [&]() -> std::pair<TimeGrid, TimeGrid> {
    if (config.variant == Variant::general) {
      return make_ordered_grids(config.n_times, config.horizon, grid_rng);
    }
    Rng grid_rng_b(config.seed, streams::kGridB);
    TimeGrid grid_a = make_time_grid(config.n_times, config.horizon, grid_rng);
    return {std::move(grid_a), make_time_grid(config.n_times, config.horizon, grid_rng_b)};
  }();

  const GapReport g = gap_report(psi, *model, a, b, grids.first, grids.second, config.m_lambda,
                                 config.seed, config.variant);

  RunReport r;
  r.config = config;
  r.e_qm = g.e_qm;
  r.e_model_mean = g.e_model.mean;
  r.e_model_stderr = g.e_model.std_error;
  r.avg_a_mean = g.avg_a_model.mean;
  r.avg_a_stderr = g.avg_a_model.std_error;
  r.avg_b_mean = g.avg_b_model.mean;
  r.avg_b_stderr = g.avg_b_model.std_error;
  r.gap = g.gap;
  r.lambda_dependence_score = g.lambda_dependence_score;
  r.postulates = model->postulates();
  r.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<ScanRow> scan_angles(ExperimentConfig config, std::size_t steps) {
  if (steps < 2) throw ConfigError("steps must be >= 2");
  config.a = {0.0, 0.0, 1.0};
  std::vector<ScanRow> rows;
  rows.reserve(steps);
  for (std::size_t k = 0; k < steps; ++k) {
    const double theta = std::numbers::pi * static_cast<double>(k) / static_cast<double>(steps - 1);
    const Direction b = Direction::in_xz_plane(theta);
    config.b = {b.x(), b.y(), b.z()};
    const RunReport r = run_experiment(config);
    rows.push_back({theta, r.e_qm, r.e_model_mean, r.e_model_stderr, r.gap});
  }
  return rows;
}

ExperimentConfig demo_config(std::uint64_t seed) {
  ExperimentConfig c;
  c.model_name = "paper_constrained";
  c.model_params = {{"p_plus_a", 0.5}, {"p_plus_b", 0.5}};
  c.state = StateKind::singlet;
  c.a = {0.0, 0.0, 1.0};
  c.b = {0.0, 0.0, 1.0};
  c.n_times = 10000;
  c.m_lambda = 100000;
  c.seed = seed;
  return c;
}

DemoResult demo_contradiction(const ExperimentConfig& config) {
  DemoResult out{run_experiment(config), {}};
  const RunReport& r = out.report;
  const Postulates& p = r.postulates;

  const double tol = std::max(4.0 * r.e_model_stderr, kExactTol);
  const bool matches_qm = std::abs(r.e_model_mean - r.e_qm) <= tol;
  const bool lambda_independent = r.lambda_dependence_score <= kLambdaIndependenceEps;

  std::ostringstream v;
  v << "model " << r.config.model_name << ": e_qm=" << fixed(r.e_qm)
    << " e_model=" << fixed(r.e_model_mean) << " +- " << fixed(r.e_model_stderr)
    << " <a><b>=" << fixed(r.avg_a_mean * r.avg_b_mean) << " gap=" << fixed(r.gap)
    << " lambda_dependence=" << fixed(r.lambda_dependence_score) << "\n";
  v << "postulates: time_local_A=" << p.time_local_a << " time_local_B=" << p.time_local_b
    << " lambda_independent_time_averages=" << p.lambda_independent_time_averages
    << " superdeterministic_directions=" << p.superdeterministic_directions << "\n";
  v << "verdict: ";
  if (lambda_independent && r.gap >= kContradictionGap) {
    v << "CONTRADICTION - time averages are lambda-independent, so the model correlation is "
         "pinned to <a><b>, which misses the quantum correlation by "
      << fixed(r.gap);
  } else if (lambda_independent) {
    v << "CONSISTENT - time averages are lambda-independent and <a><b> agrees with the "
         "quantum correlation at these directions";
  } else {
    v << "ESCAPES - per-lambda time averages depend on lambda (score "
      << fixed(r.lambda_dependence_score) << " > " << kLambdaIndependenceEps
      << "), violating the lambda-independent identification";
  }
  if (matches_qm) v << "; model correlation matches quantum mechanics";
  if (!p.time_local_a || !p.time_local_b) {
    v << "; model is not time-local (time_local_A=" << p.time_local_a
      << ", time_local_B=" << p.time_local_b << ")";
  }
  out.verdict = v.str();
  return out;
}

}  // namespace lhvsim
