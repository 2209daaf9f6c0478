#include "lhvsim/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>

#include <omp.h>

namespace lhvsim {

namespace {

// Lambdas per reduction block. Fixed so the merge tree does not depend on the
// thread count.
constexpr std::size_t kBlock = 1024;

void check_lambda_count(std::size_t m_lambda) {
  if (m_lambda < 2) throw std::invalid_argument("m_lambda must be >= 2");
}

CorrelationEstimate to_estimate(const Moments& m, std::size_t n_times, std::uint64_t seed) {
  return {m.mean, m.standard_error(), m.count, n_times, seed};
}

}  // namespace

TimeGrid::TimeGrid(std::vector<double> times, double horizon)
    : times_(std::move(times)), horizon_(horizon) {
  if (!(horizon_ > 0.0) || !std::isfinite(horizon_)) {
    throw std::invalid_argument("time grid horizon must be > 0");
  }
  if (times_.size() < 2) throw std::invalid_argument("time grid needs at least 2 times");
  for (double t : times_) {
    if (!(t >= 0.0 && t <= horizon_)) {
      throw std::invalid_argument("time grid entries must lie in [0, horizon]");
    }
  }
}

double TimeGrid::min_time() const { return *std::min_element(times_.begin(), times_.end()); }
double TimeGrid::max_time() const { return *std::max_element(times_.begin(), times_.end()); }

TimeGrid make_time_grid(std::size_t n, double horizon, Rng& rng) {
  if (n < 2) throw std::invalid_argument("time grid needs n >= 2");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw std::invalid_argument("time grid horizon must be > 0");
  }
  std::vector<double> times(n);
  for (auto& t : times) t = rng.uniform(0.0, horizon);
  return TimeGrid(std::move(times), horizon);
}

std::pair<TimeGrid, TimeGrid> make_ordered_grids(std::size_t n, double horizon, Rng& rng) {
  if (n < 2) throw std::invalid_argument("time grid needs n >= 2");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw std::invalid_argument("time grid horizon must be > 0");
  }
  const double half = 0.5 * horizon;
  std::vector<double> early(n);
  std::vector<double> late(n);
  for (auto& t : early) t = rng.uniform(0.0, half);
  // uniform() < 1, so horizon - half * u lies in (half, horizon].
  for (auto& t : late) t = horizon - half * rng.uniform();
  return {TimeGrid(std::move(early), horizon), TimeGrid(std::move(late), horizon)};
}

void Moments::add(double x) {
  ++count;
  const double delta = x - mean;
  mean += delta / static_cast<double>(count);
  m2 += delta * (x - mean);
}

void Moments::merge(const Moments& other) {
  if (other.count == 0) return;
  if (count == 0) {
    *this = other;
    return;
  }
  const double n1 = static_cast<double>(count);
  const double n2 = static_cast<double>(other.count);
  const double n = n1 + n2;
  const double delta = other.mean - mean;
  mean += delta * n2 / n;
  m2 += other.m2 + delta * delta * n1 * n2 / n;
  count += other.count;
}

double Moments::sample_stddev() const {
  if (count < 2) return 0.0;
  return std::sqrt(std::max(0.0, m2) / static_cast<double>(count - 1));
}

double Moments::standard_error() const {
  if (count < 2) return 0.0;
  return sample_stddev() / std::sqrt(static_cast<double>(count));
}

PerLambdaStats per_lambda_stats(const LhvModel& model, const Lambda& lambda, const Direction& a,
                                const Direction& b, const TimeGrid& grid_a,
                                const TimeGrid& grid_b) {
  const double n_a = static_cast<double>(grid_a.size());
  const double n_b = static_cast<double>(grid_b.size());
  const std::size_t up_a = model.count_up_a(lambda, a, b, grid_a.times());
  const std::size_t up_b = model.count_up_b(lambda, b, a, grid_b.times());
  const std::size_t down_a = grid_a.size() - up_a;
  PerLambdaStats s;
  s.lambda = lambda;
  s.avg_a = (static_cast<double>(up_a) - static_cast<double>(down_a)) / n_a;
  s.avg_b = (2.0 * static_cast<double>(up_b) - n_b) / n_b;
  s.pi_a_plus = static_cast<double>(up_a) / n_a;
  s.pi_a_minus = static_cast<double>(down_a) / n_a;
  return s;
}

LambdaSample evaluate_lambda(const LhvModel& model, const Lambda& lambda, const Direction& a,
                             const Direction& b, const TimeGrid& grid_a, const TimeGrid& grid_b,
                             Variant variant) {
  if (variant == Variant::general && model.has_general_b()) {
    const auto times_a = grid_a.times();
    const auto times_b = grid_b.times();
    long long weighted = 0;
    long long total_b = 0;
    for (double ta : times_a) {
      long long row = 0;
      for (double tb : times_b) row += value(model.outcome_b_general(lambda, b, a, tb, ta));
      weighted += value(model.outcome_a(lambda, a, b, ta)) * row;
      total_b += row;
    }
    const double pairs = static_cast<double>(times_a.size()) * static_cast<double>(times_b.size());
    const auto up_a = model.count_up_a(lambda, a, b, times_a);
    const double n_a = static_cast<double>(times_a.size());
    return {static_cast<double>(weighted) / pairs, (2.0 * static_cast<double>(up_a) - n_a) / n_a,
            static_cast<double>(total_b) / pairs};
  }
  const PerLambdaStats s = per_lambda_stats(model, lambda, a, b, grid_a, grid_b);
  return {s.avg_a * s.avg_b, s.avg_a, s.avg_b};
}

LambdaLoopResult run_lambda_loop(const LhvModel& model, const Direction& a, const Direction& b,
                                 const TimeGrid& grid_a, const TimeGrid& grid_b,
                                 std::size_t m_lambda, std::uint64_t seed, Variant variant) {
  check_lambda_count(m_lambda);
  const std::size_t n_blocks = (m_lambda + kBlock - 1) / kBlock;
  std::vector<LambdaLoopResult> blocks(n_blocks);
  std::exception_ptr failure;

#pragma omp parallel for schedule(dynamic)
  for (std::size_t blk = 0; blk < n_blocks; ++blk) {
    try {
      LambdaLoopResult local;
      const std::size_t end = std::min(m_lambda, (blk + 1) * kBlock);
      for (std::size_t k = blk * kBlock; k < end; ++k) {
        Rng rng(seed, streams::kLambdaBase + k);
        const Lambda lambda = model.sample_lambda(rng);
        const LambdaSample s = evaluate_lambda(model, lambda, a, b, grid_a, grid_b, variant);
        local.product.add(s.product);
        local.avg_a.add(s.avg_a);
        local.avg_b.add(s.avg_b);
      }
      blocks[blk] = local;
    } catch (...) {
#pragma omp critical(lhvsim_loop_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  LambdaLoopResult total;
  for (const auto& blk : blocks) {
    total.product.merge(blk.product);
    total.avg_a.merge(blk.avg_a);
    total.avg_b.merge(blk.avg_b);
  }
  return total;
}

CorrelationEstimate estimate_correlation(const LhvModel& model, const Direction& a,
                                         const Direction& b, const TimeGrid& grid_a,
                                         const TimeGrid& grid_b, std::size_t m_lambda,
                                         std::uint64_t seed) {
  const auto r = run_lambda_loop(model, a, b, grid_a, grid_b, m_lambda, seed, Variant::standard);
  return to_estimate(r.product, grid_a.size(), seed);
}

namespace {

void check_ordered(const TimeGrid& grid_a, const TimeGrid& grid_b) {
  if (!(grid_a.max_time() < grid_b.min_time())) {
    throw std::invalid_argument(
        "ordered-time variant needs every B time strictly later than every A time");
  }
}

}  // namespace

CorrelationEstimate estimate_correlation_general(const LhvModel& model, const Direction& a,
                                                 const Direction& b, const TimeGrid& grid_a,
                                                 const TimeGrid& grid_b, std::size_t m_lambda,
                                                 std::uint64_t seed) {
  check_ordered(grid_a, grid_b);
  const auto r = run_lambda_loop(model, a, b, grid_a, grid_b, m_lambda, seed, Variant::general);
  return to_estimate(r.product, grid_a.size(), seed);
}

FactorizationCheck factorization_check(const LhvModel& model, const Lambda& lambda,
                                       const Direction& a, const Direction& b,
                                       const TimeGrid& grid_a, const TimeGrid& grid_b) {
  std::vector<int> out_b;
  out_b.reserve(grid_b.size());
  for (double tb : grid_b.times()) out_b.push_back(value(model.outcome_b(lambda, b, a, tb)));

  double sum = 0.0;
  for (double ta : grid_a.times()) {
    const int out_a = value(model.outcome_a(lambda, a, b, ta));
    for (int ob : out_b) sum += out_a * ob;
  }
  const double pairs = static_cast<double>(grid_a.size()) * static_cast<double>(grid_b.size());
  const PerLambdaStats s = per_lambda_stats(model, lambda, a, b, grid_a, grid_b);
  return {sum / pairs, s.avg_a * s.avg_b};
}

double exact_correlation(const LhvModel& model, const Direction& a, const Direction& b,
                         const TimeGrid& grid_a, const TimeGrid& grid_b, Variant variant) {
  const auto support = model.discrete_support();
  if (!support) {
    throw std::invalid_argument("exact_correlation needs a model with discrete support");
  }
  const double pairs = static_cast<double>(grid_a.size()) * static_cast<double>(grid_b.size());
  double total = 0.0;
  for (const auto& [lambda, weight] : *support) {
    double sum = 0.0;
    for (double ta : grid_a.times()) {
      const int out_a = value(model.outcome_a(lambda, a, b, ta));
      for (double tb : grid_b.times()) {
        const Outcome out_b = variant == Variant::general
                                  ? model.outcome_b_general(lambda, b, a, tb, ta)
                                  : model.outcome_b(lambda, b, a, tb);
        sum += out_a * value(out_b);
      }
    }
    total += weight * (sum / pairs);
  }
  return total;
}

GapReport gap_report(const PureState& psi, const LhvModel& model, const Direction& a,
                     const Direction& b, const TimeGrid& grid_a, const TimeGrid& grid_b,
                     std::size_t m_lambda, std::uint64_t seed, Variant variant) {
  if (variant == Variant::general) check_ordered(grid_a, grid_b);
  const auto r = run_lambda_loop(model, a, b, grid_a, grid_b, m_lambda, seed, variant);
  GapReport g;
  g.e_qm = qm_correlation(psi, a, b);
  g.e_model = to_estimate(r.product, grid_a.size(), seed);
  g.avg_a_model = to_estimate(r.avg_a, grid_a.size(), seed);
  g.avg_b_model = to_estimate(r.avg_b, grid_b.size(), seed);
  g.gap = std::abs(g.e_qm - g.avg_a_model.mean * g.avg_b_model.mean);
  g.lambda_dependence_score = r.avg_a.sample_stddev();
  for (double v : {g.e_qm, g.e_model.mean, g.e_model.std_error, g.gap, g.lambda_dependence_score}) {
    if (!std::isfinite(v)) throw NumericError("non-finite value in gap report");
  }
  return g;
}

}  // namespace lhvsim
