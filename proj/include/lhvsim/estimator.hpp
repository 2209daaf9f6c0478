#pragma once

// Monte Carlo and exact evaluation of the time-labelled correlation function.
//
// For each hidden-variable draw the estimator averages A over one grid of N
// times and B over a second grid of N times. Because A never sees the B time
// and vice versa, the average of A*B over all N^2 time pairs equals the
// product of the two single averages, so each lambda costs O(N).
//
// The lambda loop runs under OpenMP. Lambda k draws from its own substream
// Rng(seed, streams::kLambdaBase + k) and partial moments are merged in fixed
// block order, so results are bit-identical for every thread count.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "lhvsim/errors.hpp"
#include "lhvsim/models.hpp"
#include "lhvsim/quantum.hpp"
#include "lhvsim/rng.hpp"

namespace lhvsim {

/// Measurement times in [0, horizon], arbitrary order, duplicates allowed.
class TimeGrid {
 public:
  /// Throws std::invalid_argument unless horizon > 0, times.size() >= 2 and
  /// every time lies in [0, horizon].
  TimeGrid(std::vector<double> times, double horizon);

  std::span<const double> times() const { return times_; }
  std::size_t size() const { return times_.size(); }
  double horizon() const { return horizon_; }
  double min_time() const;
  double max_time() const;

 private:
  std::vector<double> times_;
  double horizon_;
};

/// n independent uniform draws on [0, horizon].
TimeGrid make_time_grid(std::size_t n, double horizon, Rng& rng);

/// Two grids for the ordered-time variant. A times are uniform on
/// [0, horizon/2), B times uniform on (horizon/2, horizon], so every B time
/// exceeds every A time.
std::pair<TimeGrid, TimeGrid> make_ordered_grids(std::size_t n, double horizon, Rng& rng);

struct PerLambdaStats {
  Lambda lambda;
  double avg_a = 0.0;
  double avg_b = 0.0;
  double pi_a_plus = 0.0;
  double pi_a_minus = 0.0;
};

struct CorrelationEstimate {
  double mean = 0.0;
  /// Sample standard deviation of per-lambda values over sqrt(n_lambda).
  double std_error = 0.0;
  std::size_t n_lambda = 0;
  std::size_t n_times = 0;
  std::uint64_t seed = 0;
};

/// Running mean and second central moment with an order-fixed merge.
struct Moments {
  std::size_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x);
  void merge(const Moments& other);
  double sample_stddev() const;
  double standard_error() const;
};

/// Per-lambda correlation contribution and single-station time averages.
struct LambdaSample {
  double product = 0.0;
  double avg_a = 0.0;
  double avg_b = 0.0;
};

/// Which correlation function the lambda loop evaluates.
enum class Variant {
  /// A(lambda, a; b, t_a) B(lambda, b; a, t_b)
  standard,
  /// A(lambda, a; b, t_a) B(lambda, b; a, t_b, t_a) with every t_b > t_a
  general,
};

/// Aggregated output of one lambda loop.
struct LambdaLoopResult {
  Moments product;
  Moments avg_a;
  Moments avg_b;
};

PerLambdaStats per_lambda_stats(const LhvModel& model, const Lambda& lambda, const Direction& a,
                                const Direction& b, const TimeGrid& grid_a,
                                const TimeGrid& grid_b);

/// Evaluates one lambda. Uses the O(N) factorized form unless the variant is
/// general and the model supplies a genuine general B, in which case the
/// O(N^2) double sum is taken.
LambdaSample evaluate_lambda(const LhvModel& model, const Lambda& lambda, const Direction& a,
                             const Direction& b, const TimeGrid& grid_a, const TimeGrid& grid_b,
                             Variant variant);

/// OpenMP lambda loop. Requires m_lambda >= 2.
LambdaLoopResult run_lambda_loop(const LhvModel& model, const Direction& a, const Direction& b,
                                 const TimeGrid& grid_a, const TimeGrid& grid_b,
                                 std::size_t m_lambda, std::uint64_t seed, Variant variant);

/// Serial reference for run_lambda_loop: same per-lambda streams, plain
/// in-order loop, two-pass moments. Agrees with the parallel kernel to
/// rounding.
LambdaLoopResult run_lambda_loop_serial(const LhvModel& model, const Direction& a,
                                        const Direction& b, const TimeGrid& grid_a,
                                        const TimeGrid& grid_b, std::size_t m_lambda,
                                        std::uint64_t seed, Variant variant);

/// Monte Carlo estimate of the N^2-time-pair correlation.
CorrelationEstimate estimate_correlation(const LhvModel& model, const Direction& a,
                                         const Direction& b, const TimeGrid& grid_a,
                                         const TimeGrid& grid_b, std::size_t m_lambda,
                                         std::uint64_t seed);

/// Ordered-time variant. B may depend on the earlier A time; A never sees
/// the later B time. Throws std::invalid_argument unless every B time is
/// strictly later than every A time.
CorrelationEstimate estimate_correlation_general(const LhvModel& model, const Direction& a,
                                                 const Direction& b, const TimeGrid& grid_a,
                                                 const TimeGrid& grid_b, std::size_t m_lambda,
                                                 std::uint64_t seed);

/// Explicit O(N^2) double sum and product of single sums for one lambda.
struct FactorizationCheck {
  double double_sum = 0.0;
  double product_of_sums = 0.0;
};

FactorizationCheck factorization_check(const LhvModel& model, const Lambda& lambda,
                                       const Direction& a, const Direction& b,
                                       const TimeGrid& grid_a, const TimeGrid& grid_b);

/// Exhaustive sum over the model's discrete support and all N^2 time pairs.
/// Throws std::invalid_argument for models without discrete support.
double exact_correlation(const LhvModel& model, const Direction& a, const Direction& b,
                         const TimeGrid& grid_a, const TimeGrid& grid_b,
                         Variant variant = Variant::standard);

struct GapReport {
  double e_qm = 0.0;
  CorrelationEstimate e_model;
  CorrelationEstimate avg_a_model;
  CorrelationEstimate avg_b_model;
  /// |e_qm - <a><b>|: distance between the quantum correlation and the
  /// factorized prediction of a model with lambda-independent time averages.
  double gap = 0.0;
  /// Sample standard deviation across lambda of the per-lambda A average.
  double lambda_dependence_score = 0.0;
};

GapReport gap_report(const PureState& psi, const LhvModel& model, const Direction& a,
                     const Direction& b, const TimeGrid& grid_a, const TimeGrid& grid_b,
                     std::size_t m_lambda, std::uint64_t seed,
                     Variant variant = Variant::standard);

}  // namespace lhvsim
