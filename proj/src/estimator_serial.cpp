#include <cmath>

#include "lhvsim/estimator.hpp"

namespace lhvsim {

namespace {

Moments two_pass(const std::vector<double>& xs) {
  Moments m;
  m.count = xs.size();
  if (xs.empty()) return m;
  double sum = 0.0;
  for (double x : xs) sum += x;
  m.mean = sum / static_cast<double>(xs.size());
  for (double x : xs) m.m2 += (x - m.mean) * (x - m.mean);
  return m;
}

}  // namespace

LambdaLoopResult run_lambda_loop_serial(const LhvModel& model, const Direction& a,
                                        const Direction& b, const TimeGrid& grid_a,
                                        const TimeGrid& grid_b, std::size_t m_lambda,
                                        std::uint64_t seed, Variant variant) {
  if (m_lambda < 2) throw std::invalid_argument("m_lambda must be >= 2");
  std::vector<double> product(m_lambda), avg_a(m_lambda), avg_b(m_lambda);
  for (std::size_t k = 0; k < m_lambda; ++k) {
    Rng rng(seed, streams::kLambdaBase + k);
    const Lambda lambda = model.sample_lambda(rng);
    const LambdaSample s = evaluate_lambda(model, lambda, a, b, grid_a, grid_b, variant);
    product[k] = s.product;
    avg_a[k] = s.avg_a;
    avg_b[k] = s.avg_b;
  }
  return {two_pass(product), two_pass(avg_a), two_pass(avg_b)};
}

}  // namespace lhvsim
