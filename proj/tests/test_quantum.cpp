#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "lhvsim/quantum.hpp"
#include "oracles.hpp"

using namespace lhvsim;

namespace {

oracle::Amp amps(const PureState& psi) { return psi.amplitudes(); }

PureState random_state(Rng& rng) {
  PureState::Amplitudes amp;
  for (auto& c : amp) c = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
  return PureState::from_amplitudes(amp);
}

// Four-sigma binomial band for `count` hits out of `n` at probability p.
void expect_binomial(std::size_t count, std::size_t n, double p) {
  const double mean = p * static_cast<double>(n);
  const double sigma = std::sqrt(static_cast<double>(n) * p * (1 - p));
  EXPECT_LE(std::abs(static_cast<double>(count) - mean), 4.0 * sigma + 1e-9)
      << "count " << count << " of " << n << " at p = " << p;
}

}  // namespace

TEST(Direction, NormalizesAndRejectsDegenerateInput) {
  const Direction d(3.0, 0.0, 4.0);
  EXPECT_NEAR(d.x() * d.x() + d.y() * d.y() + d.z() * d.z(), 1.0, kExactTol);
  EXPECT_DOUBLE_EQ(d.x(), 0.6);
  EXPECT_THROW(Direction(0.0, 0.0, 0.0), std::invalid_argument);
  EXPECT_THROW(Direction(NAN, 0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(Direction(INFINITY, 0.0, 1.0), std::invalid_argument);
}

TEST(PureState, SingletAmplitudes) {
  const PureState s = make_singlet();
  EXPECT_EQ(s[0], Complex(0.0, 0.0));
  EXPECT_DOUBLE_EQ(s[1].real(), 0.7071067811865476);
  EXPECT_DOUBLE_EQ(s[2].real(), -0.7071067811865476);
  EXPECT_EQ(s[3], Complex(0.0, 0.0));
  EXPECT_NEAR(s.norm(), 1.0, kExactTol);
  EXPECT_THROW(PureState::from_amplitudes({}), std::invalid_argument);
}

TEST(SpinObservable, PauliMatrices) {
  const Mat2 z = spin_observable(Direction::z_axis());
  EXPECT_EQ(z(0, 0), Complex(1.0));
  EXPECT_EQ(z(0, 1), Complex(0.0));
  EXPECT_EQ(z(1, 0), Complex(0.0));
  EXPECT_EQ(z(1, 1), Complex(-1.0));
  const Mat2 x = spin_observable(Direction::x_axis());
  EXPECT_EQ(x(0, 0), Complex(0.0));
  EXPECT_EQ(x(0, 1), Complex(1.0));
  EXPECT_EQ(x(1, 0), Complex(1.0));
  EXPECT_EQ(x(1, 1), Complex(0.0));
}

TEST(SpinObservable, HermitianTracelessUnitSpectrum) {
  Rng rng(11);
  for (int k = 0; k < 100; ++k) {
    const Mat2 m = spin_observable(oracle::random_direction(rng));
    EXPECT_NEAR(std::abs(m(0, 1) - std::conj(m(1, 0))), 0.0, kExactTol);
    EXPECT_NEAR(m(0, 0).imag(), 0.0, kExactTol);
    EXPECT_NEAR(std::abs(m(0, 0) + m(1, 1)), 0.0, kExactTol);
    // Traceless 2x2: eigenvalues are +-sqrt(-det).
    const Complex det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    EXPECT_NEAR(det.real(), -1.0, kExactTol);
    EXPECT_NEAR(det.imag(), 0.0, kExactTol);
  }
}

TEST(QmCorrelation, NamedExamples) {
  const auto z = Direction::z_axis();
  const auto x = Direction::x_axis();
  EXPECT_EQ(qm_correlation(make_singlet(), z, z), -1.0);
  EXPECT_NEAR(qm_correlation(make_singlet(), z, x), 0.0, kExactTol);
  EXPECT_NEAR(qm_correlation(make_product_up(), z, z), 1.0, kExactTol);
}

TEST(QmCorrelation, SingletMatchesExplicitKroneckerAndDotLaw) {
  Rng rng(2024);
  const PureState singlet = make_singlet();
  for (int k = 0; k < 100; ++k) {
    const Direction a = oracle::random_direction(rng);
    const Direction b = oracle::random_direction(rng);
    const Complex direct = oracle::expectation(amps(singlet), oracle::observable_pair(a, b));
    EXPECT_NEAR(direct.imag(), 0.0, kExactTol);
    EXPECT_NEAR(qm_correlation(singlet, a, b), direct.real(), kExactTol);
    EXPECT_NEAR(qm_correlation(singlet, a, b) + a.dot(b), 0.0, kExactTol);
  }
}

TEST(QmCorrelation, BoundedForRandomStates) {
  Rng rng(5);
  for (int k = 0; k < 200; ++k) {
    const PureState psi = random_state(rng);
    const Direction a = oracle::random_direction(rng);
    const Direction b = oracle::random_direction(rng);
    const double e = qm_correlation(psi, a, b);
    EXPECT_LE(std::abs(e), 1.0 + kExactTol);
    EXPECT_NEAR(e, oracle::expectation(amps(psi), oracle::observable_pair(a, b)).real(),
                kExactTol);
  }
}

TEST(QmMarginal, Examples) {
  EXPECT_NEAR(qm_marginal(make_product_up(), Direction::z_axis(), 2), 1.0, kExactTol);
  EXPECT_NEAR(qm_marginal(make_product_up(), Direction::x_axis(), 1), 0.0, kExactTol);
  Rng rng(9);
  for (int k = 0; k < 100; ++k) {
    const Direction d = oracle::random_direction(rng);
    EXPECT_NEAR(qm_marginal(make_singlet(), d, 1), 0.0, kExactTol);
    EXPECT_NEAR(qm_marginal(make_singlet(), d, 2), 0.0, kExactTol);
  }
  EXPECT_THROW(qm_marginal(make_singlet(), Direction::z_axis(), 3), std::invalid_argument);
}

TEST(JointProbabilities, MatchProjectorOracle) {
  Rng rng(77);
  for (int k = 0; k < 50; ++k) {
    const PureState psi = random_state(rng);
    const Direction a = oracle::random_direction(rng);
    const Direction b = oracle::random_direction(rng);
    const auto p = joint_probabilities(psi, a, b);
    const auto q = oracle::born_joint(amps(psi), a, b);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) EXPECT_NEAR(p[i][j], q[i][j], kExactTol);
  }
}

TEST(Evolve, ZeroFrequencyIsIdentity) {
  Rng rng(3);
  const PureState psi = random_state(rng);
  const PureState out = evolve(psi, LocalEvolution{}, 7.5);
  for (std::size_t k = 0; k < 4; ++k) EXPECT_EQ(out[k], psi[k]);
  EXPECT_THROW(evolve(psi, LocalEvolution{}, -1.0), std::invalid_argument);
}

TEST(Evolve, SingletInvariantUnderIdenticalRotations) {
  const Direction axis(1.0, 2.0, -0.5);
  const LocalEvolution ev{1.3, axis, 1.3, axis};
  for (double t : {0.0, 0.4, 2.0, 11.0}) {
    const PureState out = evolve(make_singlet(), ev, t);
    EXPECT_NEAR(overlap_magnitude(out, make_singlet()), 1.0, kExactTol);
    EXPECT_NEAR(out.norm(), 1.0, kExactTol);
  }
}

TEST(Evolve, HalfTurnAboutXFlipsBothSpins) {
  const double pi = std::numbers::pi;
  const LocalEvolution ev{pi, Direction::x_axis(), pi, Direction::x_axis()};
  const PureState out = evolve(make_product_up(), ev, 1.0);

  // Oracle: exp(-i pi/2 sigma_x) from the Taylor series, applied as a
  // Kronecker product to |uu>.
  const auto u = oracle::rotation_by_series(Direction::x_axis(), pi);
  const auto expected = oracle::apply(oracle::kron(u, u), amps(make_product_up()));
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(std::abs(out[k] - expected[k]), 0.0, kExactTol);

  const PureState down_down = PureState::from_amplitudes({0.0, 0.0, 0.0, 1.0});
  EXPECT_NEAR(overlap_magnitude(out, down_down), 1.0, kExactTol);
}

TEST(Evolve, RotationMatchesSeriesForRandomAxes) {
  Rng rng(19);
  for (int k = 0; k < 50; ++k) {
    const Direction n = oracle::random_direction(rng);
    const double angle = rng.uniform(0.0, 8.0);
    const Mat2 r = rotation(n, angle);
    const auto s = oracle::rotation_by_series(n, angle);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) EXPECT_NEAR(std::abs(r(i, j) - s[i][j]), 0.0, kExactTol);
  }
}

TEST(Evolve, PreservesNorm) {
  Rng rng(23);
  for (int k = 0; k < 100; ++k) {
    const LocalEvolution ev{rng.uniform(0, 10), oracle::random_direction(rng), rng.uniform(0, 10),
                            oracle::random_direction(rng)};
    EXPECT_NEAR(evolve(random_state(rng), ev, rng.uniform(0, 5)).norm(), 1.0, kExactTol);
  }
}

TEST(MeasureParticle, CollapsedStateIsNormalizedEigenstate) {
  Rng rng(31);
  for (int k = 0; k < 100; ++k) {
    const PureState psi = random_state(rng);
    const Direction d = oracle::random_direction(rng);
    const int particle = 1 + k % 2;
    const auto [o, post] = measure_particle(psi, d, particle, rng);
    EXPECT_NEAR(post.norm(), 1.0, kExactTol);
    EXPECT_NEAR(qm_marginal(post, d, particle), static_cast<double>(value(o)), 1e-9);
  }
}

TEST(SequentialMeasure, SingletParallelAxesAlwaysAnticorrelated) {
  Rng rng(41);
  for (int k = 0; k < 10000; ++k) {
    const auto [o1, o2] = sequential_measure(make_singlet(), Direction::z_axis(), rng.uniform(),
                                             Direction::z_axis(), rng.uniform(), {}, rng);
    ASSERT_EQ(value(o1) * value(o2), -1);
  }
}

TEST(SequentialMeasure, EigenstateIsDeterministic) {
  Rng rng(43);
  for (int k = 0; k < 1000; ++k) {
    const auto [o1, o2] = sequential_measure(make_product_up(), Direction::z_axis(), 0.3,
                                             Direction::z_axis(), 0.1, {}, rng);
    ASSERT_EQ(o1, Outcome::up);
    ASSERT_EQ(o2, Outcome::up);
  }
}

TEST(SequentialMeasure, JointFrequenciesFollowBornRule) {
  Rng rng(47);
  const Direction a(0.3, -0.2, 0.9);
  const Direction b(-0.5, 0.7, 0.1);
  const std::size_t shots = 200000;
  std::array<std::array<std::size_t, 2>, 2> counts{};
  for (std::size_t s = 0; s < shots; ++s) {
    const auto [o1, o2] = sequential_measure(make_singlet(), a, 0.2, b, 0.7, {}, rng);
    ++counts[o1 == Outcome::up ? 0 : 1][o2 == Outcome::up ? 0 : 1];
  }
  const auto p = oracle::born_joint(amps(make_singlet()), a, b);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const double s1 = i == 0 ? 1 : -1, s2 = j == 0 ? 1 : -1;
      EXPECT_NEAR(p[i][j], (1 - s1 * s2 * a.dot(b)) / 4, kExactTol);
      expect_binomial(counts[i][j], shots, p[i][j]);
    }
  }
}

TEST(SequentialMeasure, MeanProductConvergesToCorrelation) {
  Rng rng(53);
  const PureState psi = random_state(rng);
  const Direction a = oracle::random_direction(rng);
  const Direction b = oracle::random_direction(rng);
  const std::size_t shots = 100000;
  long long sum = 0;
  for (std::size_t s = 0; s < shots; ++s) {
    const auto [o1, o2] = sequential_measure(psi, a, 1.0, b, 2.0, {}, rng);
    sum += value(o1) * value(o2);
  }
  const double mean = static_cast<double>(sum) / shots;
  EXPECT_LE(std::abs(mean - qm_correlation(psi, a, b)), 4.0 / std::sqrt(double(shots)));
}

// With free evolution, measuring particle 1 at t_a and particle 2 at t_b is
// equivalent to measuring U1(t_a) x U2(t_b) psi at once, because each
// unitary commutes with the other particle's projector.
TEST(SequentialMeasure, EvolutionBetweenMeasurementsMatchesUnitaryOracle) {
  Rng rng(59);
  const Direction ax1(0.2, 1.0, 0.3), ax2(-1.0, 0.1, 0.4);
  const LocalEvolution ev{2.1, ax1, 0.7, ax2};
  const Direction a = Direction::z_axis();
  const Direction b(1.0, 0.0, 1.0);
  const double t_a = 0.9, t_b = 0.35;

  const auto u1 = oracle::rotation_by_series(ax1, 2.1 * t_a);
  const auto u2 = oracle::rotation_by_series(ax2, 0.7 * t_b);
  const auto evolved = oracle::apply(oracle::kron(u1, u2), amps(make_singlet()));
  const auto p = oracle::born_joint(evolved, a, b);

  const std::size_t shots = 200000;
  std::array<std::array<std::size_t, 2>, 2> counts{};
  for (std::size_t s = 0; s < shots; ++s) {
    const auto [o1, o2] = sequential_measure(make_singlet(), a, t_a, b, t_b, ev, rng);
    ++counts[o1 == Outcome::up ? 0 : 1][o2 == Outcome::up ? 0 : 1];
  }
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) expect_binomial(counts[i][j], shots, p[i][j]);
}

TEST(SequentialMeasure, MeasurementOrderDoesNotChangeStatistics) {
  const Direction a(0.4, 0.1, -0.8);
  const Direction b(0.9, -0.3, 0.2);
  const std::size_t shots = 200000;
  std::array<std::array<double, 2>, 2> freq[2]{};
  for (int order = 0; order < 2; ++order) {
    Rng rng(61, order);
    const double t_a = order == 0 ? 0.1 : 0.8;
    const double t_b = order == 0 ? 0.8 : 0.1;
    for (std::size_t s = 0; s < shots; ++s) {
      const auto [o1, o2] = sequential_measure(make_singlet(), a, t_a, b, t_b, {}, rng);
      freq[order][o1 == Outcome::up ? 0 : 1][o2 == Outcome::up ? 0 : 1] += 1.0 / shots;
    }
  }
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const double p = 0.5 * (freq[0][i][j] + freq[1][i][j]);
      const double sigma = std::sqrt(2.0 * p * (1 - p) / shots);
      EXPECT_LE(std::abs(freq[0][i][j] - freq[1][i][j]), 4.0 * sigma);
    }
  }
}
