#pragma once

// Exact two-qubit state-vector mechanics.
//
// Basis ordering is {|uu>, |ud>, |du>, |dd>} with particle 1 the left tensor
// factor, so amplitude index = 2 * s1 + s2 where s = 0 means spin up along z.

#include <array>
#include <complex>
#include <cstdint>
#include <utility>

#include "lhvsim/rng.hpp"

namespace lhvsim {

using Complex = std::complex<double>;

/// Identities of the 4-dimensional linear algebra are held to this tolerance.
inline constexpr double kExactTol = 1e-12;

/// Unit 3-vector measurement axis. The constructor normalizes and rejects the
/// zero vector and non-finite components with std::invalid_argument.
class Direction {
 public:
  Direction(double x, double y, double z);

  static Direction x_axis() { return {1.0, 0.0, 0.0}; }
  static Direction y_axis() { return {0.0, 1.0, 0.0}; }
  static Direction z_axis() { return {0.0, 0.0, 1.0}; }
  /// Unit vector at polar angle theta from +z inside the x-z plane.
  static Direction in_xz_plane(double theta);

  double x() const { return x_; }
  double y() const { return y_; }
  double z() const { return z_; }
  double dot(const Direction& other) const {
    return x_ * other.x_ + y_ * other.y_ + z_ * other.z_;
  }

  friend bool operator==(const Direction&, const Direction&) = default;

 private:
  double x_, y_, z_;
};

/// Measurement result along an axis.
enum class Outcome : std::int8_t { down = -1, up = 1 };

constexpr int value(Outcome o) { return static_cast<int>(o); }
/// sign(0) is +1 everywhere in the library.
constexpr Outcome sign_outcome(double v) { return v >= 0.0 ? Outcome::up : Outcome::down; }
constexpr Outcome flip(Outcome o) { return o == Outcome::up ? Outcome::down : Outcome::up; }

/// Row-major 2x2 complex matrix.
struct Mat2 {
  std::array<Complex, 4> m{};

  Complex& operator()(int r, int c) { return m[2 * r + c]; }
  const Complex& operator()(int r, int c) const { return m[2 * r + c]; }

  static Mat2 identity() { return {{1.0, 0.0, 0.0, 1.0}}; }
};

Mat2 operator*(const Mat2& lhs, const Mat2& rhs);

/// Normalized two-qubit pure state.
class PureState {
 public:
  using Amplitudes = std::array<Complex, 4>;

  /// Normalizes `amp`; throws std::invalid_argument for a zero or non-finite
  /// vector.
  static PureState from_amplitudes(const Amplitudes& amp);

  const Amplitudes& amplitudes() const { return amp_; }
  const Complex& operator[](std::size_t k) const { return amp_[k]; }
  double norm() const;

 private:
  explicit PureState(const Amplitudes& amp) : amp_(amp) {}
  Amplitudes amp_;
};

PureState make_singlet();
/// |uu>
PureState make_product_up();

/// |<lhs|rhs>|, which is 1 iff the states agree up to a global phase.
double overlap_magnitude(const PureState& lhs, const PureState& rhs);

/// d . sigma
Mat2 spin_observable(const Direction& d);

/// exp(-i angle/2 n.sigma): rotation of a spin-1/2 by `angle` about `axis`.
Mat2 rotation(const Direction& axis, double angle);

/// Applies a single-particle operator to particle 1 or 2. The result is not
/// renormalized.
PureState::Amplitudes apply_local(const Mat2& op, int particle,
                                  const PureState::Amplitudes& amp);

/// <psi| (a.sigma) x (b.sigma) |psi>
double qm_correlation(const PureState& psi, const Direction& a, const Direction& b);

/// <psi| (d.sigma) x I |psi> for particle 1, <psi| I x (d.sigma) |psi> for 2.
double qm_marginal(const PureState& psi, const Direction& d, int particle);

/// Born-rule joint law P(s1, s2) indexed [s1 == up ? 0 : 1][s2 == up ? 0 : 1].
std::array<std::array<double, 2>, 2> joint_probabilities(const PureState& psi,
                                                         const Direction& a,
                                                         const Direction& b);

/// Free evolution between preparation and measurement: each particle rotates
/// independently at a fixed angular frequency about a fixed axis. The default
/// is the identity.
struct LocalEvolution {
  double omega1 = 0.0;
  Direction axis1 = Direction::z_axis();
  double omega2 = 0.0;
  Direction axis2 = Direction::z_axis();

  Mat2 u1(double t) const { return rotation(axis1, omega1 * t); }
  Mat2 u2(double t) const { return rotation(axis2, omega2 * t); }
  bool is_identity() const { return omega1 == 0.0 && omega2 == 0.0; }
};

/// Applies U1(t) x U2(t). Requires t >= 0.
PureState evolve(const PureState& psi, const LocalEvolution& ev, double t);

/// Projective measurement of d.sigma on one particle: samples the outcome by
/// the Born rule and returns it with the renormalized collapsed state.
std::pair<Outcome, PureState> measure_particle(const PureState& psi, const Direction& d,
                                               int particle, Rng& rng);

/// Measures particle 1 along `a` at time `t_a` and particle 2 along `b` at
/// time `t_b`, both times counted from preparation. The earlier measurement
/// goes first (particle 1 on ties); between measurements the collapsed state
/// keeps evolving under `ev`. Returns (particle-1 outcome, particle-2 outcome).
std::pair<Outcome, Outcome> sequential_measure(const PureState& psi, const Direction& a,
                                               double t_a, const Direction& b, double t_b,
                                               const LocalEvolution& ev, Rng& rng);

}  // namespace lhvsim
