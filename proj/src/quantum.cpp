#include "lhvsim/quantum.hpp"

#include <cmath>
#include <stdexcept>

namespace lhvsim {

namespace {

constexpr Complex kI{0.0, 1.0};

double squared_norm(const PureState::Amplitudes& amp) {
  double s = 0.0;
  for (const auto& c : amp) s += std::norm(c);
  return s;
}

Complex inner(const PureState::Amplitudes& lhs, const PureState::Amplitudes& rhs) {
  Complex s{};
  for (std::size_t k = 0; k < 4; ++k) s += std::conj(lhs[k]) * rhs[k];
  return s;
}

// (I + sign * d.sigma) / 2
Mat2 projector(const Direction& d, Outcome o) {
  const Mat2 obs = spin_observable(d);
  const double s = value(o);
  Mat2 p;
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      p(r, c) = 0.5 * ((r == c ? 1.0 : 0.0) + s * obs(r, c));
    }
  }
  return p;
}

void check_particle(int particle) {
  if (particle != 1 && particle != 2) {
    throw std::invalid_argument("particle must be 1 or 2");
  }
}

}  // namespace

Direction::Direction(double x, double y, double z) {
  if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z)) {
    throw std::invalid_argument("direction has non-finite components");
  }
  const double n = std::sqrt(x * x + y * y + z * z);
  if (n == 0.0) throw std::invalid_argument("direction is the zero vector");
  x_ = x / n;
  y_ = y / n;
  z_ = z / n;
}

Direction Direction::in_xz_plane(double theta) {
  return {std::sin(theta), 0.0, std::cos(theta)};
}

Mat2 operator*(const Mat2& lhs, const Mat2& rhs) {
  Mat2 out;
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      out(r, c) = lhs(r, 0) * rhs(0, c) + lhs(r, 1) * rhs(1, c);
    }
  }
  return out;
}

PureState PureState::from_amplitudes(const Amplitudes& amp) {
  const double n2 = squared_norm(amp);
  if (!std::isfinite(n2)) throw std::invalid_argument("state has non-finite amplitudes");
  if (n2 == 0.0) throw std::invalid_argument("state is the zero vector");
  const double inv = 1.0 / std::sqrt(n2);
  Amplitudes out;
  for (std::size_t k = 0; k < 4; ++k) out[k] = amp[k] * inv;
  return PureState(out);
}

double PureState::norm() const { return std::sqrt(squared_norm(amp_)); }

PureState make_singlet() {
  const double h = 1.0 / std::sqrt(2.0);
  return PureState::from_amplitudes({0.0, h, -h, 0.0});
}

PureState make_product_up() { return PureState::from_amplitudes({1.0, 0.0, 0.0, 0.0}); }

double overlap_magnitude(const PureState& lhs, const PureState& rhs) {
  return std::abs(inner(lhs.amplitudes(), rhs.amplitudes()));
}

Mat2 spin_observable(const Direction& d) {
  return {{Complex{d.z(), 0.0}, Complex{d.x(), -d.y()}, Complex{d.x(), d.y()},
           Complex{-d.z(), 0.0}}};
}

Mat2 rotation(const Direction& axis, double angle) {
  const double c = std::cos(0.5 * angle);
  const double s = std::sin(0.5 * angle);
  const Mat2 n = spin_observable(axis);
  Mat2 u;
  for (int r = 0; r < 2; ++r) {
    for (int col = 0; col < 2; ++col) {
      u(r, col) = (r == col ? c : 0.0) - kI * s * n(r, col);
    }
  }
  return u;
}

PureState::Amplitudes apply_local(const Mat2& op, int particle,
                                  const PureState::Amplitudes& amp) {
  check_particle(particle);
  PureState::Amplitudes out{};
  for (int s1 = 0; s1 < 2; ++s1) {
    for (int s2 = 0; s2 < 2; ++s2) {
      Complex acc{};
      for (int k = 0; k < 2; ++k) {
        acc += particle == 1 ? op(s1, k) * amp[2 * k + s2] : op(s2, k) * amp[2 * s1 + k];
      }
      out[2 * s1 + s2] = acc;
    }
  }
  return out;
}

double qm_correlation(const PureState& psi, const Direction& a, const Direction& b) {
  const auto& amp = psi.amplitudes();
  const auto image = apply_local(spin_observable(b), 2, apply_local(spin_observable(a), 1, amp));
  // Dividing by <psi|psi> removes the rounding left in the stored norm.
  return inner(amp, image).real() / squared_norm(amp);
}

double qm_marginal(const PureState& psi, const Direction& d, int particle) {
  const auto& amp = psi.amplitudes();
  return inner(amp, apply_local(spin_observable(d), particle, amp)).real() / squared_norm(amp);
}

std::array<std::array<double, 2>, 2> joint_probabilities(const PureState& psi,
                                                         const Direction& a,
                                                         const Direction& b) {
  std::array<std::array<double, 2>, 2> p{};
  const double total = squared_norm(psi.amplitudes());
  for (Outcome s1 : {Outcome::up, Outcome::down}) {
    const auto first = apply_local(projector(a, s1), 1, psi.amplitudes());
    for (Outcome s2 : {Outcome::up, Outcome::down}) {
      const auto both = apply_local(projector(b, s2), 2, first);
      p[s1 == Outcome::up ? 0 : 1][s2 == Outcome::up ? 0 : 1] = squared_norm(both) / total;
    }
  }
  return p;
}

PureState evolve(const PureState& psi, const LocalEvolution& ev, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("evolution time must be >= 0");
  if (ev.is_identity()) return psi;
  return PureState::from_amplitudes(
      apply_local(ev.u2(t), 2, apply_local(ev.u1(t), 1, psi.amplitudes())));
}

std::pair<Outcome, PureState> measure_particle(const PureState& psi, const Direction& d,
                                               int particle, Rng& rng) {
  check_particle(particle);
  const auto up = apply_local(projector(d, Outcome::up), particle, psi.amplitudes());
  const double p_up = squared_norm(up) / squared_norm(psi.amplitudes());
  if (rng.uniform() < p_up) return {Outcome::up, PureState::from_amplitudes(up)};
  return {Outcome::down, PureState::from_amplitudes(
                             apply_local(projector(d, Outcome::down), particle, psi.amplitudes()))};
}

std::pair<Outcome, Outcome> sequential_measure(const PureState& psi, const Direction& a,
                                               double t_a, const Direction& b, double t_b,
                                               const LocalEvolution& ev, Rng& rng) {
  if (!(t_a >= 0.0) || !(t_b >= 0.0)) {
    throw std::invalid_argument("measurement times must be >= 0");
  }
  const bool first_is_1 = t_a <= t_b;
  const double t_first = first_is_1 ? t_a : t_b;
  const double t_second = first_is_1 ? t_b : t_a;

  auto [o_first, collapsed] = measure_particle(evolve(psi, ev, t_first),
                                               first_is_1 ? a : b, first_is_1 ? 1 : 2, rng);
  auto [o_second, unused] = measure_particle(evolve(collapsed, ev, t_second - t_first),
                                             first_is_1 ? b : a, first_is_1 ? 2 : 1, rng);
  (void)unused;
  return first_is_1 ? std::pair{o_first, o_second} : std::pair{o_second, o_first};
}

}  // namespace lhvsim
