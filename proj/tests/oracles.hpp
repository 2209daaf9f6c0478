#pragma once

// Independent reference computations used only by the tests. Nothing here
// calls the library's closed forms: expectations go through explicit 4x4
// Kronecker products, evolution through a Taylor-series matrix exponential,
// and sphere integrals through deterministic quadrature.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "lhvsim/quantum.hpp"
#include "lhvsim/rng.hpp"

namespace lhvsim::oracle {

using Mat4 = std::array<std::array<Complex, 4>, 4>;
using Amp = std::array<Complex, 4>;

inline std::array<std::array<Complex, 2>, 2> pauli_dot(double x, double y, double z) {
  return {{{Complex{z, 0}, Complex{x, -y}}, {Complex{x, y}, Complex{-z, 0}}}};
}

inline std::array<std::array<Complex, 2>, 2> identity2() {
  return {{{Complex{1, 0}, Complex{0, 0}}, {Complex{0, 0}, Complex{1, 0}}}};
}

inline Mat4 kron(const std::array<std::array<Complex, 2>, 2>& l,
                 const std::array<std::array<Complex, 2>, 2>& r) {
  Mat4 out{};
  for (int i1 = 0; i1 < 2; ++i1)
    for (int j1 = 0; j1 < 2; ++j1)
      for (int i2 = 0; i2 < 2; ++i2)
        for (int j2 = 0; j2 < 2; ++j2) out[2 * i1 + i2][2 * j1 + j2] = l[i1][j1] * r[i2][j2];
  return out;
}

inline Amp apply(const Mat4& m, const Amp& v) {
  Amp out{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out[i] += m[i][j] * v[j];
  return out;
}

inline Complex expectation(const Amp& v, const Mat4& m) {
  const Amp mv = apply(m, v);
  Complex s{};
  for (int i = 0; i < 4; ++i) s += std::conj(v[i]) * mv[i];
  return s;
}

inline Mat4 observable_pair(const Direction& a, const Direction& b) {
  return kron(pauli_dot(a.x(), a.y(), a.z()), pauli_dot(b.x(), b.y(), b.z()));
}

/// Born joint law via explicit 4x4 projectors (I + s1 a.sigma)/2 x (I + s2 b.sigma)/2.
inline std::array<std::array<double, 2>, 2> born_joint(const Amp& psi, const Direction& a,
                                                       const Direction& b) {
  std::array<std::array<double, 2>, 2> p{};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const double s1 = i == 0 ? 1.0 : -1.0;
      const double s2 = j == 0 ? 1.0 : -1.0;
      auto pa = pauli_dot(s1 * a.x(), s1 * a.y(), s1 * a.z());
      auto pb = pauli_dot(s2 * b.x(), s2 * b.y(), s2 * b.z());
      for (int k = 0; k < 2; ++k) {
        for (int l = 0; l < 2; ++l) {
          pa[k][l] = 0.5 * ((k == l ? 1.0 : 0.0) + pa[k][l]);
          pb[k][l] = 0.5 * ((k == l ? 1.0 : 0.0) + pb[k][l]);
        }
      }
      p[i][j] = expectation(psi, kron(pa, pb)).real();
    }
  }
  return p;
}

/// exp(M) for a 2x2 matrix by Taylor series; adequate for |M| <~ 10.
inline std::array<std::array<Complex, 2>, 2> expm2(const std::array<std::array<Complex, 2>, 2>& m) {
  auto result = identity2();
  auto term = identity2();
  for (int n = 1; n < 60; ++n) {
    std::array<std::array<Complex, 2>, 2> next{};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) next[i][j] += term[i][k] * m[k][j];
    for (auto& row : next)
      for (auto& c : row) c /= static_cast<double>(n);
    term = next;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) result[i][j] += term[i][j];
  }
  return result;
}

/// exp(-i angle/2 n.sigma) through the series.
inline std::array<std::array<Complex, 2>, 2> rotation_by_series(const Direction& n, double angle) {
  auto g = pauli_dot(n.x(), n.y(), n.z());
  for (auto& row : g)
    for (auto& c : row) c *= Complex{0.0, -0.5 * angle};
  return expm2(g);
}

inline Direction random_direction(Rng& rng) {
  for (;;) {
    const double x = rng.uniform(-1, 1), y = rng.uniform(-1, 1), z = rng.uniform(-1, 1);
    const double r2 = x * x + y * y + z * z;
    if (r2 > 1e-6 && r2 <= 1.0) return {x, y, z};
  }
}

struct Quadrature {
  double value;
  /// |Q(n) - Q(n/2)|, a conservative error estimate.
  double error;
};

/// Midpoint quadrature over the sphere in (cos polar, azimuth) of
/// sign(l.a) * (-sign(l.b)) for a = z and b at angle theta in the x-z plane.
inline double bell_sphere_midpoint(double theta, int n) {
  const double bx = std::sin(theta), bz = std::cos(theta);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = -1.0 + (2.0 * i + 1.0) / n;
    const double r = std::sqrt(1.0 - u * u);
    for (int j = 0; j < n; ++j) {
      const double phi = 2.0 * std::numbers::pi * (j + 0.5) / n;
      const double la = u;
      const double lb = r * std::cos(phi) * bx + u * bz;
      const double sa = la >= 0 ? 1.0 : -1.0;
      const double sb = lb >= 0 ? 1.0 : -1.0;
      sum += -sa * sb;
    }
  }
  return sum / (static_cast<double>(n) * n);
}

inline Quadrature bell_sphere_quadrature(double theta, int n = 2000) {
  const double fine = bell_sphere_midpoint(theta, n);
  const double coarse = bell_sphere_midpoint(theta, n / 2);
  return {fine, std::abs(fine - coarse)};
}

}  // namespace lhvsim::oracle
