// Independent numerical oracles used by the tests: finite-difference
// derivatives, a Runge-Kutta integrator, a brute-force Ising enumerator and
// closed-form magnetostatic references.  Everything here is deliberately
// written without reusing library internals so that agreement is evidence.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <vector>

#include "magic/crystal.hpp"

namespace oracles {

/// Minimize the dimensionless crystal potential with an added spin-dependent
/// axial tilt, by Newton iteration in the x-z plane.  Returns the tilted
/// minimum energy.  Used by the energy-difference coupling oracle.
inline double tilted_minimum_energy(const magic::TrapSpec& trap,
                                    const Eigen::VectorXd& tilt_z) {
  const int m = trap.total_ions();
  Eigen::MatrixXd u = magic::solve_equilibrium(trap);
  for (int it = 0; it < 60; ++it) {
    Eigen::VectorXd g = magic::potential_gradient(trap, u);
    g.tail(m) += tilt_z;
    Eigen::VectorXd gxz(2 * m);
    gxz.head(m) = g.head(m);
    gxz.tail(m) = g.tail(m);
    if (gxz.norm() < 1e-13) break;
    const Eigen::MatrixXd h = magic::hessian(trap, u);
    Eigen::MatrixXd hxz(2 * m, 2 * m);
    hxz.topLeftCorner(m, m) = h.topLeftCorner(m, m);
    hxz.topRightCorner(m, m) = h.block(0, 2 * m, m, m);
    hxz.bottomLeftCorner(m, m) = h.block(2 * m, 0, m, m);
    hxz.bottomRightCorner(m, m) = h.block(2 * m, 2 * m, m, m);
    const Eigen::VectorXd step = hxz.ldlt().solve(-gxz);
    u.col(0) += step.head(m);
    u.col(2) += step.tail(m);
  }
  return magic::potential_energy(trap, u) + tilt_z.dot(u.col(2));
}

/// Central finite-difference gradient of a scalar function of an M x 3
/// configuration, ordered (x..., y..., z...).
inline Eigen::VectorXd fd_gradient(
    const std::function<double(const Eigen::MatrixXd&)>& f, const Eigen::MatrixXd& u,
    double h = 1e-6) {
  const int m = static_cast<int>(u.rows());
  Eigen::VectorXd g(3 * m);
  for (int i = 0; i < 3; ++i) {
    for (int n = 0; n < m; ++n) {
      Eigen::MatrixXd up = u, dn = u;
      up(n, i) += h;
      dn(n, i) -= h;
      g(i * m + n) = (f(up) - f(dn)) / (2.0 * h);
    }
  }
  return g;
}

/// Central finite-difference Jacobian of a vector function of the same
/// configuration layout; differentiating an analytic gradient with this
/// yields a finite-difference Hessian accurate to ~1e-10.
inline Eigen::MatrixXd fd_jacobian(
    const std::function<Eigen::VectorXd(const Eigen::MatrixXd&)>& f,
    const Eigen::MatrixXd& u, double h = 1e-6) {
  const int m = static_cast<int>(u.rows());
  Eigen::MatrixXd j(3 * m, 3 * m);
  for (int i = 0; i < 3; ++i) {
    for (int n = 0; n < m; ++n) {
      Eigen::MatrixXd up = u, dn = u;
      up(n, i) += h;
      dn(n, i) -= h;
      j.col(i * m + n) = (f(up) - f(dn)) / (2.0 * h);
    }
  }
  return 0.5 * (j + j.transpose());
}

/// Classic fixed-step RK4 for y' = f(t, y).
inline Eigen::VectorXd rk4(
    const std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>& f,
    Eigen::VectorXd y, double t0, double t1, int steps,
    const std::function<void(double, const Eigen::VectorXd&)>& observe = {}) {
  const double h = (t1 - t0) / steps;
  double t = t0;
  if (observe) observe(t, y);
  for (int i = 0; i < steps; ++i) {
    const Eigen::VectorXd k1 = f(t, y);
    const Eigen::VectorXd k2 = f(t + h / 2, y + h / 2 * k1);
    const Eigen::VectorXd k3 = f(t + h / 2, y + h / 2 * k2);
    const Eigen::VectorXd k4 = f(t + h, y + h * k3);
    y += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    t = t0 + (i + 1) * h;
    if (observe) observe(t, y);
  }
  return y;
}

/// Brute-force Ising minimum: direct double loop over all 2^m sign vectors
/// (no Gray code, no incremental update), returning the minimal energy and
/// every configuration attaining it within tol, canonicalized to s_0 = +1.
struct BruteIsing {
  double energy = 0.0;
  std::vector<std::vector<int>> configs;
};
inline BruteIsing brute_ising(const Eigen::MatrixXd& j, double tol = 1e-12) {
  const int m = static_cast<int>(j.rows());
  BruteIsing out;
  out.energy = std::numeric_limits<double>::infinity();
  std::vector<std::vector<int>> all;
  std::vector<double> energies;
  for (long mask = 0; mask < (1L << m); ++mask) {
    std::vector<int> s(m);
    for (int n = 0; n < m; ++n) s[n] = (mask >> n) & 1 ? 1 : -1;
    if (s[0] != 1) continue;
    double e = 0.0;
    for (int n = 0; n < m; ++n)
      for (int k = n + 1; k < m; ++k) e -= j(n, k) * s[n] * s[k];
    all.push_back(s);
    energies.push_back(e);
    out.energy = std::min(out.energy, e);
  }
  for (size_t i = 0; i < all.size(); ++i)
    if (energies[i] <= out.energy + tol) out.configs.push_back(all[i]);
  return out;
}

/// |B| of an infinitely long straight wire at distance r: mu0 I / (2 pi r).
inline double infinite_wire_field(double current, double r) {
  return 1.25663706212e-6 * current / (2.0 * 3.14159265358979323846 * r);
}

/// |B| at the center of a square loop with side a: 2 sqrt(2) mu0 I / (pi a).
inline double square_loop_center_field(double current, double side) {
  return 2.0 * std::sqrt(2.0) * 1.25663706212e-6 * current /
         (3.14159265358979323846 * side);
}

/// Power of a sampled real signal at angular frequency w (plain projection
/// onto sin/cos over the window); used to locate spectral peaks.
inline double tone_power(const std::vector<double>& t, const std::vector<double>& y,
                         double w) {
  double s = 0.0, c = 0.0;
  for (size_t i = 0; i < t.size(); ++i) {
    s += y[i] * std::sin(w * t[i]);
    c += y[i] * std::cos(w * t[i]);
  }
  return (s * s + c * c) / (t.size() * t.size());
}

}  // namespace oracles
