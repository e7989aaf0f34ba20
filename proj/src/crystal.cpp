#include "magic/crystal.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace magic {

namespace {

// Dimensionless well center of ion n (chain-major indexing).
inline void well_center(const TrapSpec& trap, double l, int n, double& wx, double& wz) {
  const bool second = trap.chains == 2 && n >= trap.ions_per_chain;
  wx = second ? trap.chain_separation_m / l : 0.0;
  wz = second ? trap.axial_shift_m / l : 0.0;
}

}  // namespace

double potential_energy(const TrapSpec& trap, const Eigen::MatrixXd& u) {
  const int m = static_cast<int>(u.rows());
  const double l = scale_length(trap.species, trap.omega_z);
  double v = 0.0;
  for (int n = 0; n < m; ++n) {
    double wx, wz;
    well_center(trap, l, n, wx, wz);
    const double dx = u(n, 0) - wx;
    const double dz = u(n, 2) - wz;
    v += dx * dx / (2.0 * trap.alpha_x) + u(n, 1) * u(n, 1) / (2.0 * trap.alpha_y) +
         dz * dz / 2.0;
  }
  for (int n = 0; n < m; ++n)
    for (int k = n + 1; k < m; ++k)
      v += 1.0 / (u.row(n) - u.row(k)).norm();
  return v;
}

Eigen::VectorXd potential_gradient(const TrapSpec& trap, const Eigen::MatrixXd& u) {
  const int m = static_cast<int>(u.rows());
  const double l = scale_length(trap.species, trap.omega_z);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(3 * m);
  for (int n = 0; n < m; ++n) {
    double wx, wz;
    well_center(trap, l, n, wx, wz);
    g(n) = (u(n, 0) - wx) / trap.alpha_x;
    g(m + n) = u(n, 1) / trap.alpha_y;
    g(2 * m + n) = u(n, 2) - wz;
  }
  for (int n = 0; n < m; ++n) {
    for (int k = n + 1; k < m; ++k) {
      const Eigen::RowVector3d d = u.row(n) - u.row(k);
      const double r = d.norm();
      const Eigen::RowVector3d f = d / (r * r * r);  // -dV/du_n of 1/r
      for (int i = 0; i < 3; ++i) {
        g(i * m + n) -= f(i);
        g(i * m + k) += f(i);
      }
    }
  }
  return g;
}

Eigen::MatrixXd hessian(const TrapSpec& trap, const Eigen::MatrixXd& u) {
  const int m = static_cast<int>(u.rows());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(3 * m, 3 * m);
  for (int n = 0; n < m; ++n) {
    h(n, n) = 1.0 / trap.alpha_x;
    h(m + n, m + n) = 1.0 / trap.alpha_y;
    h(2 * m + n, 2 * m + n) = 1.0;
  }
  // Coulomb pair blocks: t_ij = 3 d_i d_j / r^5 - delta_ij / r^3 adds to both
  // diagonal blocks and subtracts from the off-diagonal blocks.
  for (int n = 0; n < m; ++n) {
    for (int k = n + 1; k < m; ++k) {
      const Eigen::RowVector3d d = u.row(n) - u.row(k);
      const double r = d.norm();
      const double r3 = r * r * r;
      const double r5 = r3 * r * r;
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          const double t = 3.0 * d(i) * d(j) / r5 - (i == j ? 1.0 / r3 : 0.0);
          h(i * m + n, j * m + n) += t;
          h(i * m + k, j * m + k) += t;
          h(i * m + n, j * m + k) -= t;
          h(i * m + k, j * m + n) -= t;
        }
      }
    }
  }
  return h;
}

namespace {

// Gradient and Hessian restricted to the x-z plane (y = 0 decouples by
// symmetry), coordinate order (x_0..x_{m-1}, z_0..z_{m-1}).
Eigen::VectorXd grad_xz(const TrapSpec& trap, const Eigen::MatrixXd& u) {
  const int m = static_cast<int>(u.rows());
  const Eigen::VectorXd g = potential_gradient(trap, u);
  Eigen::VectorXd gxz(2 * m);
  gxz.head(m) = g.head(m);
  gxz.tail(m) = g.tail(m);
  return gxz;
}

Eigen::MatrixXd hess_xz(const TrapSpec& trap, const Eigen::MatrixXd& u) {
  const int m = static_cast<int>(u.rows());
  const Eigen::MatrixXd h = hessian(trap, u);
  Eigen::MatrixXd hxz(2 * m, 2 * m);
  hxz.topLeftCorner(m, m) = h.topLeftCorner(m, m);
  hxz.topRightCorner(m, m) = h.block(0, 2 * m, m, m);
  hxz.bottomLeftCorner(m, m) = h.block(2 * m, 0, m, m);
  hxz.bottomRightCorner(m, m) = h.block(2 * m, 2 * m, m, m);
  return hxz;
}

}  // namespace

Eigen::MatrixXd solve_equilibrium(const TrapSpec& trap, double tol, int max_iter) {
  if (trap.chains != 1 && trap.chains != 2)
    throw std::invalid_argument("chains must be 1 or 2");
  if (trap.ions_per_chain < 1)
    throw std::invalid_argument("ions_per_chain must be positive");
  const int n = trap.ions_per_chain;
  const int m = trap.total_ions();
  const double l = scale_length(trap.species, trap.omega_z);

  // Initial guess: each chain equally spaced over the empirical span
  // 2 N^0.56, centered on its well.
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(m, 3);
  const double span = 2.0 * std::pow(static_cast<double>(n), 0.56);
  for (int c = 0; c < trap.chains; ++c) {
    for (int i = 0; i < n; ++i) {
      const int ion = c * n + i;
      double wx, wz;
      well_center(trap, l, ion, wx, wz);
      u(ion, 0) = wx;
      u(ion, 2) = wz + (n == 1 ? 0.0 : -span / 2.0 + span * i / (n - 1.0));
    }
  }

  // Damped Newton on the x-z gradient with backtracking on |g|.
  double gnorm = grad_xz(trap, u).norm();
  for (int it = 0; it < max_iter; ++it) {
    if (gnorm < tol) return u;
    const Eigen::VectorXd g = grad_xz(trap, u);
    const Eigen::MatrixXd h = hess_xz(trap, u);
    Eigen::VectorXd step = h.ldlt().solve(-g);
    if (!step.allFinite()) step = -g;  // singular Hessian: fall back to descent
    double lambda = 1.0;
    Eigen::MatrixXd best = u;
    double best_norm = gnorm;
    while (lambda > 1e-6) {
      Eigen::MatrixXd trial = u;
      trial.col(0) += lambda * step.head(m);
      trial.col(2) += lambda * step.tail(m);
      const double trial_norm = grad_xz(trap, trial).norm();
      if (trial_norm < best_norm) {
        best = trial;
        best_norm = trial_norm;
        break;
      }
      lambda /= 2.0;
    }
    if (best_norm >= gnorm) throw std::runtime_error("equilibrium search stalled");
    u = best;
    gnorm = best_norm;
  }
  if (gnorm < tol) return u;
  throw std::runtime_error("equilibrium search did not converge");
}

CrystalState normal_modes(const TrapSpec& trap) {
  CrystalState st;
  st.trap = trap;
  st.scale_length_m = scale_length(trap.species, trap.omega_z);
  st.positions = solve_equilibrium(trap);
  st.hessian = hessian(trap, st.positions);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(st.hessian);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("Hessian eigendecomposition failed");
  const int dim = static_cast<int>(st.hessian.rows());
  st.mode_eigenvalues.resize(dim);
  st.mode_frequencies.resize(dim);
  st.mode_vectors.resize(dim, dim);
  // SelfAdjointEigenSolver sorts ascending; flip to descending frequency.
  for (int k = 0; k < dim; ++k) {
    const int src = dim - 1 - k;
    const double lam = es.eigenvalues()(src);
    st.mode_eigenvalues(k) = lam;
    st.mode_vectors.col(k) = es.eigenvectors().col(src);
    if (lam >= 0.0) {
      st.mode_frequencies(k) = trap.omega_z * std::sqrt(lam);
    } else {
      st.mode_frequencies(k) = 0.0;
      st.imaginary_modes.push_back(k);
    }
  }
  return st;
}

Eigen::MatrixXd axial_block_matrix(const Eigen::VectorXd& z) {
  const int n = static_cast<int>(z.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double diag = 1.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const double d3 = std::pow(std::abs(z(i) - z(j)), 3);
      diag += 2.0 / d3;
      a(i, j) = -2.0 / d3;
    }
    a(i, i) = diag;
  }
  return a;
}

Eigen::MatrixXd transverse_block_matrix(const Eigen::VectorXd& z, double alpha) {
  const int n = static_cast<int>(z.size());
  const Eigen::MatrixXd a = axial_block_matrix(z);
  return (1.0 / alpha + 0.5) * Eigen::MatrixXd::Identity(n, n) - 0.5 * a;
}

CriticalAnisotropy critical_anisotropy(int n_ions) {
  TrapSpec trap;
  trap.chains = 1;
  trap.ions_per_chain = n_ions;
  const Eigen::MatrixXd u = solve_equilibrium(trap);
  const Eigen::MatrixXd a = axial_block_matrix(u.col(2));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  CriticalAnisotropy c;
  c.lambda_max = es.eigenvalues().maxCoeff();
  c.alpha_crit = 2.0 / (c.lambda_max - 1.0);
  c.alpha_power_law = 2.53 * std::pow(static_cast<double>(n_ions), -1.73);
  return c;
}

ZigzagFrequency zigzag_frequency(const TrapSpec& trap) {
  ZigzagFrequency zf;
  if (trap.chains == 1) {
    const Eigen::MatrixXd u = solve_equilibrium(trap);
    const Eigen::MatrixXd a = axial_block_matrix(u.col(2));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
    const double nu2 = 1.0 / trap.alpha_x + 0.5 - 0.5 * es.eigenvalues().maxCoeff();
    if (nu2 <= 0.0) {
      zf.soft = true;
      return zf;
    }
    zf.omega = trap.omega_z * std::sqrt(nu2);
    return zf;
  }
  // Double chain: lowest transverse-dominated mode of the full spectrum.
  const CrystalState st = normal_modes(trap);
  const int m = trap.total_ions();
  for (int k = static_cast<int>(st.mode_frequencies.size()) - 1; k >= 0; --k) {
    const double x_weight = st.mode_vectors.col(k).head(m).squaredNorm();
    if (x_weight < 0.5) continue;
    if (st.mode_eigenvalues(k) <= 0.0) {
      zf.soft = true;
      return zf;
    }
    zf.omega = st.mode_frequencies(k);
    return zf;
  }
  throw std::runtime_error("no transverse-dominated mode found");
}

StabilityReport stability(const TrapSpec& trap) {
  const CrystalState st = normal_modes(trap);
  StabilityReport r;
  r.min_eigenvalue = st.mode_eigenvalues.minCoeff();
  r.unstable_count = static_cast<int>(st.imaginary_modes.size());
  r.stable = r.unstable_count == 0;
  r.min_frequency = r.stable ? st.mode_frequencies(st.mode_frequencies.size() - 1) : 0.0;
  return r;
}

}  // namespace magic
