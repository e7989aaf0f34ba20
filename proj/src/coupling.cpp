#include "magic/coupling.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace magic {

Eigen::VectorXd zeeman_gradient(const GradientSpec& grad, int n_ions) {
  Eigen::VectorXd b;
  if (grad.gradient_t_per_m.size() == 1) {
    b = Eigen::VectorXd::Constant(n_ions, grad.gradient_t_per_m(0));
  } else if (grad.gradient_t_per_m.size() == n_ions) {
    b = grad.gradient_t_per_m;
  } else {
    throw std::invalid_argument("gradient must have 1 entry or one per ion");
  }
  return grad.lande_g * constants::bohr_magneton / constants::hbar * b;
}

CouplingMatrix coupling_general(const Eigen::MatrixXd& k_block,
                                const Eigen::VectorXd& zeeman_grad,
                                const TrapSpec& trap, double condition_limit) {
  const int m = static_cast<int>(k_block.rows());
  if (zeeman_grad.size() != m)
    throw std::invalid_argument("zeeman gradient size does not match stiffness block");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k_block);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("stiffness block eigendecomposition failed");
  const double lam_min = es.eigenvalues().minCoeff();
  const double lam_max = es.eigenvalues().maxCoeff();
  if (lam_min <= 0.0)
    throw std::runtime_error(
        "stiffness block is not positive definite (soft or unstable mode at "
        "eigenvalue " +
        std::to_string(lam_min) + "); crystal too close to a structural transition");
  const double cond = lam_max / lam_min;
  if (cond > condition_limit) {
    int soft = 0;
    es.eigenvalues().minCoeff(&soft);
    const double nu_soft = trap.omega_z * std::sqrt(lam_min) / (2.0 * constants::pi);
    throw std::runtime_error(
        "stiffness block condition number " + std::to_string(cond) +
        " exceeds limit; softest mode #" + std::to_string(soft) + " at " +
        std::to_string(nu_soft) + " Hz dominates and the adiabatic coupling "
        "picture breaks down");
  }

  // J_{nm} = (hbar/2) f_n f_m [K^{-1}]_{nm} / (m wz^2) with K dimensionless.
  const Eigen::MatrixXd kinv =
      es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() *
      es.eigenvectors().transpose();
  const double mass_wz2 = trap.species.mass_kg * trap.omega_z * trap.omega_z;
  CouplingMatrix out;
  out.condition_number = cond;
  out.j_rad_s = 0.5 * constants::hbar / mass_wz2 *
                (zeeman_grad * zeeman_grad.transpose()).cwiseProduct(kinv);
  out.j_rad_s.diagonal().setZero();  // self-coupling is a phase, not an interaction
  out.j_rad_s = 0.5 * (out.j_rad_s + out.j_rad_s.transpose()).eval();
  return out;
}

namespace {

// The axial block of a linear chain stays positive definite even past the
// zigzag transition, so structural stability must be checked on the
// transverse sectors: couplings evaluated at a saddle point of the potential
// describe a configuration the crystal does not occupy.
void require_transverse_stability(const Eigen::VectorXd& z, const TrapSpec& trap) {
  for (const double alpha : {trap.alpha_x, trap.alpha_y}) {
    const Eigen::MatrixXd b = transverse_block_matrix(z, alpha);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b);
    if (es.info() != Eigen::Success)
      throw std::runtime_error("transverse block eigendecomposition failed");
    if (es.eigenvalues()(0) <= 0.0)
      throw std::runtime_error(
          "linear chain is transversally unstable at this anisotropy "
          "(past the zigzag transition)");
  }
}

}  // namespace

CouplingMatrix coupling_axial(const TrapSpec& trap, const GradientSpec& grad,
                              double condition_limit) {
  if (trap.chains != 1)
    throw std::invalid_argument("coupling_axial expects a single chain");
  const Eigen::MatrixXd u = solve_equilibrium(trap);
  require_transverse_stability(u.col(2), trap);
  const Eigen::MatrixXd a = axial_block_matrix(u.col(2));
  return coupling_general(a, zeeman_gradient(grad, trap.total_ions()), trap,
                          condition_limit);
}

CouplingMatrix coupling_transverse(const TrapSpec& trap, const GradientSpec& grad,
                                   double condition_limit) {
  if (trap.chains != 1)
    throw std::invalid_argument("coupling_transverse expects a single chain");
  const Eigen::MatrixXd u = solve_equilibrium(trap);
  require_transverse_stability(u.col(2), trap);
  const Eigen::MatrixXd b = transverse_block_matrix(u.col(2), trap.alpha_x);
  return coupling_general(b, zeeman_gradient(grad, trap.total_ions()), trap,
                          condition_limit);
}

namespace {

// Classify the extremal entries of a two-chain J matrix (chain-major split
// at n_per_chain).
void block_summary(const Eigen::MatrixXd& j, int n_per_chain, TwoChainCoupling& out) {
  const int m = static_cast<int>(j.rows());
  for (int n = 0; n < m; ++n) {
    for (int k = n + 1; k < m; ++k) {
      const bool same = (n < n_per_chain) == (k < n_per_chain);
      const double a = std::abs(j(n, k));
      if (same && a > out.max_intra_rad_s) {
        out.max_intra_rad_s = a;
        out.intra_sign = j(n, k) > 0 ? 1 : -1;
      }
      if (!same && a > out.max_inter_rad_s) {
        out.max_inter_rad_s = a;
        out.inter_sign = j(n, k) > 0 ? 1 : -1;
      }
    }
  }
}

}  // namespace

TwoChainCoupling coupling_two_chain(const TrapSpec& trap, const GradientSpec& grad,
                                    Direction dir, double condition_limit) {
  if (trap.chains != 2)
    throw std::invalid_argument("coupling_two_chain expects chains = 2");
  const int m = trap.total_ions();
  const Eigen::MatrixXd u = solve_equilibrium(trap);
  const Eigen::MatrixXd h = hessian(trap, u);

  // Work in the coupled x-z subspace; y separates and does not mix with the
  // driven direction for a planar crystal.
  Eigen::MatrixXd hxz(2 * m, 2 * m);
  hxz.topLeftCorner(m, m) = h.topLeftCorner(m, m);
  hxz.topRightCorner(m, m) = h.block(0, 2 * m, m, m);
  hxz.bottomLeftCorner(m, m) = h.block(2 * m, 0, m, m);
  hxz.bottomRightCorner(m, m) = h.block(2 * m, 2 * m, m, m);

  // Invert the full x-z stiffness, then read off the block of the driven
  // direction: displacements in x and z stay coupled through the inverse.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hxz);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("two-chain Hessian eigendecomposition failed");
  const double lam_min = es.eigenvalues().minCoeff();
  const double lam_max = es.eigenvalues().maxCoeff();
  if (lam_min <= 0.0)
    throw std::runtime_error("two-chain crystal is structurally unstable here");
  const double cond = lam_max / lam_min;
  if (cond > condition_limit)
    throw std::runtime_error("two-chain stiffness condition number " +
                             std::to_string(cond) + " exceeds limit near the "
                             "structural transition");
  const Eigen::MatrixXd inv = es.eigenvectors() *
                              es.eigenvalues().cwiseInverse().asDiagonal() *
                              es.eigenvectors().transpose();
  const int off = dir == Direction::x ? 0 : m;
  const Eigen::MatrixXd kinv_block = inv.block(off, off, m, m);

  const Eigen::VectorXd f = zeeman_gradient(grad, m);
  const double mass_wz2 = trap.species.mass_kg * trap.omega_z * trap.omega_z;
  TwoChainCoupling out;
  out.positions = u;
  out.coupling.condition_number = cond;
  out.coupling.j_rad_s = 0.5 * constants::hbar / mass_wz2 *
                         (f * f.transpose()).cwiseProduct(kinv_block);
  out.coupling.j_rad_s.diagonal().setZero();
  out.coupling.j_rad_s =
      0.5 * (out.coupling.j_rad_s + out.coupling.j_rad_s.transpose()).eval();
  block_summary(out.coupling.j_rad_s, trap.ions_per_chain, out);
  return out;
}

ModeResponse driven_mode_response(const CrystalState& state, const GradientSpec& grad,
                                  const std::vector<int>& spin_pattern, Direction dir,
                                  const std::vector<Drive>& drives, double duration_s,
                                  int samples, double resonance_tol) {
  const int m = static_cast<int>(state.positions.rows());
  const int dim = 3 * m;
  if (static_cast<int>(spin_pattern.size()) != m)
    throw std::invalid_argument("spin pattern must have one entry per ion");
  if (!state.stable())
    throw std::runtime_error("driven response requires a stable crystal");
  if (samples < 2) throw std::invalid_argument("need at least 2 samples");

  // Static spin-dependent force F_n = (hbar/2) s_n (d omega/d u)_n along the
  // driven direction, in newtons.
  const Eigen::VectorXd f_ion = zeeman_gradient(grad, m);
  Eigen::VectorXd force = Eigen::VectorXd::Zero(dim);
  const int off = dir == Direction::x ? 0 : 2 * m;
  for (int n = 0; n < m; ++n)
    force(off + n) = 0.5 * constants::hbar * spin_pattern[n] * f_ion(n);

  const double mass = state.trap.species.mass_kg;
  ModeResponse resp;
  resp.times = Eigen::VectorXd::LinSpaced(samples, 0.0, duration_s);
  resp.mode_amplitude_m = Eigen::MatrixXd::Zero(samples, dim);
  resp.ion_displacement_m = Eigen::MatrixXd::Zero(samples, dim);

  for (int k = 0; k < dim; ++k) {
    const double wk = state.mode_frequencies(k);
    const double fk = state.mode_vectors.col(k).dot(force);
    if (wk <= 0.0) continue;  // zero modes cannot occur in a confined trap
    for (const auto& drv : drives) {
      const double w = drv.omega;
      const double amp = drv.amplitude_scale * fk / mass;
      const bool resonant = std::abs(w - wk) <= resonance_tol * wk;
      if (resonant) resp.resonant_modes.push_back(k);
      for (int i = 0; i < samples; ++i) {
        const double t = resp.times(i);
        double q;
        if (resonant) {
          // Secular solution: amplitude grows linearly with time.
          q = amp * (std::sin(wk * t) - wk * t * std::cos(wk * t)) / (2.0 * wk * wk);
        } else {
          q = amp * (std::sin(w * t) - (w / wk) * std::sin(wk * t)) /
              (wk * wk - w * w);
        }
        resp.mode_amplitude_m(i, k) += q;
      }
    }
  }
  resp.ion_displacement_m = resp.mode_amplitude_m * state.mode_vectors.transpose();
  return resp;
}

}  // namespace magic
