// Magnetic-gradient-induced spin-spin coupling matrices.
//
// A static field gradient b along direction e makes the ions' Zeemann
// splitting position dependent, which couples the spins through the shared
// motional modes.  Adiabatic elimination of the phonons gives the Ising
// couplings
//
//   J_{nm} = (hbar/2) (d omega / d u)_n (d omega / d u)_m [K^{-1}]_{nm}
//
// where d omega/d u = g mu_B b / hbar is the Zeeman-frequency gradient and
// K is the Hessian block of the driven direction (axial: the A matrix,
// transverse: B^x, two-chain: the x- or z-block of the full x-z inverse).
#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "magic/crystal.hpp"

namespace magic {

/// Per-ion magnetic environment entering the spin-dependent force.
/// `gradient_t_per_m` is the gradient of |B| along the driven coordinate at
/// each ion (a single value broadcasts to all ions).
struct GradientSpec {
  Eigen::VectorXd gradient_t_per_m;  // size M, or size 1 to broadcast
  double lande_g = 2.0;

  static GradientSpec uniform(double b, double g = 2.0) {
    GradientSpec s;
    s.gradient_t_per_m = Eigen::VectorXd::Constant(1, b);
    s.lande_g = g;
    return s;
  }
};

/// Zeeman frequency gradient d omega/d u = g mu_B b / hbar per ion, rad/(s m).
Eigen::VectorXd zeeman_gradient(const GradientSpec& grad, int n_ions);

/// Spin-spin coupling matrix (units: rad/s, symmetric, zero diagonal).
struct CouplingMatrix {
  Eigen::MatrixXd j_rad_s;        // M x M
  double condition_number = 0.0;  // of the inverted Hessian block
};

/// General coupling through an arbitrary stiffness block K (units m wz^2,
/// dimensionless positions in l): J = (hbar/2) f_n f_m [K_SI^{-1}]_{nm}
/// with K_SI = m wz^2 K.  Throws std::runtime_error naming the softest mode
/// when cond(K) exceeds `condition_limit`.
CouplingMatrix coupling_general(const Eigen::MatrixXd& k_block,
                                const Eigen::VectorXd& zeeman_grad,
                                const TrapSpec& trap,
                                double condition_limit = 1e12);

/// Axial coupling of a single chain: K = A(z).
CouplingMatrix coupling_axial(const TrapSpec& trap, const GradientSpec& grad,
                              double condition_limit = 1e12);

/// Transverse coupling of a single chain: K = B^x(z, alpha_x).
CouplingMatrix coupling_transverse(const TrapSpec& trap, const GradientSpec& grad,
                                   double condition_limit = 1e12);

/// Two-chain coupling: invert the full x-z Hessian of the double chain and
/// project out the block of the driven direction.
enum class Direction { x, z };
struct TwoChainCoupling {
  CouplingMatrix coupling;
  Eigen::MatrixXd positions;   // equilibrium (M x 3, units of l)
  // Block summary (chain-major index split at N):
  double max_intra_rad_s = 0.0;   // max |J| within a chain
  double max_inter_rad_s = 0.0;   // max |J| between chains
  int intra_sign = 0;             // sign of the dominant intra-chain entry
  int inter_sign = 0;             // sign of the dominant inter-chain entry
};
TwoChainCoupling coupling_two_chain(const TrapSpec& trap, const GradientSpec& grad,
                                    Direction dir, double condition_limit = 1e12);

/// Classical response of the normal modes to spin-dependent oscillating
/// forces.  Each drive applies F_n(t) = amplitude_scale * f_n sin(omega t)
/// with f_n the static spin-pattern force (zeeman gradient force * hbar/2
/// * pattern_n), projected on each mode.  The solution with ions starting
/// at rest is, per mode k and drive frequency w:
///   Q_k(t) = (F_k/m) [sin(w t) - (w/w_k) sin(w_k t)] / (w_k^2 - w^2)
/// and exactly on resonance (|w - w_k| < resonance_tol * w_k)
///   Q_k(t) = (F_k/m) [sin(w_k t) - w_k t cos(w_k t)] / (2 w_k^2),
/// which grows linearly and is flagged.
struct Drive {
  double omega = 0.0;            // rad/s
  double amplitude_scale = 1.0;  // multiplies the spin-pattern force
};
struct ModeResponse {
  Eigen::VectorXd times;               // s
  Eigen::MatrixXd mode_amplitude_m;    // times x modes, meters (mass-weighted coords / sqrt(m))
  Eigen::MatrixXd ion_displacement_m;  // times x 3M, reconstructed Cartesian
  std::vector<int> resonant_modes;     // flagged linear-growth modes
};
ModeResponse driven_mode_response(const CrystalState& state,
                                  const GradientSpec& grad,
                                  const std::vector<int>& spin_pattern,
                                  Direction dir, const std::vector<Drive>& drives,
                                  double duration_s, int samples,
                                  double resonance_tol = 1e-9);

}  // namespace magic
