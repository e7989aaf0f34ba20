// Equilibrium structure and normal modes of linear ion crystals in a
// (possibly double-well) harmonic trap.
//
// The crystal is described in dimensionless units: lengths in the scale
// length l (l^3 = q^2/(4 pi eps0 m wz^2)), energies in m wz^2 l^2, so the
// potential of N ions at positions u_n reads
//
//   V = sum_n sum_i u_{n,i}^2 / (2 alpha_i)  +  sum_{n<m} 1/|u_n - u_m|
//
// with alpha_z = 1 and alpha_{x,y} = wz^2/w_{x,y}^2.  For a two-chain
// crystal the second chain sits in a transverse well displaced by the
// chain separation d, i.e. its x-term is (x - d)^2/(2 alpha_x), and its
// axial well may be shifted by s along z.
#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "magic/constants.hpp"

namespace magic {

/// Static trap description.  Frequencies are angular (rad/s); the
/// anisotropies alpha_i = wz^2/w_i^2 are derived quantities exposed through
/// helpers so callers can specify either.
struct TrapSpec {
  IonSpecies species = ca40_ion();
  double omega_z = 2.0 * constants::pi * 310e3;  // axial angular frequency
  double alpha_x = 0.01;                         // wz^2/wx^2
  double alpha_y = 0.01;                         // wz^2/wy^2
  int chains = 1;                                // 1 or 2
  int ions_per_chain = 10;
  double chain_separation_m = 0.0;  // distance d between the two wells (x)
  double axial_shift_m = 0.0;       // axial offset s of chain 2's well (z)

  int total_ions() const { return chains * ions_per_chain; }
  double omega_x() const { return omega_z / std::sqrt(alpha_x); }
  double omega_y() const { return omega_z / std::sqrt(alpha_y); }
  void set_omega_x(double wx) { alpha_x = (omega_z / wx) * (omega_z / wx); }
  void set_omega_y(double wy) { alpha_y = (omega_z / wy) * (omega_z / wy); }
};

/// Result of an equilibrium + normal-mode computation.
///
/// Layout conventions used everywhere in this library:
///  - ions are indexed chain-major: ions 0..N-1 form chain 1,
///    ions N..2N-1 form chain 2;
///  - 3N coordinates are ordered (x_0..x_{M-1}, y_0..y_{M-1}, z_0..z_{M-1})
///    for M = total ions;
///  - modes are sorted by descending frequency.
struct CrystalState {
  TrapSpec trap;
  double scale_length_m = 0.0;         // l
  Eigen::MatrixXd positions;           // M x 3, units of l
  Eigen::MatrixXd hessian;             // 3M x 3M, units of m wz^2
  Eigen::VectorXd mode_eigenvalues;    // lambda, descending (units of m wz^2)
  Eigen::VectorXd mode_frequencies;    // omega_k = wz sqrt(lambda), rad/s
  Eigen::MatrixXd mode_vectors;        // 3M x 3M, column k <-> frequency k
  std::vector<int> imaginary_modes;    // indices with lambda < 0 (freq stored as 0)

  bool stable() const { return imaginary_modes.empty(); }
};

/// Linear-stability summary for a trap configuration.
struct StabilityReport {
  bool stable = false;
  double min_eigenvalue = 0.0;     // smallest Hessian eigenvalue, m wz^2
  double min_frequency = 0.0;      // corresponding mode frequency (rad/s; 0 if unstable)
  int unstable_count = 0;          // number of negative eigenvalues
};

/// Dimensionless potential energy of the configuration `u` (M x 3, units of
/// l).  Wells follow the chain-major convention of CrystalState.
double potential_energy(const TrapSpec& trap, const Eigen::MatrixXd& u);

/// Gradient of potential_energy with respect to all 3M coordinates,
/// ordered (x..., y..., z...).
Eigen::VectorXd potential_gradient(const TrapSpec& trap, const Eigen::MatrixXd& u);

/// Find the equilibrium configuration by damped Newton iteration on the
/// gradient, starting from equally spaced chains spanning 2 N^0.56 scale
/// lengths.  Converges to |grad| < tol (dimensionless).  Throws
/// std::runtime_error if the iteration fails to converge.
Eigen::MatrixXd solve_equilibrium(const TrapSpec& trap, double tol = 1e-10,
                                  int max_iter = 200);

/// Analytic Hessian of the dimensionless potential at configuration `u`,
/// 3M x 3M in the (x..., y..., z...) coordinate order.
Eigen::MatrixXd hessian(const TrapSpec& trap, const Eigen::MatrixXd& u);

/// Equilibrium + Hessian + eigendecomposition in one call.  Negative
/// eigenvalues are flagged in `imaginary_modes` (their entry in
/// mode_frequencies is 0), never silently clamped.
CrystalState normal_modes(const TrapSpec& trap);

/// Axial (z-z) block of the Hessian of a single linear chain at its
/// equilibrium: A_nn = 1 + 2 sum_{m!=n} 1/|z_n - z_m|^3,
/// A_nm = -2/|z_n - z_m|^3.  Units of m wz^2.
Eigen::MatrixXd axial_block_matrix(const Eigen::VectorXd& z);

/// Transverse block B^i = (1/alpha_i + 1/2) I - A/2 for a single chain.
Eigen::MatrixXd transverse_block_matrix(const Eigen::VectorXd& z, double alpha);

/// Critical transverse anisotropy of a single N-ion chain: the zigzag mode
/// softens at alpha_crit = 2/(lambda_max(A) - 1).  Also returns the
/// power-law estimate 2.53 N^{-1.73} for comparison.
struct CriticalAnisotropy {
  double alpha_crit = 0.0;        // from the exact A-matrix spectrum
  double alpha_power_law = 0.0;   // 2.53 N^{-1.73}
  double lambda_max = 0.0;        // largest eigenvalue of A
};
CriticalAnisotropy critical_anisotropy(int n_ions);

/// Frequency of the lowest transverse (zigzag) mode of a single chain at
/// anisotropy alpha, in rad/s: nu = wz sqrt(1/alpha + 1/2 - lambda_max(A)/2).
/// Returns 0 with `soft=true` if the mode has gone unstable.
struct ZigzagFrequency {
  double omega = 0.0;  // rad/s
  bool soft = false;   // true if the squared frequency is negative
};
ZigzagFrequency zigzag_frequency(const TrapSpec& trap);

/// Stability of the full crystal (all 3M modes) for the given trap.
StabilityReport stability(const TrapSpec& trap);

}  // namespace magic
