// Ising-model analysis of spin-spin coupling matrices: energies, exhaustive
// ground-state search and frustration diagnostics.
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace magic {

/// Ising energy E/hbar = -(1/2) sum_{n != m} J_{nm} s_n s_m / 2
///                     = -sum_{n<m} J_{nm} s_n s_m
/// for spins s_n = +-1 and J in rad/s (so the energy is a rate, rad/s).
double ising_energy(const Eigen::MatrixXd& j_rad_s, const std::vector<int>& spins);

/// Exhaustive ground-state search over all 2^(N-1) spin configurations with
/// the global flip fixed by s_0 = +1.  Limited to N <= 26.
struct GroundState {
  std::vector<std::vector<int>> configurations;  // all degenerate minima, s_0=+1
  double energy_rad_s = 0.0;
  std::uint64_t states_visited = 0;
};
GroundState ground_state(const Eigen::MatrixXd& j_rad_s,
                         double degeneracy_tol = 1e-12);

/// Frustration diagnostics of a two-chain coupling matrix (chain-major
/// indexing, chains of equal length).  intra/inter maxima are |J|, the
/// ratio is intra/inter, and triangle_asymmetry lists, for each ion of
/// chain 1, the relative difference of its distances to the two nearest
/// ions of chain 2 (0 for a perfectly isosceles triangle; requires the
/// equilibrium positions).
struct FrustrationReport {
  double intra_max_rad_s = 0.0;
  double inter_max_rad_s = 0.0;
  double ratio = 0.0;
  int ground_degeneracy = 0;              // count of degenerate minima (s_0=+1)
  double ground_energy_rad_s = 0.0;
  std::vector<double> triangle_asymmetry;  // per chain-1 ion
};
FrustrationReport frustration_report(const Eigen::MatrixXd& j_rad_s,
                                     const Eigen::MatrixXd& positions_l,
                                     int ions_per_chain);

}  // namespace magic
