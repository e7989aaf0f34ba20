// Magnetostatics of chip-trap current geometries (finite straight segments
// and thin current sheets, evaluated with the Biot-Savart law) plus the
// Mathieu stability analysis that yields secular trap frequencies.
#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

namespace magic {

using Vec3 = Eigen::Vector3d;

/// One straight, finite current segment from a to b carrying `current`
/// (amperes, sign sets direction a -> b).  Coordinates in meters.
struct Segment {
  Vec3 a = Vec3::Zero();
  Vec3 b = Vec3::Zero();
  double current = 0.0;
};

/// A flat rectangular sheet of uniform surface current, modelled as
/// `filament_count` equal-current parallel filaments.  The corners must
/// form a planar rectangle a,b,c,d in circulation order; current flows
/// parallel to the edge a->b and the sheet spans the width a->d.
struct Sheet {
  std::array<Vec3, 4> corners{};
  double current = 0.0;      // total current through the cross-section, A
  int filament_count = 40;   // discretisation of the width
};

/// A circuit is any collection of segments and sheets; superposition of
/// their fields gives the total field.
struct CircuitGeometry {
  std::vector<Segment> segments;
  std::vector<Sheet> sheets;
};

/// Magnetic field (tesla) of the circuit at point p (meters).
Vec3 field_at(const CircuitGeometry& g, const Vec3& p);

/// Gradient of the field magnitude |B| at p, central finite differences
/// with step 1e-7 m.  Throws std::domain_error at a field null (|B| = 0),
/// where the gradient of the magnitude is undefined.
Vec3 gradient_of_magnitude(const CircuitGeometry& g, const Vec3& p,
                           double step_m = 1e-7);

/// |B| and d|B|/dx_i sampled along a straight line from p0 to p1.
struct GradientProfile {
  std::vector<Vec3> points;       // sample positions, m
  std::vector<double> magnitude;  // |B|, T
  std::vector<Vec3> gradient;     // grad|B|, T/m
};
GradientProfile gradient_profile(const CircuitGeometry& g, const Vec3& p0,
                                 const Vec3& p1, int samples);

/// Dimensionless Mathieu matrices of an rf trap: the ion's equation of
/// motion in the rf phase tau = Omega t / 2 is
///   u'' + [A + 2 Q cos(2 tau)] u = 0.
/// Both matrices are traceless for a potential obeying Laplace's equation
/// (checked to 1e-9 on construction of secular frequencies).
struct MathieuMatrices {
  Eigen::Matrix3d a = Eigen::Matrix3d::Zero();
  Eigen::Matrix3d q = Eigen::Matrix3d::Zero();
};

/// Secular frequencies from the lowest-order Mathieu formula
///   kappa_i = sqrt(a_ii + q_ii^2/2),   omega_i = kappa_i Omega / 2.
/// Requires both matrices diagonal (off-diagonal elements below `tol`
/// relative to the largest diagonal entry); otherwise throws
/// std::invalid_argument asking for principal-axis form.  `accuracy_warning`
/// is set when |a_ii| or q_ii^2 exceed 0.1, where the lowest-order formula
/// degrades.
struct SecularFrequencies {
  std::array<double, 3> omega{};  // rad/s
  std::array<double, 3> kappa{};  // dimensionless characteristic exponents
  bool accuracy_warning = false;
};
SecularFrequencies secular_frequencies(const MathieuMatrices& m, double omega_rf,
                                       double tol = 1e-9);

/// Built-in geometry: the double-loop gradient chip.  Two concentric
/// square-ish current loops (inner conductor W1 with a central hole it must
/// detour around, outer conductor W2), each w = 100 um wide, separated by
/// 3 um insulation gaps, carrying currents i1 and i2.  The ion sits above
/// the gap between the conductors; the returned geometry is truncated to
/// +-5 mm axially.  `filaments` controls the sheet discretisation.
CircuitGeometry double_loop_chip(double i1_a, double i2_a, int filaments = 40);

/// Built-in geometry: U-shaped single-wire chip approximated by two
/// anti-parallel current strips of width 400 um whose centers are 500 um
/// apart, at the current density quoted for the loop chip (4e6 A/cm^2
/// over a 1.9 um metal layer -> 30.4 A per strip).
CircuitGeometry u_chip(double current_a = 30.4, int filaments = 40);

/// Load a circuit from a JSON file with top-level arrays "segments"
/// (objects {a, b, current_a}) and "sheets" (objects {corners, current_a,
/// filament_count}), coordinates in meters.  Throws std::runtime_error with
/// a description of the offending entry on malformed input.
CircuitGeometry load_circuit(const std::string& path);

}  // namespace magic
