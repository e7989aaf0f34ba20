// Physical constants (CODATA 2018) and ion-species data used throughout the
// library.  All values are SI.
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace magic {

namespace constants {

inline constexpr double pi = 3.14159265358979323846;

// CODATA 2018 exact / recommended values.
inline constexpr double elementary_charge = 1.602176634e-19;   // C
inline constexpr double hbar             = 1.054571817e-34;    // J s
inline constexpr double epsilon0         = 8.8541878128e-12;   // F/m
inline constexpr double mu0              = 1.25663706212e-6;   // N/A^2
inline constexpr double bohr_magneton    = 9.2740100783e-24;   // J/T
inline constexpr double atomic_mass_unit = 1.66053906660e-27;  // kg
inline constexpr double electron_mass    = 9.1093837015e-31;   // kg

// Coulomb prefactor q^2/(4 pi eps0) for two elementary charges, J m.
inline constexpr double coulomb_q2 =
    elementary_charge * elementary_charge / (4.0 * pi * epsilon0);

}  // namespace constants

/// Ion species: mass, charge and the Lande g-factor of the Zeeman qubit
/// states.  The g-factor enters the spin-dependent force as g * mu_B * b / 2
/// per unit of the Pauli operator.
struct IonSpecies {
  std::string name;
  double mass_kg = 0.0;
  double charge_c = constants::elementary_charge;
  double lande_g = 2.0;
};

/// 40Ca+ ground-state Zeeman qubit (S_1/2, g ~= 2).  Mass is the neutral
/// 40Ca atomic mass minus one electron.
inline IonSpecies ca40_ion() {
  IonSpecies s;
  s.name = "Ca40+";
  s.mass_kg = 39.962590863 * constants::atomic_mass_unit - constants::electron_mass;
  s.charge_c = constants::elementary_charge;
  s.lande_g = 2.0;
  return s;
}

/// Look up a species by name ("Ca40+" is the only builtin).
inline IonSpecies species_by_name(const std::string& name) {
  if (name == "Ca40+" || name == "ca40+" || name == "40Ca+") return ca40_ion();
  throw std::invalid_argument("unknown ion species: " + name);
}

/// Characteristic length l of a Coulomb crystal: l^3 = q^2/(4 pi eps0 m wz^2).
/// Positions in the dimensionless model are measured in units of l, energies
/// in units of m wz^2 l^2.
inline double scale_length(const IonSpecies& s, double omega_z) {
  const double q2 = s.charge_c * s.charge_c / (4.0 * constants::pi * constants::epsilon0);
  return std::cbrt(q2 / (s.mass_kg * omega_z * omega_z));
}

}  // namespace magic
