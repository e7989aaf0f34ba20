// Config parsing and artifact serialization for the command-line tools.
//
// Configs are JSON with SI-unit-suffixed keys (omega_z_hz, d_m, b_t_per_m).
// Trap frequencies may be given as ordinary frequencies (..._hz) or as
// anisotropies alpha_i = wz^2/w_i^2; the resolved config echoed into every
// artifact always carries both.  All floating-point output is rounded to 12
// significant digits so identical inputs produce byte-identical artifacts.
#pragma once

#include <json.hpp>
#include <optional>
#include <stdexcept>
#include <string>

#include "magic/coupling.hpp"
#include "magic/crystal.hpp"
#include "magic/magnetics.hpp"

namespace magic {

using Json = nlohmann::ordered_json;

/// Invalid or inconsistent user input (config file, CLI value).  The CLI
/// maps this to exit code 2; any other exception maps to 3.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Round to `digits` significant decimal digits (keeps 0, inf, nan as-is).
double round_sig(double x, int digits = 12);

/// Recursively round every number in a JSON document to 12 significant
/// digits; returns the sanitized copy.
Json sanitize_numbers(const Json& j);

/// Dense matrix as row-major nested JSON arrays.
Json matrix_to_json(const Eigen::MatrixXd& m);

/// Parse the "trap" object.  Accepts each transverse confinement as either
/// "alpha_x"/"alpha_y" or "omega_x_hz"/"omega_y_hz" (error if both given and
/// inconsistent).  Throws ConfigError on missing/invalid keys.
TrapSpec trap_from_json(const Json& trap);

/// Resolved echo of a trap: emits both the anisotropies and the ordinary
/// frequencies, plus geometry.
Json trap_to_json(const TrapSpec& t);

/// Parse the "gradient" object: either a uniform {"b_t_per_m": value} or a
/// per-ion array, with optional "lande_g".
GradientSpec gradient_from_json(const Json& grad, int n_ions);
Json gradient_to_json(const GradientSpec& g);

/// One-dimensional parameter scan start:stop:steps over a config key.
struct ScanSpec {
  std::string key;  // e.g. "alpha_x", "trap.d_m", "gradient.b_t_per_m"
  double start = 0.0;
  double stop = 0.0;
  int steps = 0;
};

/// Parse "key=start:stop:steps" (steps = number of points, >= 1).
ScanSpec parse_scan(const std::string& text);

/// Value of the scan at point i (linear spacing; steps==1 gives start).
double scan_value(const ScanSpec& s, int i);

/// Apply a scan key to a config document.  Bare keys resolve into "trap"
/// ("alpha_x", "omega_z_hz", "d_m", ...) or "gradient" ("b_t_per_m");
/// dotted keys ("trap.alpha_x") address explicitly.  ConfigError on unknown
/// keys.
void apply_config_value(Json& config, const std::string& key, double value);

/// Read and parse a JSON file; ConfigError on I/O or syntax problems.
Json load_json(const std::string& path);

}  // namespace magic
