#include "magic/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

namespace magic {

double round_sig(double x, int digits) {
  if (x == 0.0 || !std::isfinite(x)) return x;
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*e", digits - 1, x);
  return std::strtod(buf, nullptr);
}

Json sanitize_numbers(const Json& j) {
  if (j.is_number_float()) return round_sig(j.get<double>());
  if (j.is_object()) {
    Json out = Json::object();
    for (const auto& [k, v] : j.items()) out[k] = sanitize_numbers(v);
    return out;
  }
  if (j.is_array()) {
    Json out = Json::array();
    for (const auto& v : j) out.push_back(sanitize_numbers(v));
    return out;
  }
  return j;
}

Json matrix_to_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

namespace {

double require_number(const Json& j, const std::string& key) {
  if (!j.contains(key) || !j[key].is_number())
    throw ConfigError("config key '" + key + "' missing or not a number");
  return j[key].get<double>();
}

// Resolve one transverse confinement from either alpha or an ordinary
// frequency in Hz; error if both are present but disagree.
double resolve_alpha(const Json& trap, const std::string& alpha_key,
                     const std::string& hz_key, double omega_z) {
  const bool has_alpha = trap.contains(alpha_key);
  const bool has_hz = trap.contains(hz_key);
  if (!has_alpha && !has_hz)
    throw ConfigError("trap needs '" + alpha_key + "' or '" + hz_key + "'");
  double alpha = 0.0;
  if (has_alpha) {
    alpha = require_number(trap, alpha_key);
    if (alpha <= 0.0) throw ConfigError("'" + alpha_key + "' must be positive");
  }
  if (has_hz) {
    const double w = 2.0 * constants::pi * require_number(trap, hz_key);
    if (w <= 0.0) throw ConfigError("'" + hz_key + "' must be positive");
    const double from_hz = (omega_z / w) * (omega_z / w);
    if (has_alpha && std::abs(from_hz - alpha) > 1e-6 * alpha)
      throw ConfigError("'" + alpha_key + "' and '" + hz_key + "' disagree");
    alpha = from_hz;
  }
  return alpha;
}

}  // namespace

TrapSpec trap_from_json(const Json& trap) {
  if (!trap.is_object()) throw ConfigError("'trap' must be an object");
  TrapSpec t;
  if (trap.contains("species")) {
    try {
      t.species = species_by_name(trap["species"].get<std::string>());
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
  }
  t.omega_z = 2.0 * constants::pi * require_number(trap, "omega_z_hz");
  if (t.omega_z <= 0.0) throw ConfigError("'omega_z_hz' must be positive");
  t.alpha_x = resolve_alpha(trap, "alpha_x", "omega_x_hz", t.omega_z);
  t.alpha_y = resolve_alpha(trap, "alpha_y", "omega_y_hz", t.omega_z);
  t.chains = trap.value("chains", 1);
  if (t.chains != 1 && t.chains != 2) throw ConfigError("'chains' must be 1 or 2");
  if (!trap.contains("ions_per_chain")) throw ConfigError("trap needs 'ions_per_chain'");
  t.ions_per_chain = trap["ions_per_chain"].get<int>();
  if (t.ions_per_chain < 1) throw ConfigError("'ions_per_chain' must be >= 1");
  if (t.chains == 2) {
    t.chain_separation_m = require_number(trap, "d_m");
    if (t.chain_separation_m <= 0.0) throw ConfigError("'d_m' must be positive");
    t.axial_shift_m = trap.value("axial_shift_m", 0.0);
  }
  return t;
}

Json trap_to_json(const TrapSpec& t) {
  Json j;
  j["species"] = t.species.name;
  j["omega_z_hz"] = t.omega_z / (2.0 * constants::pi);
  j["omega_x_hz"] = t.omega_x() / (2.0 * constants::pi);
  j["omega_y_hz"] = t.omega_y() / (2.0 * constants::pi);
  j["alpha_x"] = t.alpha_x;
  j["alpha_y"] = t.alpha_y;
  j["chains"] = t.chains;
  j["ions_per_chain"] = t.ions_per_chain;
  if (t.chains == 2) {
    j["d_m"] = t.chain_separation_m;
    j["axial_shift_m"] = t.axial_shift_m;
  }
  return j;
}

GradientSpec gradient_from_json(const Json& grad, int n_ions) {
  if (!grad.is_object()) throw ConfigError("'gradient' must be an object");
  GradientSpec g;
  if (!grad.contains("b_t_per_m")) throw ConfigError("gradient needs 'b_t_per_m'");
  const Json& b = grad["b_t_per_m"];
  if (b.is_number()) {
    g.gradient_t_per_m = Eigen::VectorXd::Constant(1, b.get<double>());
  } else if (b.is_array()) {
    if (static_cast<int>(b.size()) != n_ions)
      throw ConfigError("'b_t_per_m' array must have one entry per ion (" +
                        std::to_string(n_ions) + ")");
    g.gradient_t_per_m.resize(n_ions);
    for (int i = 0; i < n_ions; ++i) g.gradient_t_per_m(i) = b[i].get<double>();
  } else {
    throw ConfigError("'b_t_per_m' must be a number or an array");
  }
  g.lande_g = grad.value("lande_g", 2.0);
  if (g.lande_g <= 0.0) throw ConfigError("'lande_g' must be positive");
  return g;
}

Json gradient_to_json(const GradientSpec& g) {
  Json j;
  if (g.gradient_t_per_m.size() == 1) {
    j["b_t_per_m"] = g.gradient_t_per_m(0);
  } else {
    Json arr = Json::array();
    for (Eigen::Index i = 0; i < g.gradient_t_per_m.size(); ++i)
      arr.push_back(g.gradient_t_per_m(i));
    j["b_t_per_m"] = arr;
  }
  j["lande_g"] = g.lande_g;
  return j;
}

ScanSpec parse_scan(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos)
    throw ConfigError("scan must look like key=start:stop:steps");
  ScanSpec s;
  s.key = text.substr(0, eq);
  const std::string rest = text.substr(eq + 1);
  const auto c1 = rest.find(':');
  const auto c2 = rest.find(':', c1 == std::string::npos ? 0 : c1 + 1);
  if (s.key.empty() || c1 == std::string::npos || c2 == std::string::npos)
    throw ConfigError("scan must look like key=start:stop:steps");
  try {
    size_t used = 0;
    s.start = std::stod(rest.substr(0, c1), &used);
    s.stop = std::stod(rest.substr(c1 + 1, c2 - c1 - 1), &used);
    s.steps = std::stoi(rest.substr(c2 + 1), &used);
  } catch (const std::exception&) {
    throw ConfigError("scan values must be numeric: " + text);
  }
  if (s.steps < 1) throw ConfigError("scan steps must be >= 1");
  return s;
}

double scan_value(const ScanSpec& s, int i) {
  if (s.steps == 1) return s.start;
  return s.start + (s.stop - s.start) * static_cast<double>(i) / (s.steps - 1);
}

void apply_config_value(Json& config, const std::string& key, double value) {
  std::string section, leaf = key;
  const auto dot = key.find('.');
  if (dot != std::string::npos) {
    section = key.substr(0, dot);
    leaf = key.substr(dot + 1);
  } else {
    // Bare keys route by name: gradient magnitude to "gradient", trap
    // quantities to "trap".
    section = (leaf == "b_t_per_m") ? "gradient" : "trap";
  }
  static const char* trap_keys[] = {"omega_z_hz", "omega_x_hz", "omega_y_hz",
                                    "alpha_x",    "alpha_y",    "d_m",
                                    "axial_shift_m"};
  bool known = section == "gradient" && leaf == "b_t_per_m";
  for (const char* k : trap_keys)
    if (section == "trap" && leaf == k) known = true;
  if (!known) throw ConfigError("unknown scan key: " + key);
  if (section == "trap" && (leaf == "alpha_x" || leaf == "alpha_y")) {
    // A scanned anisotropy replaces any frequency spelling of the same axis.
    config["trap"].erase(leaf == "alpha_x" ? "omega_x_hz" : "omega_y_hz");
  }
  if (section == "trap" && (leaf == "omega_x_hz" || leaf == "omega_y_hz"))
    config["trap"].erase(leaf == "omega_x_hz" ? "alpha_x" : "alpha_y");
  config[section][leaf] = value;
}

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  try {
    Json j;
    in >> j;
    return j;
  } catch (const std::exception& e) {
    throw ConfigError("invalid JSON in " + path + ": " + e.what());
  }
}

}  // namespace magic
