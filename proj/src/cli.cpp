#include "magic/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "magic/spin.hpp"

namespace magic::cli {

namespace {

constexpr const char* index_legend =
    "ions are chain-major (0..N-1 chain 1, N..2N-1 chain 2); coordinate "
    "vectors are ordered (x of all ions, y of all ions, z of all ions); "
    "matrices are row-major; modes are sorted by descending frequency";

void emit(const Options& opt, const std::string& text) {
  if (opt.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(opt.out_path, std::ios::binary);
  if (!out) throw ConfigError("cannot write output file: " + opt.out_path);
  out << text;
}

std::string dump_artifact(const Json& artifact) {
  return sanitize_numbers(artifact).dump(2) + "\n";
}

// Single-line JSON comment header so CSV artifacts carry their resolved
// config too.
std::string csv_header(const Json& config) {
  return "# config: " + sanitize_numbers(config).dump() + "\n";
}

std::string fmt(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12g", round_sig(x));
  return buf;
}

Direction direction_from(const Json& coupling) {
  const std::string dir = coupling.value("direction", "x");
  if (dir == "x") return Direction::x;
  if (dir == "z") return Direction::z;
  throw ConfigError("coupling direction must be \"x\" or \"z\"");
}

// Compute the coupling matrix the config asks for; for two chains also the
// block summary and equilibrium positions.
struct CoupleOutput {
  CouplingMatrix coupling;
  std::optional<TwoChainCoupling> two_chain;
};
CoupleOutput compute_coupling(const Json& config) {
  const TrapSpec trap = trap_from_json(config.at("trap"));
  if (!config.contains("gradient")) throw ConfigError("config needs 'gradient'");
  const GradientSpec grad = gradient_from_json(config["gradient"], trap.total_ions());
  const Json coupling_cfg = config.value("coupling", Json::object());
  const Direction dir = direction_from(coupling_cfg);
  const double climit = coupling_cfg.value("condition_limit", 1e12);
  CoupleOutput out;
  if (trap.chains == 2) {
    out.two_chain = coupling_two_chain(trap, grad, dir, climit);
    out.coupling = out.two_chain->coupling;
  } else {
    out.coupling = dir == Direction::z ? coupling_axial(trap, grad, climit)
                                       : coupling_transverse(trap, grad, climit);
  }
  return out;
}

Json resolved_config(const Json& config, const TrapSpec& trap) {
  Json echo = config;
  echo["trap"] = trap_to_json(trap);
  if (config.contains("gradient"))
    echo["gradient"] = gradient_to_json(
        gradient_from_json(config["gradient"], trap.total_ions()));
  return echo;
}

int run_guarded(const Options& opt, int (*body)(const Options&)) {
  try {
    return body(opt);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_config_error;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_config_error;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_config_error;
  } catch (const std::exception& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return exit_numerical_error;
  }
}

Json positions_json(const Eigen::MatrixXd& u) {
  Json arr = Json::array();
  for (Eigen::Index n = 0; n < u.rows(); ++n)
    arr.push_back(Json::array({u(n, 0), u(n, 1), u(n, 2)}));
  return arr;
}

int modes_body(const Options& opt) {
  Json config = load_json(opt.config_path);
  if (!config.contains("trap")) throw ConfigError("config needs 'trap'");

  if (opt.scan) {
    Json rows = Json::array();
    for (int i = 0; i < opt.scan->steps; ++i) {
      const double v = scan_value(*opt.scan, i);
      Json point = config;
      apply_config_value(point, opt.scan->key, v);
      const TrapSpec trap = trap_from_json(point["trap"]);
      const CrystalState st = normal_modes(trap);
      const ZigzagFrequency zz = zigzag_frequency(trap);
      Json row;
      row["value"] = v;
      row["lowest_mode_hz"] =
          st.stable() ? st.mode_frequencies(st.mode_frequencies.size() - 1) /
                            (2.0 * constants::pi)
                      : 0.0;
      row["zigzag_hz"] = zz.soft ? 0.0 : zz.omega / (2.0 * constants::pi);
      row["stable"] = st.stable();
      rows.push_back(row);
    }
    const TrapSpec trap = trap_from_json(config["trap"]);
    Json artifact;
    artifact["command"] = "modes";
    artifact["config"] = resolved_config(config, trap);
    artifact["scan"] = {{"key", opt.scan->key},
                        {"start", opt.scan->start},
                        {"stop", opt.scan->stop},
                        {"steps", opt.scan->steps}};
    artifact["result"] = {{"rows", rows}};
    if (opt.format == "csv") {
      std::ostringstream csv;
      csv << csv_header(artifact["config"]);
      csv << opt.scan->key << ",lowest_mode_hz,zigzag_hz,stable\n";
      for (const auto& r : rows)
        csv << fmt(r["value"].get<double>()) << ','
            << fmt(r["lowest_mode_hz"].get<double>()) << ','
            << fmt(r["zigzag_hz"].get<double>()) << ','
            << (r["stable"].get<bool>() ? 1 : 0) << '\n';
      emit(opt, csv.str());
    } else {
      emit(opt, dump_artifact(artifact));
    }
    return exit_ok;
  }

  const TrapSpec trap = trap_from_json(config["trap"]);
  const CrystalState st = normal_modes(trap);
  Json freqs = Json::array();
  for (Eigen::Index k = 0; k < st.mode_frequencies.size(); ++k)
    freqs.push_back(st.mode_frequencies(k) / (2.0 * constants::pi));
  Json artifact;
  artifact["command"] = "modes";
  artifact["config"] = resolved_config(config, trap);
  Json result;
  result["index_legend"] = index_legend;
  result["scale_length_m"] = st.scale_length_m;
  result["positions_l"] = positions_json(st.positions);
  result["mode_frequencies_hz"] = freqs;
  result["stable"] = st.stable();
  result["imaginary_modes"] = st.imaginary_modes;
  const ZigzagFrequency zz = zigzag_frequency(trap);
  result["zigzag_soft"] = zz.soft;
  result["zigzag_hz"] = zz.soft ? 0.0 : zz.omega / (2.0 * constants::pi);
  artifact["result"] = result;

  if (opt.format == "csv") {
    std::ostringstream csv;
    csv << csv_header(artifact["config"]);
    csv << "mode_index,frequency_hz\n";
    for (Eigen::Index k = 0; k < st.mode_frequencies.size(); ++k)
      csv << k << ',' << fmt(st.mode_frequencies(k) / (2.0 * constants::pi)) << '\n';
    emit(opt, csv.str());
  } else {
    emit(opt, dump_artifact(artifact));
  }
  return exit_ok;
}

int couple_body(const Options& opt) {
  Json config = load_json(opt.config_path);
  if (!config.contains("trap")) throw ConfigError("config needs 'trap'");

  if (opt.scan) {
    Json rows = Json::array();
    for (int i = 0; i < opt.scan->steps; ++i) {
      const double v = scan_value(*opt.scan, i);
      Json point = config;
      apply_config_value(point, opt.scan->key, v);
      const CoupleOutput co = compute_coupling(point);
      Json row;
      row["value"] = v;
      Eigen::MatrixXd offdiag = co.coupling.j_rad_s;
      row["max_abs_j_hz"] = offdiag.cwiseAbs().maxCoeff() / (2.0 * constants::pi);
      if (co.two_chain) {
        row["max_intra_hz"] = co.two_chain->max_intra_rad_s / (2.0 * constants::pi);
        row["max_inter_hz"] = co.two_chain->max_inter_rad_s / (2.0 * constants::pi);
      }
      rows.push_back(row);
    }
    const TrapSpec trap = trap_from_json(config["trap"]);
    Json artifact;
    artifact["command"] = "couple";
    artifact["config"] = resolved_config(config, trap);
    artifact["scan"] = {{"key", opt.scan->key},
                        {"start", opt.scan->start},
                        {"stop", opt.scan->stop},
                        {"steps", opt.scan->steps}};
    artifact["result"] = {{"rows", rows}};
    if (opt.format == "csv") {
      const bool two = trap.chains == 2;
      std::ostringstream csv;
      csv << csv_header(artifact["config"]);
      csv << opt.scan->key << ",max_abs_j_hz"
          << (two ? ",max_intra_hz,max_inter_hz" : "") << "\n";
      for (const auto& r : rows) {
        csv << fmt(r["value"].get<double>()) << ','
            << fmt(r["max_abs_j_hz"].get<double>());
        if (two)
          csv << ',' << fmt(r["max_intra_hz"].get<double>()) << ','
              << fmt(r["max_inter_hz"].get<double>());
        csv << '\n';
      }
      emit(opt, csv.str());
    } else {
      emit(opt, dump_artifact(artifact));
    }
    return exit_ok;
  }

  const CoupleOutput co = compute_coupling(config);
  const TrapSpec trap = trap_from_json(config["trap"]);
  Json artifact;
  artifact["command"] = "couple";
  artifact["config"] = resolved_config(config, trap);
  Json result;
  result["index_legend"] = index_legend;
  result["j_hz"] = matrix_to_json(co.coupling.j_rad_s / (2.0 * constants::pi));
  result["condition_number"] = co.coupling.condition_number;
  if (co.two_chain) {
    result["max_intra_hz"] = co.two_chain->max_intra_rad_s / (2.0 * constants::pi);
    result["max_inter_hz"] = co.two_chain->max_inter_rad_s / (2.0 * constants::pi);
    result["intra_sign"] = co.two_chain->intra_sign;
    result["inter_sign"] = co.two_chain->inter_sign;
    result["positions_l"] = positions_json(co.two_chain->positions);
  }
  artifact["result"] = result;

  if (opt.format == "csv") {
    std::ostringstream csv;
    csv << csv_header(artifact["config"]);
    const auto& j = co.coupling.j_rad_s;
    for (Eigen::Index r = 0; r < j.rows(); ++r) {
      for (Eigen::Index c = 0; c < j.cols(); ++c)
        csv << (c ? "," : "") << fmt(j(r, c) / (2.0 * constants::pi));
      csv << '\n';
    }
    emit(opt, csv.str());
  } else {
    emit(opt, dump_artifact(artifact));
  }
  return exit_ok;
}

CircuitGeometry circuit_from_config(const Json& field) {
  if (field.contains("circuit_file"))
    return load_circuit(field["circuit_file"].get<std::string>());
  const std::string builtin = field.value("builtin", "");
  const int filaments = field.value("filaments", 40);
  if (builtin == "double_loop") {
    if (!field.contains("currents_a") || field["currents_a"].size() != 2)
      throw ConfigError("double_loop needs 'currents_a': [i1, i2]");
    return double_loop_chip(field["currents_a"][0].get<double>(),
                            field["currents_a"][1].get<double>(), filaments);
  }
  if (builtin == "u_chip") return u_chip(field.value("current_a", 30.4), filaments);
  throw ConfigError("field needs 'circuit_file' or 'builtin' (double_loop, u_chip)");
}

int field_body(const Options& opt) {
  if (opt.scan) throw ConfigError("the field command does not support --scan");
  Json config = load_json(opt.config_path);
  if (!config.contains("field")) throw ConfigError("config needs 'field'");
  const Json& field = config["field"];
  const CircuitGeometry geom = circuit_from_config(field);

  Json artifact;
  artifact["command"] = "field";
  artifact["config"] = config;
  Json result;
  auto vec3_of = [](const Json& j) {
    if (!j.is_array() || j.size() != 3)
      throw ConfigError("points must be 3-element arrays (meters)");
    return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
  };
  if (field.contains("point_m")) {
    const Vec3 p = vec3_of(field["point_m"]);
    const Vec3 b = field_at(geom, p);
    const Vec3 g = gradient_of_magnitude(geom, p);
    result["point_m"] = Json::array({p(0), p(1), p(2)});
    result["field_t"] = Json::array({b(0), b(1), b(2)});
    result["magnitude_t"] = b.norm();
    result["grad_magnitude_t_per_m"] = Json::array({g(0), g(1), g(2)});
  }
  if (field.contains("line_from_m")) {
    if (!field.contains("line_to_m")) throw ConfigError("'line_from_m' needs 'line_to_m'");
    const Vec3 p0 = vec3_of(field["line_from_m"]);
    const Vec3 p1 = vec3_of(field["line_to_m"]);
    const int samples = field.value("samples", 101);
    if (samples < 2) throw ConfigError("'samples' must be >= 2");
    const GradientProfile prof = gradient_profile(geom, p0, p1, samples);
    Json pts = Json::array(), mag = Json::array(), grd = Json::array();
    for (int i = 0; i < samples; ++i) {
      pts.push_back(Json::array({prof.points[i](0), prof.points[i](1), prof.points[i](2)}));
      mag.push_back(prof.magnitude[i]);
      grd.push_back(Json::array(
          {prof.gradient[i](0), prof.gradient[i](1), prof.gradient[i](2)}));
    }
    result["profile"] = {{"points_m", pts},
                         {"magnitude_t", mag},
                         {"gradient_t_per_m", grd}};
  }
  if (result.empty())
    throw ConfigError("field needs 'point_m' and/or 'line_from_m'/'line_to_m'");
  artifact["result"] = result;

  if (opt.format == "csv") {
    std::ostringstream csv;
    csv << csv_header(artifact["config"]);
    csv << "x_m,y_m,z_m,magnitude_t,grad_x_t_per_m,grad_y_t_per_m,grad_z_t_per_m\n";
    auto row = [&](const Json& p, const Json& m, const Json& g) {
      csv << fmt(p[0].get<double>()) << ',' << fmt(p[1].get<double>()) << ','
          << fmt(p[2].get<double>()) << ',' << fmt(m.get<double>()) << ','
          << fmt(g[0].get<double>()) << ',' << fmt(g[1].get<double>()) << ','
          << fmt(g[2].get<double>()) << '\n';
    };
    if (result.contains("point_m"))
      row(result["point_m"], result["magnitude_t"], result["grad_magnitude_t_per_m"]);
    if (result.contains("profile")) {
      const Json& prof = result["profile"];
      for (size_t i = 0; i < prof["points_m"].size(); ++i)
        row(prof["points_m"][i], prof["magnitude_t"][i], prof["gradient_t_per_m"][i]);
    }
    emit(opt, csv.str());
  } else {
    emit(opt, dump_artifact(artifact));
  }
  return exit_ok;
}

int ground_state_body(const Options& opt) {
  if (opt.scan) throw ConfigError("the ground-state command does not support --scan");
  Json config = load_json(opt.config_path);
  if (!config.contains("trap")) throw ConfigError("config needs 'trap'");
  const TrapSpec trap = trap_from_json(config["trap"]);
  if (trap.total_ions() > 26)
    throw ConfigError("exhaustive ground-state search limited to 26 spins");

  const CoupleOutput co = compute_coupling(config);
  const GroundState gs = ground_state(co.coupling.j_rad_s);

  Json artifact;
  artifact["command"] = "ground-state";
  artifact["config"] = resolved_config(config, trap);
  Json result;
  result["index_legend"] = index_legend;
  result["ground_energy_hz"] = gs.energy_rad_s / (2.0 * constants::pi);
  result["degeneracy"] = static_cast<int>(gs.configurations.size());
  Json confs = Json::array();
  for (const auto& c : gs.configurations) confs.push_back(c);
  result["configurations"] = confs;
  if (co.two_chain) {
    const FrustrationReport fr = frustration_report(
        co.coupling.j_rad_s, co.two_chain->positions, trap.ions_per_chain);
    Json frj;
    frj["intra_max_hz"] = fr.intra_max_rad_s / (2.0 * constants::pi);
    frj["inter_max_hz"] = fr.inter_max_rad_s / (2.0 * constants::pi);
    frj["ratio"] = fr.ratio;
    frj["ground_degeneracy"] = fr.ground_degeneracy;
    frj["triangle_asymmetry"] = fr.triangle_asymmetry;
    result["frustration"] = frj;
  }
  artifact["result"] = result;

  if (opt.format == "csv") {
    std::ostringstream csv;
    csv << csv_header(artifact["config"]);
    csv << "configuration_index,energy_hz,spins\n";
    for (size_t i = 0; i < gs.configurations.size(); ++i) {
      csv << i << ',' << fmt(gs.energy_rad_s / (2.0 * constants::pi)) << ',';
      for (int sgn : gs.configurations[i]) csv << (sgn > 0 ? '+' : '-');
      csv << '\n';
    }
    emit(opt, csv.str());
  } else {
    emit(opt, dump_artifact(artifact));
  }
  return exit_ok;
}

}  // namespace

int cmd_modes(const Options& opt) { return run_guarded(opt, modes_body); }
int cmd_couple(const Options& opt) { return run_guarded(opt, couple_body); }
int cmd_field(const Options& opt) { return run_guarded(opt, field_body); }
int cmd_ground_state(const Options& opt) { return run_guarded(opt, ground_state_body); }

}  // namespace magic::cli
