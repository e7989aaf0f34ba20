#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "magic/cli.hpp"
#include "magic/io.hpp"

using namespace magic;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "magic_io_tests";
  fs::create_directories(dir);
  return dir;
}

fs::path write_file(const std::string& name, const std::string& text) {
  const fs::path p = scratch_dir() / name;
  std::ofstream out(p, std::ios::binary);
  out << text;
  return p;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json single_chain_config(int n, double alpha) {
  Json c;
  c["trap"] = {{"species", "Ca40+"},
               {"omega_z_hz", 310e3},
               {"alpha_x", alpha},
               {"alpha_y", alpha},
               {"ions_per_chain", n}};
  c["gradient"] = {{"b_t_per_m", 1.0}};
  return c;
}

}  // namespace

TEST_CASE("round_sig keeps 12 significant digits and special values") {
  CHECK(round_sig(1.23456789012345e-7) == doctest::Approx(1.23456789012e-7).epsilon(1e-15));
  CHECK(round_sig(round_sig(0.1 + 0.2)) == round_sig(0.1 + 0.2));
  CHECK(round_sig(0.0) == 0.0);
  CHECK(round_sig(-4.0) == -4.0);
  CHECK(std::isinf(round_sig(INFINITY)));
  CHECK(round_sig(1.999999999999999, 3) == doctest::Approx(2.0));
}

TEST_CASE("sanitize_numbers walks nested documents") {
  Json j = {{"a", 1.000000000000001}, {"b", {{"c", Json::array({2.000000000000002, "s"})}}}};
  const Json s = sanitize_numbers(j);
  CHECK(s["a"].get<double>() == 1.0);
  CHECK(s["b"]["c"][0].get<double>() == 2.0);
  CHECK(s["b"]["c"][1] == "s");
}

TEST_CASE("matrices serialize row-major") {
  Eigen::MatrixXd m(2, 2);
  m << 1, 2, 3, 4;
  const Json j = matrix_to_json(m);
  CHECK(j[0][1].get<double>() == 2.0);
  CHECK(j[1][0].get<double>() == 3.0);
}

TEST_CASE("trap parsing accepts anisotropy or frequency spelling") {
  Json base = {{"omega_z_hz", 310e3}, {"ions_per_chain", 4}};
  Json via_alpha = base;
  via_alpha["alpha_x"] = 0.04;
  via_alpha["alpha_y"] = 0.09;
  Json via_hz = base;
  via_hz["omega_x_hz"] = 310e3 / std::sqrt(0.04);
  via_hz["omega_y_hz"] = 310e3 / std::sqrt(0.09);
  const TrapSpec a = trap_from_json(via_alpha);
  const TrapSpec b = trap_from_json(via_hz);
  CHECK(a.alpha_x == doctest::Approx(b.alpha_x).epsilon(1e-12));
  CHECK(a.alpha_y == doctest::Approx(b.alpha_y).epsilon(1e-12));

  Json both = via_alpha;
  both["omega_x_hz"] = via_hz["omega_x_hz"];  // consistent: fine
  CHECK(trap_from_json(both).alpha_x == doctest::Approx(0.04));
  both["omega_x_hz"] = 1e6;  // contradicts alpha_x
  CHECK_THROWS_AS(trap_from_json(both), ConfigError);
}

TEST_CASE("trap parsing rejects bad input") {
  CHECK_THROWS_AS(trap_from_json(Json::array()), ConfigError);
  Json t = {{"alpha_x", 0.1}, {"alpha_y", 0.1}, {"ions_per_chain", 2}};
  CHECK_THROWS_AS(trap_from_json(t), ConfigError);  // no omega_z_hz
  t["omega_z_hz"] = 310e3;
  CHECK_NOTHROW(trap_from_json(t));
  t["chains"] = 3;
  CHECK_THROWS_AS(trap_from_json(t), ConfigError);
  t["chains"] = 2;
  CHECK_THROWS_AS(trap_from_json(t), ConfigError);  // two chains need d_m
  t["d_m"] = 50e-6;
  CHECK_NOTHROW(trap_from_json(t));
  t["species"] = "Unobtainium";
  CHECK_THROWS_AS(trap_from_json(t), ConfigError);
}

TEST_CASE("trap echo carries both spellings, consistently") {
  Json t = {{"omega_z_hz", 310e3}, {"alpha_x", 0.05}, {"alpha_y", 0.07}, {"ions_per_chain", 3}};
  const Json echo = trap_to_json(trap_from_json(t));
  CHECK(echo["alpha_x"].get<double>() == doctest::Approx(0.05));
  const double wx = echo["omega_x_hz"].get<double>();
  CHECK(std::pow(310e3 / wx, 2) == doctest::Approx(0.05).epsilon(1e-12));
  // Echo parses back to the same trap.
  CHECK(trap_from_json(echo).alpha_y == doctest::Approx(0.07).epsilon(1e-9));
}

TEST_CASE("gradient parsing: uniform, per-ion, and validation") {
  const GradientSpec u = gradient_from_json({{"b_t_per_m", 40.0}}, 5);
  CHECK(u.gradient_t_per_m.size() == 1);
  CHECK(u.lande_g == 2.0);
  const GradientSpec p =
      gradient_from_json({{"b_t_per_m", {1.0, 2.0, 3.0}}, {"lande_g", 1.5}}, 3);
  CHECK(p.gradient_t_per_m(2) == 3.0);
  CHECK(p.lande_g == 1.5);
  CHECK_THROWS_AS(gradient_from_json({{"b_t_per_m", {1.0, 2.0}}, {"lande_g", 2.0}}, 3),
                  ConfigError);
  CHECK_THROWS_AS(gradient_from_json({{"lande_g", 2.0}}, 3), ConfigError);
}

TEST_CASE("scan parsing and evaluation") {
  const ScanSpec s = parse_scan("alpha_x=0.01:0.05:5");
  CHECK(s.key == "alpha_x");
  CHECK(scan_value(s, 0) == doctest::Approx(0.01));
  CHECK(scan_value(s, 4) == doctest::Approx(0.05));
  CHECK(scan_value(s, 2) == doctest::Approx(0.03));
  const ScanSpec one = parse_scan("b_t_per_m=7:9:1");
  CHECK(scan_value(one, 0) == 7.0);
  CHECK_THROWS_AS(parse_scan("alpha_x 0.01:0.05:5"), ConfigError);
  CHECK_THROWS_AS(parse_scan("alpha_x=0.01:0.05"), ConfigError);
  CHECK_THROWS_AS(parse_scan("alpha_x=a:b:3"), ConfigError);
  CHECK_THROWS_AS(parse_scan("alpha_x=0.01:0.05:0"), ConfigError);
}

TEST_CASE("scan keys route into the config and drop stale spellings") {
  Json c = single_chain_config(4, 0.05);
  c["trap"]["omega_x_hz"] = 310e3 / std::sqrt(0.05);
  apply_config_value(c, "alpha_x", 0.02);
  CHECK(c["trap"]["alpha_x"].get<double>() == 0.02);
  CHECK(!c["trap"].contains("omega_x_hz"));  // would now contradict
  apply_config_value(c, "b_t_per_m", 40.0);
  CHECK(c["gradient"]["b_t_per_m"].get<double>() == 40.0);
  apply_config_value(c, "trap.d_m", 50e-6);
  CHECK(c["trap"]["d_m"].get<double>() == 50e-6);
  apply_config_value(c, "omega_x_hz", 1e6);
  CHECK(!c["trap"].contains("alpha_x"));
  CHECK_THROWS_AS(apply_config_value(c, "voltage", 3.0), ConfigError);
}

TEST_CASE("modes artifacts are byte-identical across runs") {
  const fs::path cfg = write_file("modes.json", single_chain_config(5, 0.05).dump());
  cli::Options opt;
  opt.config_path = cfg.string();
  opt.out_path = (scratch_dir() / "a1.json").string();
  REQUIRE(cli::cmd_modes(opt) == cli::exit_ok);
  opt.out_path = (scratch_dir() / "a2.json").string();
  REQUIRE(cli::cmd_modes(opt) == cli::exit_ok);
  const std::string a1 = read_file(scratch_dir() / "a1.json");
  CHECK(a1 == read_file(scratch_dir() / "a2.json"));

  const Json art = Json::parse(a1);
  CHECK(art["command"] == "modes");
  CHECK(art["config"]["trap"].contains("alpha_x"));
  CHECK(art["config"]["trap"].contains("omega_x_hz"));
  CHECK(art["result"]["mode_frequencies_hz"].size() == 15);
  CHECK(art["result"]["stable"].get<bool>());
  // Highest mode of a stable chain at alpha < 1 is the transverse COM.
  CHECK(art["result"]["mode_frequencies_hz"][0].get<double>() ==
        doctest::Approx(310e3 / std::sqrt(0.05)).epsilon(1e-9));
}

TEST_CASE("modes CSV output carries the resolved config and one row per mode") {
  const fs::path cfg = write_file("modes_csv.json", single_chain_config(3, 0.1).dump());
  cli::Options opt;
  opt.config_path = cfg.string();
  opt.format = "csv";
  opt.out_path = (scratch_dir() / "modes.csv").string();
  REQUIRE(cli::cmd_modes(opt) == cli::exit_ok);
  std::istringstream in(read_file(scratch_dir() / "modes.csv"));
  std::string line;
  std::getline(in, line);
  REQUIRE(line.rfind("# config: ", 0) == 0);
  const Json echo = Json::parse(line.substr(10));
  CHECK(echo["trap"]["ions_per_chain"].get<int>() == 3);
  std::getline(in, line);
  CHECK(line == "mode_index,frequency_hz");
  int rows = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 9);
}

TEST_CASE("couple artifact: symmetric J in Hz with zero diagonal") {
  const fs::path cfg = write_file("couple.json", single_chain_config(4, 0.05).dump());
  cli::Options opt;
  opt.config_path = cfg.string();
  opt.out_path = (scratch_dir() / "couple.json").string();
  REQUIRE(cli::cmd_couple(opt) == cli::exit_ok);
  const Json art = Json::parse(read_file(scratch_dir() / "couple.json"));
  const Json& j = art["result"]["j_hz"];
  REQUIRE(j.size() == 4);
  for (int r = 0; r < 4; ++r) {
    CHECK(j[r][r].get<double>() == 0.0);
    for (int c = 0; c < 4; ++c)
      CHECK(j[r][c].get<double>() == j[c][r].get<double>());
  }
  CHECK(art["result"]["condition_number"].get<double>() > 1.0);
}

TEST_CASE("couple scan sweeps the gradient and shows the quadratic law") {
  const fs::path cfg = write_file("couple_scan.json", single_chain_config(3, 0.05).dump());
  cli::Options opt;
  opt.config_path = cfg.string();
  opt.out_path = (scratch_dir() / "couple_scan.json").string();
  opt.scan = parse_scan("b_t_per_m=1:3:3");
  REQUIRE(cli::cmd_couple(opt) == cli::exit_ok);
  const Json art = Json::parse(read_file(scratch_dir() / "couple_scan.json"));
  const Json& rows = art["result"]["rows"];
  REQUIRE(rows.size() == 3);
  const double j1 = rows[0]["max_abs_j_hz"].get<double>();
  const double j3 = rows[2]["max_abs_j_hz"].get<double>();
  CHECK(j3 / j1 == doctest::Approx(9.0).epsilon(1e-9));
}

TEST_CASE("CLI exit codes separate config errors from numerical failures") {
  cli::Options opt;
  opt.config_path = (scratch_dir() / "does_not_exist.json").string();
  CHECK(cli::cmd_modes(opt) == cli::exit_config_error);

  opt.config_path = write_file("broken.json", "{not json").string();
  CHECK(cli::cmd_modes(opt) == cli::exit_config_error);

  // Anisotropy beyond the structural transition: the linear chain's
  // transverse stiffness is not positive definite, a numerical failure.
  Json soft = single_chain_config(10, 0.06);
  opt.config_path = write_file("soft.json", soft.dump()).string();
  opt.out_path.clear();
  CHECK(cli::cmd_couple(opt) == cli::exit_numerical_error);

  Json nogap = single_chain_config(3, 0.05);
  nogap.erase("gradient");
  opt.config_path = write_file("nograd.json", nogap.dump()).string();
  CHECK(cli::cmd_couple(opt) == cli::exit_config_error);

  // field rejects --scan as a config error.
  opt.scan = parse_scan("b_t_per_m=1:2:2");
  CHECK(cli::cmd_field(opt) == cli::exit_config_error);
}

TEST_CASE("field command evaluates builtin geometries at a point") {
  Json c;
  c["field"] = {{"builtin", "u_chip"},
                {"current_a", 30.4},
                {"point_m", {0.0, 164e-6, 0.0}}};
  const fs::path cfg = write_file("field.json", c.dump());
  cli::Options opt;
  opt.config_path = cfg.string();
  opt.out_path = (scratch_dir() / "field_out.json").string();
  REQUIRE(cli::cmd_field(opt) == cli::exit_ok);
  const Json art = Json::parse(read_file(scratch_dir() / "field_out.json"));
  const Json& g = art["result"]["grad_magnitude_t_per_m"];
  CHECK(std::abs(g[1].get<double>()) > 30.0);  // steep vertical gradient
  CHECK(art["result"]["magnitude_t"].get<double>() > 0.0);
}

TEST_CASE("field command loads circuit files and samples a line") {
  Json circ;
  circ["segments"] = Json::array();
  circ["segments"].push_back({{"a", {0.0, 0.0, -1.0}}, {"b", {0.0, 0.0, 1.0}}, {"current_a", 10.0}});
  const fs::path circ_path = write_file("wire.json", circ.dump());
  Json c;
  c["field"] = {{"circuit_file", circ_path.string()},
                {"line_from_m", {0.001, 0.0, 0.0}},
                {"line_to_m", {0.002, 0.0, 0.0}},
                {"samples", 5}};
  cli::Options opt;
  opt.config_path = write_file("field_line.json", c.dump()).string();
  opt.format = "csv";
  opt.out_path = (scratch_dir() / "field_line.csv").string();
  REQUIRE(cli::cmd_field(opt) == cli::exit_ok);
  std::istringstream in(read_file(scratch_dir() / "field_line.csv"));
  std::string line;
  int rows = 0;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#' && line[0] != 'x') ++rows;
  CHECK(rows == 5);
}

TEST_CASE("ground-state command reports aligned order for axial coupling") {
  Json c = single_chain_config(4, 0.05);
  c["coupling"] = {{"direction", "z"}};
  cli::Options opt;
  opt.config_path = write_file("gs.json", c.dump()).string();
  opt.out_path = (scratch_dir() / "gs_out.json").string();
  REQUIRE(cli::cmd_ground_state(opt) == cli::exit_ok);
  const Json art = Json::parse(read_file(scratch_dir() / "gs_out.json"));
  // All-positive axial couplings order ferromagnetically (one state up to flip).
  CHECK(art["result"]["degeneracy"].get<int>() == 1);
  const Json& spins = art["result"]["configurations"][0];
  for (const auto& s : spins) CHECK(s.get<int>() == 1);
  CHECK(art["result"]["ground_energy_hz"].get<double>() < 0.0);

  Json big = single_chain_config(27, 0.05);
  opt.config_path = write_file("gs_big.json", big.dump()).string();
  CHECK(cli::cmd_ground_state(opt) == cli::exit_config_error);
}

TEST_CASE("checked-in example configs parse and resolve") {
  const fs::path dir = fs::path(MAGIC_SOURCE_DIR) / "configs";
  REQUIRE(fs::exists(dir));
  int seen = 0;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() != ".json") continue;
    const Json c = load_json(entry.path().string());
    if (c.contains("trap")) {
      const TrapSpec t = trap_from_json(c["trap"]);
      CHECK(t.total_ions() >= 1);
      if (c.contains("gradient"))
        CHECK_NOTHROW(gradient_from_json(c["gradient"], t.total_ions()));
    } else {
      CHECK(c.contains("field"));
    }
    ++seen;
  }
  CHECK(seen >= 10);
}
