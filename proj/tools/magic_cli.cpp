// magic: magnetic-gradient interaction designer for trapped-ion crystals.
//
//   magic modes        --config cfg.json [--out file] [--format json|csv]
//   magic couple       --config cfg.json [--scan alpha_x=0.01:0.04:20]
//   magic field        --config cfg.json
//   magic ground-state --config cfg.json
#include <CLI11.hpp>
#include <iostream>

#include "magic/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"magnetic-gradient spin-spin interaction designer for ion crystals"};
  app.require_subcommand(1);

  magic::cli::Options opt;
  std::string scan_text;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "JSON config file")->required();
    sub->add_option("--out", opt.out_path, "output file (default: stdout)");
    sub->add_option("--format", opt.format, "output format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--scan", scan_text,
                    "parameter scan key=start:stop:steps (e.g. alpha_x=0.01:0.047:20)");
    return sub;
  };

  CLI::App* modes = add_common(app.add_subcommand(
      "modes", "equilibrium structure and normal-mode spectrum"));
  CLI::App* couple = add_common(app.add_subcommand(
      "couple", "spin-spin coupling matrix for a trap and gradient"));
  CLI::App* field = add_common(app.add_subcommand(
      "field", "magnetic field and |B|-gradient of a chip circuit"));
  CLI::App* ground = add_common(app.add_subcommand(
      "ground-state", "exhaustive Ising ground state of the coupling matrix"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : magic::cli::exit_config_error;
  }

  if (!scan_text.empty()) {
    try {
      opt.scan = magic::parse_scan(scan_text);
    } catch (const std::exception& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return magic::cli::exit_config_error;
    }
  }

  if (modes->parsed()) return magic::cli::cmd_modes(opt);
  if (couple->parsed()) return magic::cli::cmd_couple(opt);
  if (field->parsed()) return magic::cli::cmd_field(opt);
  if (ground->parsed()) return magic::cli::cmd_ground_state(opt);
  return magic::cli::exit_config_error;
}
