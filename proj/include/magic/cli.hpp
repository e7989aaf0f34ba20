// Command implementations behind the `magic` command-line tool.  They are
// kept in the library so tests can drive them directly and compare emitted
// artifacts byte for byte.
#pragma once

#include <optional>
#include <string>

#include "magic/io.hpp"

namespace magic::cli {

struct Options {
  std::string config_path;
  std::string out_path;        // empty -> stdout
  std::string format = "json"; // "json" or "csv"
  std::optional<ScanSpec> scan;
};

/// Exit codes shared by all commands: 0 success, 2 invalid config/options,
/// 3 numerical failure (non-convergence, instability, singular systems).
inline constexpr int exit_ok = 0;
inline constexpr int exit_config_error = 2;
inline constexpr int exit_numerical_error = 3;

/// Equilibrium positions, mode frequencies and stability for the configured
/// trap; with --scan, headline frequencies per scan point.
int cmd_modes(const Options& opt);

/// Spin-spin coupling matrix for the configured trap and gradient; with
/// --scan, extremal couplings per scan point.
int cmd_couple(const Options& opt);

/// Field and |B|-gradient of a circuit geometry at a point and/or along a
/// sampled line.
int cmd_field(const Options& opt);

/// Exhaustive Ising ground state of the configured coupling matrix.
int cmd_ground_state(const Options& opt);

}  // namespace magic::cli
