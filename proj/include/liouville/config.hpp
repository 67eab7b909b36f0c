#pragma once

// Run configuration: a sectioned key-value (INI) document.
//
//   [basis]      dim, hbar, mass, omega, guard_fraction, hamiltonian
//   [generator]  family, family parameters, v_table
//   [command]    name and command options (see CommandOptions)
//   [output]     directory, formats
//
// All quantities are dimensionless; hbar = mass = omega = 1 by default.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "liouville/generators.hpp"
#include "liouville/hilbert.hpp"

namespace liouville {

struct CommandOptions {
  std::string name;                 ///< algebra-check | stationary | evolve | sweep | fold | info
  double tolerance = 1e-10;         ///< null-space cutoff relative to sigma_max
  double scan_tolerance = 1e-9;     ///< stationary threshold for Fock scan residuals
  unsigned long long seed = 42;

  // algebra-check
  int trials = 50;
  std::vector<int> dims;            ///< empty: use the basis dimension
  double identity_tolerance = 1e-12;

  // evolve
  std::string initial = "random";   ///< random | fock:<n>
  double t_end = 10.0;
  int steps = 100;

  // sweep
  std::string axis;
  std::vector<double> values;       ///< explicit values, or start/stop/points below
  double start = 0.0;
  double stop = 0.0;
  int points = 0;
  int threads = 1;

  // fold
  int grid = 256;                   ///< critical_points grid per axis

  // info
  bool dump_matrix = false;
};

struct OutputOptions {
  std::string directory = ".";
  bool json = true;
  bool csv = true;
};

struct RunConfig {
  FockBasis basis;
  double guard_fraction = 0.25;
  std::optional<GeneratorSpec> generator;
  CommandOptions command;
  OutputOptions output;

  /// Axis values for a sweep: `values` if given, else the start/stop/points grid.
  std::vector<double> sweep_values() const;
};

inline constexpr const char* kCommands[] = {"algebra-check", "stationary", "evolve", "sweep", "fold", "info"};

bool is_command(const std::string& name);

/// Parses and validates. Throws ConfigError (with line context for syntax
/// errors, naming the key otherwise) or DomainError from basis construction.
RunConfig parse_config(const std::string& text);
RunConfig parse_config_file(const std::string& path);

/// Checks that the named command has what it needs (generator section, sweep
/// axis, fold parameters). Throws ConfigError.
void validate_command(const RunConfig& config);

/// Rows separated by ';', entries by ','; a complex entry is written re:im.
CoefficientTable parse_coefficient_table(const std::string& text);

}  // namespace liouville
