#pragma once

#include <string>
#include <vector>

#include "liouville/generators.hpp"
#include "liouville/stationary.hpp"

namespace liouville {

struct SweepPoint {
  double value = 0.0;
  std::vector<int> levels;             ///< stationary guard-band Fock levels from the scan
  std::vector<double> energies;        ///< energies of those levels
  std::vector<double> root_energies;   ///< real roots of N(E, E) inside the guard window
  std::vector<ScanEntry> scan;
  int pure_count = 0;
  int root_count = 0;
  int null_dimension = 0;
  /// Scan levels equal the levels whose energy is an N(E, E) root.
  bool consistent = true;
  std::string error;  ///< non-empty when the point failed to build or analyze
};

struct SweepTransition {
  double before = 0.0;  ///< axis value on the left of the change
  double after = 0.0;
  int count_before = 0;
  int count_after = 0;
};

struct SweepResult {
  std::string axis;
  std::string generator_template;  ///< family name
  std::vector<SweepPoint> points;  ///< in the order of the requested values

  std::vector<double> axis_values() const;
  /// Changes of root_count between consecutive successful points.
  std::vector<SweepTransition> root_transitions() const;
  /// Changes of pure_count between consecutive successful points.
  std::vector<SweepTransition> pure_transitions() const;
};

struct SweepOptions {
  double guard_fraction = 0.25;
  double scan_tolerance = 1e-9;
  double null_tolerance = 1e-10;
  double root_tolerance = 1e-9;
  int grid_points = 2000;
  int threads = 1;
};

/// Builds the template with `axis` set to each value and records stationary
/// levels, N(E, E) roots and the null-space dimension. Throws ConfigError when
/// `axis` is not a parameter of the family; per-point failures are recorded in
/// SweepPoint::error.
SweepResult sweep(const GeneratorSpec& templ, const std::string& axis, const std::vector<double>& values,
                  const SweepOptions& options = {});

}  // namespace liouville
