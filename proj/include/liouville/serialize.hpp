#pragma once

#include <iosfwd>

#include "json.hpp"
#include "liouville/catastrophe.hpp"
#include "liouville/evolution.hpp"
#include "liouville/stationary.hpp"
#include "liouville/superops.hpp"
#include "liouville/sweep.hpp"

namespace liouville {

nlohmann::json to_json(const FockBasis& basis);
nlohmann::json to_json(const StationaryReport& report);
nlohmann::json to_json(const IdentityReport& report);
nlohmann::json to_json(const AlgebraSuiteResult& result);
nlohmann::json to_json(const FoldReport& report);
nlohmann::json to_json(const CriticalPoint& point);
nlohmann::json to_json(const SweepResult& result);

/// level,energy,residual
void write_fock_scan_csv(std::ostream& out, const std::vector<ScanEntry>& scan);

/// axis_value,pure_count,energies,null_dimension,root_count; energies joined by ';'.
void write_sweep_csv(std::ostream& out, const SweepResult& result);

}  // namespace liouville
