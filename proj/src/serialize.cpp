#include "liouville/serialize.hpp"

#include <iomanip>
#include <ostream>

namespace liouville {

using nlohmann::json;

namespace {

json complex_matrix(const OperatorMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

json scan_json(const std::vector<ScanEntry>& scan) {
  json out = json::array();
  for (const auto& e : scan) out.push_back({{"level", e.level}, {"energy", e.energy}, {"residual", e.residual}});
  return out;
}

}  // namespace

json to_json(const FockBasis& basis) {
  return {{"dim", basis.dim}, {"hbar", basis.hbar}, {"mass", basis.mass}, {"omega", basis.omega}};
}

json to_json(const StationaryReport& report) {
  json states = json::array();
  for (const auto& s : report.states) {
    json j;
    j["residual"] = s.residual;
    j["energy"] = s.energy ? json(*s.energy) : json(nullptr);
    j["level"] = s.level ? json(*s.level) : json(nullptr);
    j["eigenprojector"] = s.eigenprojector;
    j["pure"] = s.state.is_pure;
    j["normalizable"] = s.state.normalizable;
    j["purity"] = s.state.purity;
    j["min_eigenvalue"] = s.state.min_eigenvalue;
    j["hermiticity_defect"] = s.state.hermiticity_defect;
    j["trace_defect"] = s.state.trace_defect;
    if (report.basis.dim <= 8) j["matrix"] = complex_matrix(s.state.matrix);
    states.push_back(std::move(j));
  }
  json pure = json::array();
  for (const auto* s : report.pure_states()) pure.push_back({{"level", *s->level}, {"energy", s->energy.value_or(0.0)}});
  return {{"generator_id", report.generator_id},
          {"basis", to_json(report.basis)},
          {"guard_fraction", report.guard_fraction},
          {"tolerance", report.tolerance},
          {"lambda_norm", report.lambda_norm},
          {"null_dimension", report.null_dimension},
          {"pure_states", pure},
          {"null_space_levels", report.null_space_levels},
          {"sc_roots", report.sc_roots},
          {"states", states},
          {"fock_scan", scan_json(report.fock_scan)}};
}

json to_json(const IdentityReport& report) {
  json ids = json::object();
  for (const auto& [name, r] : report.identities) {
    ids[name] = {{"residual", r.residual}, {"scale", r.scale}, {"relative", r.relative()}, {"pass", r.pass}};
  }
  return {{"tolerance", report.tolerance},
          {"identities", ids},
          {"diagnostics", report.diagnostics},
          {"notes", report.notes},
          {"all_pass", report.all_pass()}};
}

json to_json(const AlgebraSuiteResult& result) {
  return {{"tolerance", result.tolerance},
          {"trials", result.trials},
          {"dims", result.dims},
          {"max_relative", result.max_relative},
          {"negative_control_min", result.negative_control_min},
          {"identities_pass", result.identities_pass()}};
}

json to_json(const FoldReport& report) {
  json j = {{"vertex", report.vertex},
            {"lambda_param", report.lambda_param},
            {"stationary_energies", report.stationary_energies},
            {"degenerate", report.degenerate},
            {"convention", report.convention}};
  if (report.resonance) {
    j["resonance"] = {{"n", report.resonance->n}, {"m", report.resonance->m},
                      {"degenerate", report.resonance->degenerate}};
  } else {
    j["resonance"] = nullptr;
  }
  return j;
}

json to_json(const CriticalPoint& point) {
  return {{"point", point.point},
          {"value", point.value},
          {"gradient_norm", point.gradient_norm},
          {"signature", {point.positive, point.negative, point.zero}}};
}

json to_json(const SweepResult& result) {
  json points = json::array();
  for (const auto& p : result.points) {
    json j = {{"axis_value", p.value},
              {"levels", p.levels},
              {"energies", p.energies},
              {"root_energies", p.root_energies},
              {"pure_count", p.pure_count},
              {"root_count", p.root_count},
              {"null_dimension", p.null_dimension},
              {"consistent", p.consistent},
              {"fock_scan", scan_json(p.scan)}};
    if (!p.error.empty()) j["error"] = p.error;
    points.push_back(std::move(j));
  }
  json transitions = json::array();
  for (const auto& t : result.root_transitions()) {
    transitions.push_back({{"before", t.before}, {"after", t.after},
                           {"count_before", t.count_before}, {"count_after", t.count_after}});
  }
  return {{"axis", result.axis},
          {"family", result.generator_template},
          {"axis_values", result.axis_values()},
          {"points", points},
          {"root_transitions", transitions}};
}

void write_fock_scan_csv(std::ostream& out, const std::vector<ScanEntry>& scan) {
  out << "level,energy,residual\n" << std::setprecision(17);
  for (const auto& e : scan) out << e.level << ',' << e.energy << ',' << e.residual << '\n';
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  out << "axis_value,pure_count,energies,null_dimension,root_count\n" << std::setprecision(17);
  for (const auto& p : result.points) {
    out << p.value << ',';
    if (!p.error.empty()) {
      out << ",,,\n";
      continue;
    }
    out << p.pure_count << ',';
    for (std::size_t i = 0; i < p.energies.size(); ++i) out << (i ? ";" : "") << p.energies[i];
    out << ',' << p.null_dimension << ',' << p.root_count << '\n';
  }
}

}  // namespace liouville
