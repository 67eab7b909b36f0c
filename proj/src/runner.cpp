#include "liouville/runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "liouville/catastrophe.hpp"
#include "liouville/errors.hpp"
#include "liouville/evolution.hpp"
#include "liouville/serialize.hpp"
#include "liouville/stationary.hpp"
#include "liouville/sweep.hpp"

namespace liouville {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct OutputFile {
  std::string name;
  std::string contents;
};

class Outputs {
 public:
  explicit Outputs(const OutputOptions& options) : options_(options) {}

  void add_json(const std::string& name, const json& doc) {
    if (options_.json) files_.push_back({name, doc.dump(2) + "\n"});
  }
  void add_csv(const std::string& name, std::string contents) {
    if (options_.csv) files_.push_back({name, std::move(contents)});
  }

  std::vector<std::string> commit() const {
    const fs::path dir(options_.directory);
    fs::create_directories(dir);
    std::vector<fs::path> temps;
    auto cleanup = [&] {
      std::error_code ec;
      for (const auto& t : temps) fs::remove(t, ec);
    };
    for (const auto& f : files_) {
      const fs::path tmp = dir / ("." + f.name + ".tmp");
      temps.push_back(tmp);
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      out << f.contents;
      out.close();
      if (!out) {
        cleanup();
        throw Error("cannot write " + tmp.string());
      }
    }
    std::vector<std::string> written;
    for (std::size_t i = 0; i < files_.size(); ++i) {
      const fs::path target = dir / files_[i].name;
      fs::rename(temps[i], target);
      written.push_back(target.string());
    }
    return written;
  }

 private:
  const OutputOptions& options_;
  std::vector<OutputFile> files_;
};

std::string describe(const GeneratorSpec& spec) {
  std::ostringstream s;
  s << to_string(spec.family) << " {dim=" << spec.basis.dim;
  for (const auto& [k, v] : spec.params) s << ", " << k << '=' << v;
  if (!spec.v_table.empty()) s << ", v_table rows=" << spec.v_table.size();
  s << '}';
  return s.str();
}

json config_echo(const RunConfig& config) {
  json j = {{"command", config.command.name},
            {"basis", to_json(config.basis)},
            {"guard_fraction", config.guard_fraction},
            {"seed", config.command.seed}};
  if (config.generator) {
    j["generator"] = {{"family", std::string(to_string(config.generator->family))},
                      {"params", config.generator->params}};
  }
  return j;
}

std::string fmt(double v, int precision = 6) {
  std::ostringstream s;
  s << std::setprecision(precision) << v;
  return s.str();
}

int run_algebra_check(const RunConfig& config, Outputs& outputs, std::ostream& out) {
  const auto& c = config.command;
  const std::vector<int> dims = c.dims.empty() ? std::vector<int>{config.basis.dim} : c.dims;
  const AlgebraSuiteResult suite = algebra_suite(dims, c.trials, c.seed, config.basis.hbar, c.identity_tolerance);
  json doc = config_echo(config);
  doc["algebra"] = to_json(suite);
  outputs.add_json("report.json", doc);

  out << "algebra-check: " << c.trials << " random triples per dimension, dims";
  for (int d : dims) out << ' ' << d;
  out << ", seed " << c.seed << '\n';
  for (const auto& [name, r] : suite.max_relative) {
    out << "  " << std::left << std::setw(8) << name << " max relative residual " << fmt(r, 3)
        << (r <= suite.tolerance ? "  ok" : "  FAIL") << '\n';
  }
  const bool control_fails = suite.negative_control_min > 1e-3;
  out << "  max residual " << fmt(suite.worst(), 3) << " (tolerance " << fmt(suite.tolerance, 3) << ")\n";
  out << "  perturbed-hbar control min residual " << fmt(suite.negative_control_min, 3)
      << (control_fails ? " (fails as expected)" : " (UNEXPECTEDLY small)") << '\n';
  return suite.identities_pass() && control_fails ? exit_ok : exit_check;
}

int run_stationary(const RunConfig& config, Outputs& outputs, std::ostream& out) {
  const BuiltGenerator gen = build(*config.generator);
  StationaryOptions options;
  options.tolerance = config.command.tolerance;
  options.scan_tolerance = config.command.scan_tolerance;
  options.guard_fraction = config.guard_fraction;
  const StationaryReport report = analyze_stationary(gen, options);

  json doc = config_echo(config);
  doc["stationary"] = to_json(report);
  outputs.add_json("report.json", doc);
  std::ostringstream csv;
  write_fock_scan_csv(csv, report.fock_scan);
  outputs.add_csv("fock_scan.csv", csv.str());

  const auto pure = report.pure_states();
  out << "stationary: " << report.generator_id << '\n';
  out << "  ||Lambda||_2 = " << fmt(report.lambda_norm) << ", null-space dimension " << report.null_dimension << '\n';
  out << "  pure stationary states: " << pure.size() << '\n';
  for (const auto* s : pure) {
    out << "    n = " << *s->level << "  E = " << fmt(s->energy.value_or(0.0), 12) << "  residual "
        << fmt(s->residual, 3)
        << (*s->level >= guard_cutoff(config.basis.dim, config.guard_fraction) ? "  (outside guard band)" : "")
        << '\n';
  }
  const auto levels = stationary_levels(report.fock_scan, options.scan_tolerance);
  double worst_in = 0.0, best_out = std::numeric_limits<double>::infinity();
  for (const auto& e : report.fock_scan) {
    if (std::find(levels.begin(), levels.end(), e.level) != levels.end()) worst_in = std::max(worst_in, e.residual);
    else best_out = std::min(best_out, e.residual);
  }
  out << "  fock scan: " << levels.size() << " of " << report.fock_scan.size() << " guard-band levels stationary";
  if (!levels.empty()) out << ", max residual " << fmt(worst_in, 3);
  if (std::isfinite(best_out)) out << ", min non-stationary residual " << fmt(best_out, 3);
  out << '\n';
  if (!report.sc_roots.empty()) {
    out << "  N(E,E) roots:";
    for (std::size_t i = 0; i < report.sc_roots.size() && i < 12; ++i) out << ' ' << fmt(report.sc_roots[i], 10);
    if (report.sc_roots.size() > 12) out << " ...";
    out << '\n';
  }
  return exit_ok;
}

LiouvilleVector initial_state(const RunConfig& config) {
  const int d = config.basis.dim;
  if (config.command.initial == "random") {
    std::mt19937_64 rng(config.command.seed);
    const OperatorMatrix g = random_operator(d, rng);
    OperatorMatrix rho = g * g.adjoint();
    rho /= rho.trace();
    return vectorize(rho);
  }
  return vectorize(fock_projector(d, std::stoi(config.command.initial.substr(5))));
}

int run_evolve(const RunConfig& config, Outputs& outputs, std::ostream& out) {
  const BuiltGenerator gen = build(*config.generator);
  const auto& c = config.command;
  std::vector<double> times;
  for (int i = 0; i <= c.steps; ++i) times.push_back(c.t_end * i / c.steps);
  const Trajectory traj = trajectory(gen.lambda, initial_state(config), times, &gen.hamiltonian);

  std::ostringstream csv;
  write_trajectory_csv(csv, traj);
  outputs.add_csv("trajectory.csv", csv.str());
  double trace = 0.0, herm = 0.0, min_eig = std::numeric_limits<double>::infinity();
  for (const auto& r : traj.monitors) {
    trace = std::max(trace, r.trace_defect);
    herm = std::max(herm, r.hermiticity_defect);
    min_eig = std::min(min_eig, r.min_eigenvalue);
  }
  json doc = config_echo(config);
  doc["evolution"] = {{"generator_id", gen.id},
                      {"initial", c.initial},
                      {"method", traj.method == PropagationMethod::eigendecomposition ? "eigendecomposition"
                                                                                      : "scaling_and_squaring"},
                      {"condition_estimate", traj.condition_estimate},
                      {"max_trace_defect", trace},
                      {"max_hermiticity_defect", herm},
                      {"min_eigenvalue", min_eig},
                      {"final_purity", traj.monitors.back().purity},
                      {"final_energy", traj.monitors.back().energy}};
  outputs.add_json("report.json", doc);

  out << "evolve: " << gen.id << ", " << c.initial << " initial state, t in [0, " << fmt(c.t_end) << "], "
      << c.steps << " steps\n";
  out << "  propagation by " << doc["evolution"]["method"].get<std::string>() << " (eigenvector condition "
      << fmt(traj.condition_estimate, 3) << ")\n";
  out << "  max trace defect " << fmt(trace, 3) << ", max hermiticity defect " << fmt(herm, 3)
      << ", min eigenvalue " << fmt(min_eig, 3) << '\n';
  out << "  purity " << fmt(traj.monitors.front().purity) << " -> " << fmt(traj.monitors.back().purity)
      << ", energy " << fmt(traj.monitors.front().energy) << " -> " << fmt(traj.monitors.back().energy) << '\n';
  return exit_ok;
}

int run_sweep(const RunConfig& config, Outputs& outputs, std::ostream& out) {
  const auto& c = config.command;
  SweepOptions options;
  options.guard_fraction = config.guard_fraction;
  options.scan_tolerance = c.scan_tolerance;
  options.null_tolerance = c.tolerance;
  options.threads = c.threads;
  const SweepResult result = sweep(*config.generator, c.axis, config.sweep_values(), options);

  std::ostringstream csv;
  write_sweep_csv(csv, result);
  outputs.add_csv("sweep.csv", csv.str());
  json doc = config_echo(config);
  doc["sweep"] = to_json(result);
  outputs.add_json("sweep.json", doc);

  int failures = 0, inconsistent = 0;
  for (const auto& p : result.points) {
    if (!p.error.empty()) ++failures;
    else if (!p.consistent) ++inconsistent;
  }
  out << "sweep: " << result.generator_template << " over " << c.axis << ", " << result.points.size()
      << " points\n";
  for (const auto& p : result.points) {
    if (!p.error.empty()) {
      out << "  " << std::setw(10) << fmt(p.value) << "  error: " << p.error << '\n';
    } else if (p.pure_count > 0) {
      out << "  " << std::setw(10) << fmt(p.value) << "  pure " << p.pure_count << " at n =";
      for (int n : p.levels) out << ' ' << n;
      out << '\n';
    }
  }
  for (const auto& t : result.root_transitions()) {
    out << "  root count " << t.count_before << " -> " << t.count_after << " between " << c.axis << " = "
        << fmt(t.before) << " and " << fmt(t.after) << '\n';
  }
  out << "  failed points " << failures << ", scan/root mismatches " << inconsistent << '\n';
  return failures == 0 ? exit_ok : exit_numerical;
}

int run_fold(const RunConfig& config, Outputs& outputs, std::ostream& out) {
  const GeneratorSpec& spec = *config.generator;
  const double a0 = spec.params.at("alpha0"), a1 = spec.params.at("alpha1"), a2 = spec.params.at("alpha2");
  const FoldReport fold = fold_analyze(a0, a1, a2, config.basis);
  const Polynomial v = potential_of(Polynomial({a0, a1, a2}));

  const int cutoff = guard_cutoff(config.basis.dim, config.guard_fraction);
  const double reach = 2.0 * std::sqrt(std::max(fold.lambda_param, 0.0)) + 1.0;
  const Interval box{std::min(0.0, fold.vertex - reach),
                     std::max(config.basis.hbar * config.basis.omega * cutoff, fold.vertex + reach)};
  const auto crit = critical_points([&](std::span<const double> x) { return v(x[0]); }, {box}, config.command.grid);

  const BuiltGenerator gen = build(spec);
  const auto scan = fock_scan(gen.lambda, gen.basis, config.guard_fraction);
  const auto levels = stationary_levels(scan, config.command.scan_tolerance);

  json doc = config_echo(config);
  doc["fold"] = to_json(fold);
  doc["potential_coefficients"] = v.coefficients();
  json cps = json::array();
  for (const auto& cp : crit) cps.push_back(to_json(cp));
  doc["critical_points"] = cps;
  doc["stationary_levels"] = levels;
  outputs.add_json("report.json", doc);
  std::ostringstream csv;
  write_fock_scan_csv(csv, scan);
  outputs.add_csv("fock_scan.csv", csv.str());

  out << "fold: alpha0=" << fmt(a0) << " alpha1=" << fmt(a1) << " alpha2=" << fmt(a2) << '\n';
  out << "  vertex " << fmt(fold.vertex, 10) << ", lambda " << fmt(fold.lambda_param, 10)
      << (fold.degenerate ? " (degenerate double root)" : "") << '\n';
  out << "  stationary energies:";
  if (fold.stationary_energies.empty()) out << " none";
  for (double e : fold.stationary_energies) out << ' ' << fmt(e, 12);
  out << '\n';
  if (fold.resonance) {
    out << "  resonance n = " << fold.resonance->n << ", m = " << fold.resonance->m
        << (fold.resonance->degenerate ? " (degenerate)" : "") << '\n';
  }
  out << "  critical points of V:";
  for (const auto& cp : crit) out << ' ' << fmt(cp.point[0], 12);
  out << "\n  stationary Fock levels:";
  if (levels.empty()) out << " none";
  for (int n : levels) out << ' ' << n;
  out << '\n';
  return exit_ok;
}

int run_info(const RunConfig& config, Outputs& outputs, std::ostream& out) {
  const BuiltGenerator gen = build(*config.generator);
  const double norm = spectral_norm(gen.lambda);
  const double trace_res = trace_preservation_residual(gen.lambda);
  const double herm = hermiticity_preservation_defect(gen.lambda, 8, static_cast<unsigned>(config.command.seed));
  const int cutoff = guard_cutoff(config.basis.dim, config.guard_fraction);

  json doc = config_echo(config);
  doc["info"] = {{"generator_id", gen.id},
                 {"liouville_dim", gen.lambda.dim2()},
                 {"guard_cutoff", cutoff},
                 {"lambda_norm", norm},
                 {"trace_preservation_residual", trace_res},
                 {"hermiticity_preservation_defect", herm},
                 {"n_functions", gen.n_functions.size()}};
  outputs.add_json("report.json", doc);
  if (config.command.dump_matrix) {
    std::ostringstream csv;
    write_matrix_csv(csv, gen.lambda.matrix());
    outputs.add_csv("lambda.csv", csv.str());
  }

  out << "info: " << gen.id << '\n';
  out << "  basis dim " << config.basis.dim << " (Liouville dim " << gen.lambda.dim2() << "), guard band keeps n < "
      << cutoff << '\n';
  out << "  ||Lambda||_2 = " << fmt(norm) << ", trace-preservation residual " << fmt(trace_res, 3)
      << ", hermiticity-preservation defect " << fmt(herm, 3) << '\n';
  return exit_ok;
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  std::string context;
  if (config.generator) context = " [" + describe(*config.generator) + "]";
  try {
    validate_command(config);
    Outputs outputs(config.output);
    const std::string& name = config.command.name;
    int status = exit_ok;
    if (name == "algebra-check") status = run_algebra_check(config, outputs, out);
    else if (name == "stationary") status = run_stationary(config, outputs, out);
    else if (name == "evolve") status = run_evolve(config, outputs, out);
    else if (name == "sweep") status = run_sweep(config, outputs, out);
    else if (name == "fold") status = run_fold(config, outputs, out);
    else status = run_info(config, outputs, out);
    for (const auto& path : outputs.commit()) out << "  wrote " << path << '\n';
    return status;
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << context << '\n';
    return exit_config;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << context << '\n';
    return exit_config;
  } catch (const NumericalBreakdown& e) {
    err << "numerical breakdown: " << e.what() << context << '\n';
    return exit_numerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << context << '\n';
    return exit_numerical;
  }
}

}  // namespace liouville
