#include "liouville/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "liouville/errors.hpp"

namespace liouville {
namespace {

SweepPoint evaluate_point(const GeneratorSpec& templ, const std::string& axis, double value,
                          const SweepOptions& options) {
  SweepPoint point;
  point.value = value;
  try {
    GeneratorSpec spec = templ;
    spec.params[axis] = value;
    const BuiltGenerator gen = build(spec);
    const KernelSize kernel = null_dimension(gen.lambda, options.null_tolerance, gen.id);
    point.null_dimension = kernel.dimension;
    point.scan = fock_scan(gen.lambda, gen.basis, options.guard_fraction, kernel.sigma_max);
    point.levels = stationary_levels(point.scan, options.scan_tolerance);
    for (int n : point.levels) point.energies.push_back(level_energy(gen.basis, n));
    point.pure_count = static_cast<int>(point.levels.size());

    const int cutoff = guard_cutoff(gen.basis.dim, options.guard_fraction);
    const double e_max = level_energy(gen.basis, cutoff - 1) + 0.5 * gen.basis.hbar * gen.basis.omega;
    for (double e : condition_sc_roots(gen, default_energy_grid(gen.basis, options.guard_fraction, options.grid_points),
                                       options.root_tolerance)) {
      if (e >= 0.0 && e <= e_max) point.root_energies.push_back(e);
    }
    point.root_count = static_cast<int>(point.root_energies.size());

    std::vector<int> root_levels;
    for (int n = 0; n < cutoff; ++n) {
      const double en = level_energy(gen.basis, n);
      for (double r : point.root_energies) {
        if (std::abs(r - en) <= 1e-8 * std::max(1.0, en)) {
          root_levels.push_back(n);
          break;
        }
      }
    }
    point.consistent = root_levels == point.levels;
  } catch (const std::exception& e) {
    point.error = e.what();
    point.consistent = false;
  }
  return point;
}

std::vector<SweepTransition> transitions(const std::vector<SweepPoint>& points, int SweepPoint::*count) {
  std::vector<SweepTransition> out;
  const SweepPoint* prev = nullptr;
  for (const auto& p : points) {
    if (!p.error.empty()) continue;
    if (prev && prev->*count != p.*count) out.push_back({prev->value, p.value, prev->*count, p.*count});
    prev = &p;
  }
  return out;
}

}  // namespace

std::vector<double> SweepResult::axis_values() const {
  std::vector<double> v;
  for (const auto& p : points) v.push_back(p.value);
  return v;
}

std::vector<SweepTransition> SweepResult::root_transitions() const {
  return transitions(points, &SweepPoint::root_count);
}

std::vector<SweepTransition> SweepResult::pure_transitions() const {
  return transitions(points, &SweepPoint::pure_count);
}

SweepResult sweep(const GeneratorSpec& templ, const std::string& axis, const std::vector<double>& values,
                  const SweepOptions& options) {
  const auto accepted = accepted_parameters(templ.family);
  if (std::find(accepted.begin(), accepted.end(), axis) == accepted.end()) {
    throw ConfigError("sweep axis '" + axis + "' is not a parameter of family '" +
                      std::string(to_string(templ.family)) + "'");
  }
  SweepResult result;
  result.axis = axis;
  result.generator_template = std::string(to_string(templ.family));
  result.points.resize(values.size());

  const int workers = std::clamp(options.threads, 1, std::max(1, static_cast<int>(values.size())));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < values.size(); i = next++) {
      result.points[i] = evaluate_point(templ, axis, values[i], options);
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  return result;
}

}  // namespace liouville
