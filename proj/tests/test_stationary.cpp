#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "liouville/errors.hpp"
#include "liouville/stationary.hpp"
#include "oracles.hpp"

using namespace liouville;

namespace {

std::vector<int> guard_levels_with_root(const FockBasis& b, const std::vector<double>& roots, double guard) {
  std::vector<int> out;
  for (int n = 0; n < guard_cutoff(b.dim, guard); ++n) {
    const double e = level_energy(b, n);
    if (std::any_of(roots.begin(), roots.end(), [&](double r) { return std::abs(r - e) < 1e-8; })) out.push_back(n);
  }
  return out;
}

}  // namespace

TEST_CASE("classify_state on pure, mixed and traceless operators") {
  const DensityState pure = classify_state(vectorize(fock_projector(5, 2)));
  CHECK(pure.is_pure);
  CHECK(pure.normalizable);
  CHECK(pure.trace_defect == 0.0);
  CHECK(pure.purity == doctest::Approx(1.0));

  const OperatorMatrix mixed = 0.5 * (fock_projector(5, 0) + fock_projector(5, 1));
  const DensityState m = classify_state(vectorize(mixed));
  CHECK_FALSE(m.is_pure);
  CHECK(m.purity == doctest::Approx(0.5));
  CHECK(m.min_eigenvalue == doctest::Approx(0.0));

  const DensityState scaled = classify_state(vectorize(3.0 * fock_projector(5, 4)));
  CHECK(scaled.is_pure);
  CHECK(scaled.trace_defect == doctest::Approx(2.0));

  const DensityState traceless = classify_state(vectorize(matrix_unit(5, 0, 1)));
  CHECK_FALSE(traceless.normalizable);
  CHECK_FALSE(traceless.is_pure);
  CHECK(traceless.hermiticity_defect == doctest::Approx(1.0));

  std::mt19937_64 rng(21);
  const DensityState random = classify_state(vectorize(oracle::random_density(6, rng)));
  CHECK(random.min_eigenvalue >= 0.0);
  CHECK(random.purity < 1.0);
  CHECK(random.trace_defect < 1e-14);
}

TEST_CASE("state energy") {
  const OperatorMatrix h = hamiltonian(make_basis(4));
  const OperatorMatrix rho = 0.5 * (fock_projector(4, 1) + fock_projector(4, 2));
  REQUIRE(state_energy(vectorize(rho), h).has_value());
  CHECK(*state_energy(vectorize(rho), h) == doctest::Approx(2.0));
  CHECK(*state_energy(vectorize(4.0 * rho), h) == doctest::Approx(2.0));
  CHECK_FALSE(state_energy(vectorize(matrix_unit(4, 0, 1)), h).has_value());
}

TEST_CASE("eigenprojector verification") {
  const OperatorMatrix h = hamiltonian(make_basis(6));
  for (int n = 0; n < 6; ++n) {
    const EigenprojectorCheck c = verify_eigenprojector(vectorize(fock_projector(6, n)), h);
    CHECK(c.is_eigenprojector);
    CHECK(c.energy == doctest::Approx(n + 0.5));
    CHECK(c.lie_residual < 1e-14);
  }
  const EigenprojectorCheck coherence = verify_eigenprojector(vectorize(matrix_unit(6, 0, 1)), h);
  CHECK_FALSE(coherence.is_eigenprojector);
  CHECK(coherence.left_residual < 1e-14);
  CHECK(coherence.right_residual > 0.5);

  OperatorMatrix sup = OperatorMatrix::Zero(6, 6);
  sup.topLeftCorner(2, 2).setConstant(0.5);
  CHECK_FALSE(verify_eigenprojector(vectorize(sup), h).is_eigenprojector);
}

TEST_CASE("closed analytic generator has a full diagonal kernel") {
  const FockBasis b = make_basis(12);
  const BuiltGenerator gen = build_closed(b, hamiltonian(b));
  const NullSpace ns = null_space(gen.lambda);
  CHECK(ns.basis.size() == 12);
  for (const auto& v : ns.basis) {
    CHECK(v.hermitian);
    CHECK(v.vector.norm() == doctest::Approx(1.0));
    CHECK((gen.lambda.matrix() * v.vector.entries()).norm() <= 1e-12 * ns.sigma_max);
  }
  for (int n = 0; n < 12; ++n) CHECK(null_space_overlap(ns, 12, n) == doctest::Approx(1.0));
  CHECK(null_dimension(gen.lambda).dimension == 12);
  CHECK(null_dimension(gen.lambda).sigma_max == doctest::Approx(ns.sigma_max));
  CHECK_THROWS_AS(null_space(gen.lambda, 0.0), DomainError);
}

TEST_CASE("closed generator: guard-band projectors are exactly stationary") {
  const FockBasis b = make_basis(24);
  const BuiltGenerator gen = build_closed(b, hamiltonian(b));
  const auto scan = fock_scan(gen.lambda, b);
  CHECK(scan.size() == 14);
  for (const auto& e : scan) {
    CHECK(e.residual <= 1e-12);
    CHECK(e.energy == doctest::Approx(e.level + 0.5));
  }
  CHECK(stationary_levels(scan, 1e-12).size() == 14);
}

TEST_CASE("N(E,E) roots for the fold and cosine families") {
  const FockBasis b = make_basis(24);
  const BuiltGenerator fold = build_fold(b, 5.25, -5.0, 1.0);
  const auto roots = condition_sc_roots(fold, default_energy_grid(b, 0.25));
  REQUIRE(roots.size() == 2);
  CHECK(roots[0] == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(roots[1] == doctest::Approx(3.5).epsilon(1e-12));

  const BuiltGenerator cosine = build_cosine(b, 3.0);
  const auto croots = condition_sc_roots(cosine, default_energy_grid(b, 0.25));
  REQUIRE(croots.size() == 5);
  for (std::size_t k = 0; k < croots.size(); ++k) CHECK(croots[k] == doctest::Approx(1.5 + 3.0 * k));

  const BuiltGenerator none = build_fold(b, 7.25, -5.0, 1.0);
  CHECK(condition_sc_roots(none, default_energy_grid(b, 0.25)).empty());
}

TEST_CASE("default energy grid covers the guard band") {
  const FockBasis b = make_basis(24);
  const auto grid = default_energy_grid(b, 0.25, 100);
  CHECK(std::is_sorted(grid.begin(), grid.end()));
  for (int n = 0; n < 14; ++n) CHECK(std::find(grid.begin(), grid.end(), level_energy(b, n)) != grid.end());
  CHECK(grid.front() == 0.0);
  CHECK(grid.back() == doctest::Approx(14.0));
}

TEST_CASE("fold at alpha0 = 5.25 has exactly two pure stationary states") {
  const BuiltGenerator gen = build_fold(make_basis(24), 5.25, -5.0, 1.0);
  const StationaryReport rep = analyze_stationary(gen);
  CHECK(rep.null_dimension == 2);
  const auto pure = rep.pure_states();
  REQUIRE(pure.size() == 2);
  std::set<int> levels;
  for (const auto* s : pure) {
    levels.insert(*s->level);
    CHECK(s->state.is_pure);
    CHECK(s->residual < 1e-12);
  }
  CHECK(levels == std::set<int>{1, 3});
  CHECK(std::abs(*pure[0]->energy - (*pure[0]->level + 0.5)) < 1e-8);
  CHECK(std::abs(*pure[1]->energy - (*pure[1]->level + 0.5)) < 1e-8);
  CHECK(rep.null_space_levels == std::vector<int>{1, 3});
  CHECK(stationary_levels(rep.fock_scan, 1e-9) == std::vector<int>{1, 3});
}

TEST_CASE("fold at alpha0 = 7.25 has no pure stationary Fock state") {
  const BuiltGenerator gen = build_fold(make_basis(24), 7.25, -5.0, 1.0);
  const StationaryReport rep = analyze_stationary(gen);
  CHECK(rep.pure_states().empty());
  CHECK(stationary_levels(rep.fock_scan, 1e-9).empty());
  CHECK(rep.sc_roots.empty());
}

TEST_CASE("scan levels coincide with N(E,E) roots on the spectrum") {
  // Resonant fold parameters: vertex hbar w (n + 1/2 + m/2), lambda (hbar w m)^2 / 4.
  const FockBasis b = make_basis(16);
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> pick_n(0, 4), pick_m(0, 3);
  std::uniform_real_distribution<double> pick_a2(0.5, 2.0);
  for (int trial = 0; trial < 8; ++trial) {
    const int n = pick_n(rng), m = pick_m(rng);
    const double a2 = pick_a2(rng);
    const double vertex = n + 0.5 + 0.5 * m, lambda = 0.25 * m * m;
    const double a1 = -2.0 * a2 * vertex;
    const double a0 = a2 * (vertex * vertex - lambda);
    const BuiltGenerator gen = build_fold(b, a0, a1, a2);
    const auto roots = condition_sc_roots(gen, default_energy_grid(b, 0.25));
    const auto scan = fock_scan(gen.lambda, b, 0.25);
    INFO("n=" << n << " m=" << m << " a2=" << a2);
    CHECK(stationary_levels(scan, 1e-9) == guard_levels_with_root(b, roots, 0.25));
    const std::vector<int> expected = m == 0 ? std::vector<int>{n} : std::vector<int>{n, n + m};
    CHECK(stationary_levels(scan, 1e-9) == expected);
  }
}

TEST_CASE("cosine model stationary sets") {
  const FockBasis b = make_basis(24);
  const StationaryReport all = analyze_stationary(build_cosine(b, 1.0));
  for (const auto& e : all.fock_scan) CHECK(e.residual <= 1e-10);

  const StationaryReport third = analyze_stationary(build_cosine(b, 3.0));
  CHECK(stationary_levels(third.fock_scan, 1e-10) == std::vector<int>{1, 4, 7, 10, 13});
  for (const auto& e : third.fock_scan)
    if (e.level % 3 != 1) CHECK(e.residual >= 1e-2);
}
