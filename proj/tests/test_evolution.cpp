#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "liouville/errors.hpp"
#include "liouville/evolution.hpp"
#include "liouville/generators.hpp"
#include "oracles.hpp"

using namespace liouville;

namespace {

double vec_diff(const LiouvilleVector& a, const Eigen::VectorXcd& b) { return (a.entries() - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("propagation at t = 0 is the identity") {
  std::mt19937_64 rng(1);
  const BuiltGenerator gen = build_cosine(make_basis(6), 2.0);
  const LiouvilleVector rho = vectorize(oracle::random_density(6, rng));
  CHECK(vec_diff(propagate(gen.lambda, rho, 0.0), rho.entries()) < 1e-13);
}

TEST_CASE("propagator agrees with a Taylor exponential") {
  std::mt19937_64 rng(2);
  const FockBasis b = make_basis(6);
  const std::vector<BuiltGenerator> gens = {build_closed(b, hamiltonian(b)), build_cosine(b, 2.0),
                                            build_fold(b, 5.25, -5.0, 1.0), build_nonlinear_friction_canonical(b, 0.5, 0.3),
                                            build_lindblad_poly_h(b, {{0.0, 0.4}})};
  for (const auto& gen : gens) {
    const LiouvilleVector rho = vectorize(oracle::random_density(6, rng));
    for (double t : {0.1, 0.7}) {
      const Eigen::VectorXcd expected = oracle::expm_taylor(gen.lambda.matrix(), t) * rho.entries();
      INFO(gen.id << " t=" << t);
      CHECK(vec_diff(propagate(gen.lambda, rho, t), expected) < 1e-9 * std::max(1.0, expected.norm()));
    }
  }
}

TEST_CASE("semigroup property") {
  std::mt19937_64 rng(3);
  const FockBasis b = make_basis(7);
  const BuiltGenerator gen = build_lindblad_poly_h(b, {{0.2, 0.3}});
  const Propagator prop(gen.lambda);
  const LiouvilleVector rho = vectorize(oracle::random_density(7, rng));
  std::uniform_real_distribution<double> pick(0.0, 2.0);
  for (int trial = 0; trial < 10; ++trial) {
    const double s = pick(rng), t = pick(rng);
    const LiouvilleVector two_step = prop(prop(rho, s), t);
    CHECK(vec_diff(two_step, prop(rho, s + t).entries()) < 1e-11);
  }
}

TEST_CASE("scaling-and-squaring fallback matches the eigendecomposition") {
  std::mt19937_64 rng(4);
  const FockBasis b = make_basis(6);
  const BuiltGenerator gen = build_cosine(b, 3.0);
  const Propagator eig(gen.lambda);
  const Propagator dense(gen.lambda, 0.0);
  CHECK(eig.method() == PropagationMethod::eigendecomposition);
  CHECK(dense.method() == PropagationMethod::scaling_and_squaring);
  const LiouvilleVector rho = vectorize(oracle::random_density(6, rng));
  for (double t : {0.3, 1.0, 4.0}) CHECK(vec_diff(eig(rho, t), dense(rho, t).entries()) < 1e-10);
}

TEST_CASE("invalid times are rejected") {
  const FockBasis b = make_basis(5);
  const BuiltGenerator gen = build_closed(b, hamiltonian(b));
  const LiouvilleVector rho = vectorize(fock_projector(5, 0));
  CHECK_THROWS_AS(propagate(gen.lambda, rho, std::nan("")), DomainError);
  CHECK_THROWS_AS(propagate(gen.lambda, rho, INFINITY), DomainError);
  CHECK_THROWS_AS(trajectory(gen.lambda, rho, {0.0, 1.0, 1.0}), DomainError);
  CHECK_THROWS_AS(trajectory(gen.lambda, rho, {1.0, 0.5}), DomainError);
  CHECK_THROWS_AS(propagate(gen.lambda, vectorize(fock_projector(4, 0)), 1.0), DimensionError);
}

TEST_CASE("closed evolution conserves trace, purity and energy") {
  std::mt19937_64 rng(5);
  const FockBasis b = make_basis(8);
  const OperatorMatrix h = hamiltonian(b);
  const BuiltGenerator gen = build_closed(b, h);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(8);
  for (int i = 0; i < 8; ++i) psi(i) = cplx(std::normal_distribution<double>()(rng), std::normal_distribution<double>()(rng));
  psi.normalize();
  const OperatorMatrix rho0 = psi * psi.adjoint();
  const double e0 = (h * rho0).trace().real();
  std::vector<double> times;
  for (int k = 0; k <= 20; ++k) times.push_back(0.5 * k);
  const Trajectory traj = trajectory(gen.lambda, vectorize(rho0), times, &h);
  REQUIRE(traj.monitors.size() == times.size());
  for (const auto& m : traj.monitors) {
    CHECK(m.trace_defect < 1e-12);
    CHECK(m.hermiticity_defect < 1e-12);
    CHECK(m.purity == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m.energy == doctest::Approx(e0).epsilon(1e-12));
  }
}

TEST_CASE("energy dephasing damps coherences at (E_x - E_y)^2 / 2hbar") {
  // V = c H gives d rho_xy / dt = -(i/hbar)(E_x - E_y) rho_xy - |c|^2 (E_x - E_y)^2 / (2 hbar) rho_xy.
  std::mt19937_64 rng(6);
  const double hbar = 0.8, c = 0.5;
  const FockBasis b = make_basis(6, hbar, 1.0, 1.1);
  const BuiltGenerator gen = build_lindblad_poly_h(b, {{0.0, c}});
  const OperatorMatrix rho0 = oracle::random_density(6, rng);
  const double t = 1.3;
  const OperatorMatrix rho = devectorize(propagate(gen.lambda, vectorize(rho0), t));
  for (int x = 0; x < 6; ++x)
    for (int y = 0; y < 6; ++y) {
      const double dE = level_energy(b, x) - level_energy(b, y);
      const cplx expected = rho0(x, y) * std::exp(cplx(-c * c * dE * dE / (2.0 * hbar), -dE / hbar) * t);
      CHECK(std::abs(rho(x, y) - expected) < 1e-12);
    }
}

TEST_CASE("trajectory CSV") {
  const FockBasis b = make_basis(5);
  const OperatorMatrix h = hamiltonian(b);
  const Trajectory traj = trajectory(build_closed(b, h).lambda, vectorize(fock_projector(5, 2)), {0.0, 1.0}, &h);
  std::ostringstream out;
  write_trajectory_csv(out, traj);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,trace_defect,herm_defect,purity,min_eig,energy");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 5);
  }
  CHECK(rows == 2);
  CHECK(traj.monitors[1].energy == doctest::Approx(2.5));
}

TEST_CASE("growing modes overflow into a numerical breakdown") {
  const BuiltGenerator gen = build_fold(make_basis(12), 5.25, -5.0, 1.0);
  const Propagator prop(gen.lambda);
  CHECK(prop.growth_rate() > 100.0);
  const LiouvilleVector rho = vectorize(fock_projector(12, 1));
  CHECK_NOTHROW(prop(rho, 1e-3));
  CHECK_THROWS_AS(prop(rho, 10.0), NumericalBreakdown);
}
