#include <numbers>
#include <random>

#include "doctest.h"
#include "liouville/errors.hpp"
#include "liouville/generators.hpp"
#include "oracles.hpp"

using namespace liouville;
using oracle::Mat;

namespace {

// N(a, b) applied entrywise to rho over the analytic spectrum.
template <class N>
Mat spectral(const Mat& rho, const FockBasis& b, N n) {
  Mat out(rho.rows(), rho.cols());
  for (int x = 0; x < rho.rows(); ++x)
    for (int xp = 0; xp < rho.cols(); ++xp)
      out(x, xp) = n(oracle::energy(x, b.hbar, b.omega), oracle::energy(xp, b.hbar, b.omega)) * rho(x, xp);
  return out;
}

double rel_diff(const Mat& a, const Mat& b) {
  return oracle::max_abs(a - b) / std::max({oracle::max_abs(a), oracle::max_abs(b), 1e-300});
}

const FockBasis kOdd = make_basis(7, 0.8, 1.3, 0.9);

}  // namespace

TEST_CASE("closed generator rotates coherences at the level spacing") {
  const FockBasis b = make_basis(24);
  const BuiltGenerator gen = build_closed(b, hamiltonian(b));
  const OperatorMatrix out = devectorize(apply(gen.lambda, vectorize(matrix_unit(24, 0, 1))));
  // -(i/hbar)(E0 - E1) = +i omega
  CHECK(std::abs(out(0, 1) - cplx(0.0, 1.0)) < 1e-14);
  CHECK(oracle::max_abs(out - cplx(0.0, 1.0) * matrix_unit(24, 0, 1)) < 1e-14);
  CHECK(gen.id == "closed");
  CHECK(gen.n_functions.empty());
}

TEST_CASE("closed generator rejects a non-hermitian Hamiltonian") {
  OperatorMatrix h = hamiltonian(make_basis(5));
  h(0, 1) = 1.0;
  CHECK_THROWS_AS(build_closed(make_basis(5), h), DomainError);
  CHECK_THROWS_AS(build_closed(make_basis(6), hamiltonian(make_basis(5))), DimensionError);
}

TEST_CASE("canonical friction matches its operator formula") {
  const double beta = 0.3, delta = 0.7;
  const BuiltGenerator gen = build_nonlinear_friction_canonical(kOdd, beta, delta);
  const Mat q = oracle::position(7, kOdd.hbar, kOdd.mass, kOdd.omega);
  const Mat h = oracle::diagonal_h(7, kOdd.hbar, kOdd.omega);
  const cplx ih(0.0, kOdd.hbar);
  const Mat expected = oracle::superop_of(7, [&](const Mat& rho) -> Mat {
    const Mat n_rho = spectral(rho, kOdd, [&](double a, double b) { return 0.5 * (a + b) - delta / (2.0 * beta); });
    return oracle::commutator(h, rho) / ih + 2.0 * kOdd.mass * beta * oracle::commutator(q * q, n_rho) / ih;
  });
  CHECK(rel_diff(gen.lambda.matrix(), expected) < 1e-13);
  CHECK_THROWS_AS(build_nonlinear_friction_canonical(kOdd, 0.0, 0.5), DomainError);
}

TEST_CASE("canonical friction eigenvalue function") {
  const BuiltGenerator gen = build_nonlinear_friction_canonical(make_basis(24), 0.1, 0.5);
  CHECK(std::abs(n_eigenvalue(gen, 0, 3.5) - cplx(1.0)) < 1e-14);
  CHECK(std::abs(n_eigenvalue(gen, 0, 2.5)) < 1e-14);
  CHECK_THROWS_AS(n_eigenvalue(gen, 1, 2.5), std::out_of_range);
}

TEST_CASE("literal friction matches its operator formula") {
  const double big_omega = 1.2, beta = 0.15, gamma = 0.05;
  const BuiltGenerator gen = build_nonlinear_friction_literal(kOdd, big_omega, beta, gamma);
  const Mat q = oracle::position(7, kOdd.hbar, kOdd.mass, kOdd.omega);
  const Mat p = oracle::momentum(7, kOdd.hbar, kOdd.mass, kOdd.omega);
  const Mat q2 = q * q, p2 = p * p;
  const Mat h_tilde = p2 / (2.0 * kOdd.mass) + 0.5 * kOdd.mass * big_omega * big_omega * q2 + 0.5 * gamma * q2 * q2;
  const cplx i(0.0, 1.0);
  const Mat expected = oracle::superop_of(7, [&](const Mat& rho) -> Mat {
    return -(i / kOdd.hbar) * oracle::commutator(h_tilde, rho) -
           (i / (2.0 * kOdd.hbar)) * beta * oracle::commutator(q2, p2 * rho + rho * p2);
  });
  CHECK(rel_diff(gen.lambda.matrix(), expected) < 1e-13);
}

TEST_CASE("cosine model matches its operator formula") {
  const double eps0 = 2.5;
  const BuiltGenerator gen = build_cosine(kOdd, eps0);
  const Mat q = oracle::position(7, kOdd.hbar, kOdd.mass, kOdd.omega);
  const Mat h = oracle::diagonal_h(7, kOdd.hbar, kOdd.omega);
  const cplx ih(0.0, kOdd.hbar);
  const Mat expected = oracle::superop_of(7, [&](const Mat& rho) -> Mat {
    const Mat c = spectral(rho, kOdd, [&](double a, double b) { return std::cos(std::numbers::pi * (a + b) / (2 * eps0)); });
    return oracle::commutator(h, rho) / ih + oracle::commutator(q, c) / ih;
  });
  CHECK(rel_diff(gen.lambda.matrix(), expected) < 1e-13);
  CHECK(std::abs(n_eigenvalue(gen, 0, 1.25) - cplx(std::cos(std::numbers::pi * 0.5))) < 1e-15);
  CHECK_THROWS_AS(build_cosine(kOdd, 0.0), DomainError);
}

TEST_CASE("Lindblad generator with polynomial jump operators") {
  const CoefficientTable table = {{0.0, 1.0, 0.3}, {cplx(0.2, 0.1), cplx(0.0, -0.4)}};
  const BuiltGenerator gen = build_lindblad_poly_h(kOdd, table);
  const Mat h = oracle::diagonal_h(7, kOdd.hbar, kOdd.omega);
  std::vector<Mat> vs;
  for (const auto& row : table) {
    Mat v = Mat::Zero(7, 7), power = Mat::Identity(7, 7);
    for (const cplx c : row) {
      v += c * power;
      power = power * h;
    }
    vs.push_back(v);
  }
  const cplx ih(0.0, kOdd.hbar);
  const Mat expected = oracle::superop_of(7, [&](const Mat& rho) -> Mat {
    Mat out = oracle::commutator(h, rho) / ih;
    for (const Mat& v : vs) {
      const Mat vd = v.adjoint();
      out += (2.0 * v * rho * vd - vd * v * rho - rho * vd * v) / (2.0 * kOdd.hbar);
    }
    return out;
  });
  CHECK(rel_diff(gen.lambda.matrix(), expected) < 1e-13);
  REQUIRE(gen.n_functions.size() == 2);
  for (double e : {0.4, 1.2, 5.0}) CHECK(std::abs(n_eigenvalue(gen, 0, e)) < 1e-15);
}

TEST_CASE("fold generator matches its operator formula") {
  const double a0 = 5.25, a1 = -5.0, a2 = 1.0;
  const BuiltGenerator gen = build_fold(kOdd, a0, a1, a2);
  const Mat q = oracle::position(7, kOdd.hbar, kOdd.mass, kOdd.omega);
  const Mat p = oracle::momentum(7, kOdd.hbar, kOdd.mass, kOdd.omega);
  const Mat h = oracle::diagonal_h(7, kOdd.hbar, kOdd.omega);
  const cplx ih(0.0, kOdd.hbar);
  const Mat expected = oracle::superop_of(7, [&](const Mat& rho) -> Mat {
    const Mat n_rho = spectral(rho, kOdd, [&](double a, double b) {
      const double j = 0.5 * (a + b);
      return a0 + a1 * j + a2 * j * j;
    });
    return oracle::commutator(h, rho) / ih - 2.0 * oracle::commutator(q, 0.5 * oracle::anticommutator(p, n_rho)) / ih;
  });
  CHECK(rel_diff(gen.lambda.matrix(), expected) < 1e-13);
  CHECK(gen.id == "fold(alpha0=5.25,alpha1=-5,alpha2=1)");
  CHECK(std::abs(n_eigenvalue(gen, 0, 1.5)) < 1e-14);
  CHECK(std::abs(n_eigenvalue(gen, 0, 3.5)) < 1e-14);
  CHECK_THROWS_AS(build_fold(kOdd, 1.0, 1.0, 0.0), DomainError);
}

TEST_CASE("general generator scales F by N over the spectrum") {
  std::mt19937_64 rng(9);
  const FockBasis b = make_basis(5);
  const Mat x = oracle::random_hermitian(5, rng);
  const SuperOperator f = lie_mult(x, 1.0);
  const SpectralFunction n = [](double a, double c) { return cplx(a - 2.0 * c); };
  const BuiltGenerator gen = build_general(b, hamiltonian(b), {f}, {n});
  const Mat h = oracle::diagonal_h(5);
  const Mat expected = oracle::superop_of(5, [&](const Mat& rho) -> Mat {
    return oracle::commutator(h, rho) / cplx(0.0, 1.0) + oracle::commutator(x, spectral(rho, b, n)) / cplx(0.0, 1.0);
  });
  CHECK(rel_diff(gen.lambda.matrix(), expected) < 1e-13);
  CHECK(std::abs(n_eigenvalue(gen, 0, 2.0) - cplx(-2.0)) < 1e-15);
  CHECK_THROWS_AS(build_general(b, hamiltonian(b), {f}, {}), DimensionError);
  CHECK_THROWS_AS(build_general(b, hamiltonian(b), {lie_mult(oracle::random_hermitian(4, rng), 1.0)}, {n}),
                  DimensionError);
}

TEST_CASE("every family preserves trace and hermiticity") {
  const FockBasis b = make_basis(8, 1.0, 1.0, 1.0);
  const std::vector<BuiltGenerator> gens = {
      build_closed(b, hamiltonian(b, HamiltonianMode::constructed)),
      build_nonlinear_friction_literal(b, 1.0, 0.1, 0.02),
      build_nonlinear_friction_canonical(b, 0.1, 0.5),
      build_cosine(b, 3.0),
      build_lindblad_poly_h(b, {{0.0, 1.0, 0.3}}),
      build_fold(b, 5.25, -5.0, 1.0),
      build_closed(b, brownian_hamiltonian(b, 0.2)),
  };
  for (const auto& g : gens) {
    INFO(g.id);
    const double norm = spectral_norm(g.lambda);
    CHECK(trace_preservation_residual(g.lambda) <= 1e-12 * norm);
    CHECK(hermiticity_preservation_defect(g.lambda, 10, 17) < 1e-12 * norm);
  }
}

TEST_CASE("Brownian Hamiltonian spectrum") {
  // p^2/2m + m w^2 q^2/2 + (lambda/2)(qp + pq) is an oscillator of frequency
  // sqrt(w^2 - lambda^2); truncation leaves the low levels intact.
  for (double lambda : {0.1, 0.3}) {
    const FockBasis b = make_basis(32);
    const OperatorMatrix h = brownian_hamiltonian(b, lambda);
    CHECK(hermiticity_defect(h) < 1e-14);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(h);
    const double w = std::sqrt(1.0 - lambda * lambda);
    for (int n = 0; n <= 8; ++n) CHECK(std::abs(eig.eigenvalues()(n) - w * (n + 0.5)) < 1e-10);
  }
  const OperatorMatrix h0 = brownian_hamiltonian(make_basis(6), 0.0);
  CHECK(oracle::max_abs(h0 - hamiltonian(make_basis(6), HamiltonianMode::constructed)) < 1e-14);
}

TEST_CASE("family names round trip") {
  for (Family f : {Family::closed, Family::general_fn, Family::nonlinear_friction_literal,
                   Family::nonlinear_friction_canonical, Family::cosine, Family::lindblad_poly_h, Family::fold}) {
    CHECK(family_from_string(to_string(f)) == f);
  }
  CHECK_THROWS_AS(family_from_string("hopf"), ConfigError);
}

TEST_CASE("generator specifications are validated") {
  GeneratorSpec spec;
  spec.family = Family::fold;
  spec.basis = make_basis(8);
  spec.params = {{"alpha0", 5.25}, {"alpha1", -5.0}};
  try {
    validate(spec);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("alpha2") != std::string::npos);
  }
  spec.params["alpha2"] = 0.0;
  CHECK_THROWS_AS(validate(spec), ConfigError);
  spec.params["alpha2"] = 1.0;
  CHECK_NOTHROW(validate(spec));
  CHECK(build(spec).id == "fold(alpha0=5.25,alpha1=-5,alpha2=1)");
  spec.params["epsilon0"] = 1.0;
  CHECK_THROWS_AS(validate(spec), ConfigError);

  GeneratorSpec lind;
  lind.family = Family::lindblad_poly_h;
  lind.basis = make_basis(6);
  CHECK_THROWS_AS(validate(lind), ConfigError);
  lind.v_table = {{0.0, 1.0}};
  CHECK_NOTHROW(build(lind));

  GeneratorSpec general;
  general.family = Family::general_fn;
  general.basis = make_basis(6);
  CHECK_THROWS_AS(build(general), ConfigError);

  GeneratorSpec closed;
  closed.family = Family::closed;
  closed.basis = make_basis(6);
  closed.params = {{"lambda_coupling", 0.2}};
  CHECK(oracle::max_abs(build(closed).hamiltonian - brownian_hamiltonian(closed.basis, 0.2)) == 0.0);
  closed.params.clear();
  closed.hamiltonian_mode = HamiltonianMode::constructed;
  CHECK(oracle::max_abs(build(closed).hamiltonian - hamiltonian(closed.basis, HamiltonianMode::constructed)) == 0.0);

  CHECK(required_parameters(Family::cosine) == std::vector<std::string>{"epsilon0"});
  CHECK(accepted_parameters(Family::closed) == std::vector<std::string>{"lambda_coupling"});
}
