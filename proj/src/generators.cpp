#include "liouville/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "liouville/errors.hpp"

namespace liouville {
namespace {

constexpr struct {
  Family family;
  std::string_view name;
} kFamilyNames[] = {
    {Family::closed, "closed"},
    {Family::general_fn, "general_fn"},
    {Family::nonlinear_friction_literal, "nonlinear_friction_literal"},
    {Family::nonlinear_friction_canonical, "nonlinear_friction_canonical"},
    {Family::cosine, "cosine"},
    {Family::lindblad_poly_h, "lindblad_poly_h"},
    {Family::fold, "fold"},
};

std::string format_id(Family family, const std::vector<std::pair<std::string, double>>& params) {
  std::ostringstream os;
  os << to_string(family) << '(';
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i) os << ',';
    os << params[i].first << '=' << params[i].second;
  }
  os << ')';
  return os.str();
}

void require_hermitian(const OperatorMatrix& h) {
  const double scale = std::max(1.0, max_abs(h));
  if (hermiticity_defect(h) > 1e-12 * scale) throw DomainError("Hamiltonian is not hermitian");
}

void require_basis_dim(const FockBasis& basis, const OperatorMatrix& h) {
  if (h.rows() != basis.dim || h.cols() != basis.dim) {
    throw DimensionError("Hamiltonian dimension does not match basis");
  }
}

double get(const GeneratorSpec& spec, const std::string& key) { return spec.params.at(key); }

}  // namespace

std::string_view to_string(Family family) {
  for (const auto& entry : kFamilyNames)
    if (entry.family == family) return entry.name;
  return "unknown";
}

Family family_from_string(std::string_view name) {
  for (const auto& entry : kFamilyNames)
    if (entry.name == name) return entry.family;
  throw ConfigError("unknown generator family '" + std::string(name) + "'");
}

BuiltGenerator build_closed(const FockBasis& basis, const OperatorMatrix& h) {
  require_basis_dim(basis, h);
  require_hermitian(h);
  BuiltGenerator gen;
  gen.id = "closed";
  gen.family = Family::closed;
  gen.basis = basis;
  gen.lambda = lie_mult(h, basis.hbar);
  gen.hamiltonian = h;
  return gen;
}

BuiltGenerator build_general(const FockBasis& basis, const OperatorMatrix& h,
                             const std::vector<SuperOperator>& f_list,
                             const std::vector<SpectralFunction>& n_list) {
  if (f_list.size() != n_list.size()) {
    throw DimensionError("build_general: F and N lists differ in length");
  }
  BuiltGenerator gen = build_closed(basis, h);
  gen.id = "general_fn";
  gen.family = Family::general_fn;
  const OperatorMatrix h_analytic = hamiltonian(basis, HamiltonianMode::analytic);
  Eigen::MatrixXcd lambda = gen.lambda.matrix();
  for (std::size_t k = 0; k < f_list.size(); ++k) {
    if (f_list[k].dim() != basis.dim) throw DimensionError("build_general: F_k dimension mismatch");
    const SuperOperator n_k = spectral_function(h_analytic, n_list[k]);
    // N_k is diagonal: F_k N_k scales the columns of F_k.
    lambda += f_list[k].matrix() * n_k.matrix().diagonal().asDiagonal();
    gen.f_superops.push_back(f_list[k]);
    gen.n_functions.emplace_back([f = n_list[k]](double e) { return f(e, e); });
  }
  gen.lambda = SuperOperator(std::move(lambda));
  return gen;
}

BuiltGenerator build_nonlinear_friction_literal(const FockBasis& basis, double big_omega,
                                                double beta, double gamma) {
  const auto [q, p] = canonical_operators(basis);
  const OperatorMatrix q2 = q * q;
  const OperatorMatrix p2 = p * p;
  const OperatorMatrix h_tilde = p2 / (2.0 * basis.mass) +
                                 (0.5 * basis.mass * big_omega * big_omega) * q2 +
                                 (0.5 * gamma) * (q2 * q2);
  // -(i/2hbar) beta [q^2, p^2 rho + rho p^2] = beta L^-_{q^2} L^+_{p^2} rho
  const SuperOperator friction = scale(beta, compose(lie_mult(q2, basis.hbar), jordan_mult(p2)));
  BuiltGenerator gen;
  gen.id = format_id(Family::nonlinear_friction_literal,
                     {{"Omega", big_omega}, {"beta", beta}, {"gamma", gamma}});
  gen.family = Family::nonlinear_friction_literal;
  gen.basis = basis;
  gen.lambda = add(lie_mult(h_tilde, basis.hbar), friction);
  gen.hamiltonian = h_tilde;
  return gen;
}

BuiltGenerator build_nonlinear_friction_canonical(const FockBasis& basis, double beta,
                                                  double delta) {
  if (beta == 0.0) throw DomainError("canonical friction requires beta != 0");
  const auto [q, p] = canonical_operators(basis);
  const double shift = delta / (2.0 * beta);
  const SuperOperator f = scale(2.0 * basis.mass * beta, lie_mult(q * q, basis.hbar));
  BuiltGenerator gen = build_general(basis, hamiltonian(basis), {f},
                                     {[shift](double a, double b) { return 0.5 * (a + b) - shift; }});
  gen.id = format_id(Family::nonlinear_friction_canonical, {{"beta", beta}, {"delta", delta}});
  gen.family = Family::nonlinear_friction_canonical;
  gen.n_functions = {[shift](double e) { return cplx(e - shift); }};
  return gen;
}

BuiltGenerator build_cosine(const FockBasis& basis, double epsilon0) {
  if (!(epsilon0 > 0.0)) throw DomainError("cosine model requires epsilon0 > 0");
  const auto [q, p] = canonical_operators(basis);
  const double k = std::numbers::pi / (2.0 * epsilon0);
  BuiltGenerator gen = build_general(basis, hamiltonian(basis), {lie_mult(q, basis.hbar)},
                                     {[k](double a, double b) { return std::cos(k * (a + b)); }});
  gen.id = format_id(Family::cosine, {{"epsilon0", epsilon0}});
  gen.family = Family::cosine;
  gen.n_functions = {[epsilon0](double e) { return cplx(std::cos(std::numbers::pi * e / epsilon0)); }};
  return gen;
}

BuiltGenerator build_lindblad_poly_h(const FockBasis& basis, const CoefficientTable& v_table) {
  const OperatorMatrix h = hamiltonian(basis);
  const int d = basis.dim;
  BuiltGenerator gen = build_closed(basis, h);
  Eigen::MatrixXcd dissipator = Eigen::MatrixXcd::Zero(d * d, d * d);
  for (const auto& row : v_table) {
    OperatorMatrix v = OperatorMatrix::Zero(d, d);
    OperatorMatrix h_power = OperatorMatrix::Identity(d, d);
    for (const cplx coeff : row) {
      v += coeff * h_power;
      h_power = h_power * h;
    }
    const OperatorMatrix vdag = v.adjoint();
    dissipator += 2.0 * (left_mult(v).matrix() * right_mult(vdag).matrix()) -
                  left_mult(v).matrix() * left_mult(vdag).matrix() -
                  right_mult(vdag).matrix() * right_mult(v).matrix();
    gen.f_superops.push_back(SuperOperator::identity(d));
    // N_k(E, E) = (1/2hbar) (2 v(E) v*(E) - v(E) v*(E) - v*(E) v(E))
    gen.n_functions.emplace_back([row, hbar = basis.hbar](double e) {
      cplx v_e = 0.0, e_pow = 1.0;
      for (const cplx c : row) {
        v_e += c * e_pow;
        e_pow *= e;
      }
      const cplx vv = v_e * std::conj(v_e);
      return (2.0 * vv - vv - std::conj(v_e) * v_e) / (2.0 * hbar);
    });
  }
  gen.lambda = SuperOperator(gen.lambda.matrix() + dissipator / (2.0 * basis.hbar));
  gen.family = Family::lindblad_poly_h;
  std::ostringstream os;
  os << "lindblad_poly_h(v=";
  for (std::size_t k = 0; k < v_table.size(); ++k) {
    if (k) os << ';';
    for (std::size_t n = 0; n < v_table[k].size(); ++n) {
      if (n) os << ',';
      os << v_table[k][n].real();
      if (v_table[k][n].imag() != 0.0) os << ':' << v_table[k][n].imag();
    }
  }
  os << ')';
  gen.id = os.str();
  return gen;
}

OperatorMatrix brownian_hamiltonian(const FockBasis& basis, double lambda_coupling) {
  const auto [q, p] = canonical_operators(basis);
  return (p * p) / (2.0 * basis.mass) +
         (0.5 * basis.mass * basis.omega * basis.omega) * (q * q) +
         (0.5 * lambda_coupling) * (q * p + p * q);
}

BuiltGenerator build_fold(const FockBasis& basis, double alpha0, double alpha1, double alpha2) {
  if (alpha2 == 0.0) throw DomainError("fold model requires alpha2 != 0");
  const auto [q, p] = canonical_operators(basis);
  const SuperOperator f = scale(-2.0, compose(lie_mult(q, basis.hbar), jordan_mult(p)));
  BuiltGenerator gen = build_general(
      basis, hamiltonian(basis), {f}, {[=](double a, double b) {
        const double jordan = 0.5 * (a + b);
        return alpha0 + alpha1 * jordan + alpha2 * jordan * jordan;
      }});
  gen.id = format_id(Family::fold, {{"alpha0", alpha0}, {"alpha1", alpha1}, {"alpha2", alpha2}});
  gen.family = Family::fold;
  gen.n_functions = {[=](double e) { return cplx(alpha0 + alpha1 * e + alpha2 * e * e); }};
  return gen;
}

cplx n_eigenvalue(const BuiltGenerator& gen, std::size_t k, double energy) {
  if (k >= gen.n_functions.size()) {
    throw std::out_of_range("n_eigenvalue: index " + std::to_string(k) + " out of range for " +
                            gen.id);
  }
  return gen.n_functions[k](energy);
}

double hermiticity_preservation_defect(const SuperOperator& lambda, int trials, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const int d = lambda.dim();
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    OperatorMatrix x(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) x(i, j) = cplx(normal(rng), normal(rng));
    x = 0.5 * (x + x.adjoint()).eval();
    const OperatorMatrix y = devectorize(apply(lambda, vectorize(x)));
    worst = std::max(worst, hermiticity_defect(y) / std::max(1.0, max_abs(y)));
  }
  return worst;
}

std::vector<std::string> required_parameters(Family family) {
  switch (family) {
    case Family::closed:
    case Family::general_fn:
    case Family::lindblad_poly_h:
      return {};
    case Family::nonlinear_friction_literal:
      return {"Omega", "beta", "gamma"};
    case Family::nonlinear_friction_canonical:
      return {"beta", "delta"};
    case Family::cosine:
      return {"epsilon0"};
    case Family::fold:
      return {"alpha0", "alpha1", "alpha2"};
  }
  return {};
}

std::vector<std::string> accepted_parameters(Family family) {
  auto names = required_parameters(family);
  if (family == Family::closed) names.emplace_back("lambda_coupling");
  return names;
}

void validate(const GeneratorSpec& spec) {
  if (spec.family == Family::general_fn) {
    throw ConfigError("family 'general_fn' takes callables and cannot be built from a config");
  }
  for (const auto& name : required_parameters(spec.family)) {
    if (!spec.params.contains(name)) {
      throw ConfigError("generator family '" + std::string(to_string(spec.family)) +
                        "' requires parameter '" + name + "'");
    }
    if (!std::isfinite(spec.params.at(name))) {
      throw ConfigError("parameter '" + name + "' must be finite");
    }
  }
  const auto accepted = accepted_parameters(spec.family);
  for (const auto& [name, value] : spec.params) {
    if (std::find(accepted.begin(), accepted.end(), name) == accepted.end()) {
      throw ConfigError("parameter '" + name + "' is not accepted by family '" +
                        std::string(to_string(spec.family)) + "'");
    }
  }
  switch (spec.family) {
    case Family::nonlinear_friction_canonical:
      if (get(spec, "beta") == 0.0) throw ConfigError("parameter 'beta' must be nonzero");
      break;
    case Family::cosine:
      if (!(get(spec, "epsilon0") > 0.0)) throw ConfigError("parameter 'epsilon0' must be positive");
      break;
    case Family::fold:
      if (get(spec, "alpha2") == 0.0) throw ConfigError("parameter 'alpha2' must be nonzero");
      break;
    case Family::lindblad_poly_h:
      if (spec.v_table.empty()) throw ConfigError("family 'lindblad_poly_h' requires 'v_table'");
      break;
    default:
      break;
  }
}

BuiltGenerator build(const GeneratorSpec& spec) {
  validate(spec);
  const FockBasis& basis = spec.basis;
  switch (spec.family) {
    case Family::closed: {
      if (spec.params.contains("lambda_coupling")) {
        BuiltGenerator gen = build_closed(basis, brownian_hamiltonian(basis, get(spec, "lambda_coupling")));
        gen.id = format_id(Family::closed, {{"lambda_coupling", get(spec, "lambda_coupling")}});
        return gen;
      }
      BuiltGenerator gen = build_closed(basis, hamiltonian(basis, spec.hamiltonian_mode));
      if (spec.hamiltonian_mode == HamiltonianMode::constructed) gen.id = "closed(constructed)";
      return gen;
    }
    case Family::nonlinear_friction_literal:
      return build_nonlinear_friction_literal(basis, get(spec, "Omega"), get(spec, "beta"),
                                              get(spec, "gamma"));
    case Family::nonlinear_friction_canonical:
      return build_nonlinear_friction_canonical(basis, get(spec, "beta"), get(spec, "delta"));
    case Family::cosine:
      return build_cosine(basis, get(spec, "epsilon0"));
    case Family::lindblad_poly_h:
      return build_lindblad_poly_h(basis, spec.v_table);
    case Family::fold:
      return build_fold(basis, get(spec, "alpha0"), get(spec, "alpha1"), get(spec, "alpha2"));
    case Family::general_fn:
      break;
  }
  throw ConfigError("family cannot be built from a specification");
}

}  // namespace liouville
