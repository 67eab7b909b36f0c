#pragma once

// Generators Lambda of d|rho)/dt = Lambda |rho) for the supported model
// families. Open families share the form
//
//   Lambda = L^-_H + sum_k F_k N_k(L_H, R_H)
//
// with N_k evaluated spectrally over the analytic (exactly diagonal) H, so a
// Fock projector |n><n| is stationary exactly when every N_k(E_n, E_n) = 0.

#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "liouville/hilbert.hpp"
#include "liouville/superops.hpp"

namespace liouville {

enum class Family {
  closed,
  general_fn,
  nonlinear_friction_literal,
  nonlinear_friction_canonical,
  cosine,
  lindblad_poly_h,
  fold,
};

std::string_view to_string(Family family);
/// Throws ConfigError on an unknown name.
Family family_from_string(std::string_view name);

/// Scalar eigenvalue function E -> N_k(E, E).
using NFunction = std::function<cplx(double)>;

struct BuiltGenerator {
  std::string id;
  Family family = Family::closed;
  FockBasis basis;
  SuperOperator lambda;
  std::vector<NFunction> n_functions;
  std::vector<SuperOperator> f_superops;
  OperatorMatrix hamiltonian;
};

/// Lambda = L^-_H. Throws DomainError if H is not hermitian.
BuiltGenerator build_closed(const FockBasis& basis, const OperatorMatrix& h);

/// Lambda = L^-_H + sum_k F_k N_k(L_H, R_H), N_k evaluated over the analytic H.
BuiltGenerator build_general(const FockBasis& basis, const OperatorMatrix& h,
                             const std::vector<SuperOperator>& f_list,
                             const std::vector<SpectralFunction>& n_list);

/// -(i/hbar)[H~, rho] - (i/2hbar) beta [q^2, p^2 rho + rho p^2] with
/// H~ = p^2/2m + m Omega^2 q^2/2 + gamma q^4/2, all from truncated q, p.
BuiltGenerator build_nonlinear_friction_literal(const FockBasis& basis, double big_omega,
                                                double beta, double gamma);

/// L^-_H + 2 m beta L^-_{q^2} N with N(a, b) = (a + b)/2 - delta/(2 beta).
/// Throws DomainError for beta == 0.
BuiltGenerator build_nonlinear_friction_canonical(const FockBasis& basis, double beta,
                                                  double delta);

/// L^-_H + L^-_q cos(pi (L_H + R_H) / (2 epsilon0)). Throws for epsilon0 <= 0.
BuiltGenerator build_cosine(const FockBasis& basis, double epsilon0);

/// Coefficient table v[k][n] of V_k = sum_n v_kn H^n.
using CoefficientTable = std::vector<std::vector<cplx>>;

/// L^-_H + (1/2hbar) sum_k (2 L_{V_k} R_{V_k^+} - L_{V_k} L_{V_k^+} - R_{V_k^+} R_{V_k}).
BuiltGenerator build_lindblad_poly_h(const FockBasis& basis, const CoefficientTable& v_table);

/// p^2/2m + m omega^2 q^2/2 + (lambda/2)(qp + pq) from truncated q, p.
OperatorMatrix brownian_hamiltonian(const FockBasis& basis, double lambda_coupling);

/// L^-_H + F N with F = -2 L^-_q L^+_p and N = alpha0 + alpha1 L^+_H + alpha2 (L^+_H)^2.
/// Throws DomainError for alpha2 == 0.
BuiltGenerator build_fold(const FockBasis& basis, double alpha0, double alpha1, double alpha2);

/// N_k(E, E). Throws std::out_of_range for a bad index.
cplx n_eigenvalue(const BuiltGenerator& gen, std::size_t k, double energy);

/// max over random hermitian X of the hermiticity defect of Lambda X, over
/// `trials` samples drawn from `seed`.
double hermiticity_preservation_defect(const SuperOperator& lambda, int trials, unsigned seed);

/// Declarative description of a generator, as read from a run configuration.
struct GeneratorSpec {
  Family family = Family::closed;
  FockBasis basis;
  std::map<std::string, double> params;
  CoefficientTable v_table;
  /// H used by the closed family; a lambda_coupling parameter selects the
  /// Brownian Hamiltonian instead.
  HamiltonianMode hamiltonian_mode = HamiltonianMode::analytic;
};

/// Names of the real parameters each family requires.
std::vector<std::string> required_parameters(Family family);
/// Names of all real parameters a family accepts.
std::vector<std::string> accepted_parameters(Family family);

/// Throws ConfigError naming the first missing or invalid parameter.
void validate(const GeneratorSpec& spec);

/// Validates and dispatches to the family builder.
BuiltGenerator build(const GeneratorSpec& spec);

}  // namespace liouville
