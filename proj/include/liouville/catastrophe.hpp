#pragma once

// Potential functions of the scalar eigenvalue conditions N_k(E, E) = 0,
// the fold analysis, the elementary catastrophe normal forms and a grid-based
// critical point finder.

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "liouville/hilbert.hpp"

namespace liouville {

/// Real polynomial in one variable, coefficients in ascending order.
class Polynomial {
 public:
  Polynomial() = default;
  /// Trailing zero coefficients are dropped.
  explicit Polynomial(std::vector<double> coefficients);

  const std::vector<double>& coefficients() const noexcept { return coeffs_; }
  /// -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  double operator()(double x) const;
  Polynomial derivative() const;
  /// Antiderivative with zero constant term.
  Polynomial antiderivative() const;

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  std::vector<double> coeffs_;
};

/// V with dV/dE = N and V(0) = 0. Throws DomainError unless degree(N) >= 1.
Polynomial potential_of(const Polynomial& n);

struct ShiftedPolynomial {
  double shift = 0.0;    ///< a in x = E - a
  Polynomial shifted;    ///< N(x + a) as a polynomial in x
};

/// Removes the x^{n-1} term: a = -alpha_{n-1} / (n alpha_n). Requires degree >= 2.
ShiftedPolynomial normal_form_shift(const Polynomial& n);

/// Polynomial in several variables: multi-index exponent -> coefficient.
struct MultiPolynomial {
  int variables = 0;
  std::map<std::vector<int>, double> terms;

  double operator()(std::span<const double> x) const;
  MultiPolynomial partial(int variable) const;
};

/// Table of partial derivatives dV/dE_k.
std::vector<MultiPolynomial> gradient(const MultiPolynomial& v);

struct PotentialityResult {
  bool potential = false;
  double residual = 0.0;  ///< max coefficient of dN_k/dE_l - dN_l/dE_k
};

/// Checks the symmetric-Jacobian condition coefficient-wise. Requires at least
/// two variables and one polynomial per variable.
PotentialityResult potentiality_check(const std::vector<MultiPolynomial>& n_table, double tol = 0.0);

struct Resonance {
  int n = 0;
  int m = 0;
  bool degenerate = false;  ///< m == 0: the two stationary energies coincide
};

struct FoldReport {
  double vertex = 0.0;        ///< -alpha1 / (2 alpha2)
  double lambda_param = 0.0;  ///< (alpha1^2 - 4 alpha0 alpha2) / (4 alpha2^2)
  std::vector<double> stationary_energies;  ///< vertex -/+ sqrt(lambda) when lambda > 0
  bool degenerate = false;    ///< lambda == 0 (double root at the vertex)
  std::optional<Resonance> resonance;
  std::string convention;
};

/// Throws DomainError for alpha2 == 0. Resonance matching uses `tol`
/// absolutely on the vertex and on lambda.
FoldReport fold_analyze(double alpha0, double alpha1, double alpha2, const FockBasis& basis,
                        double tol = 1e-6);

enum class CatastropheFamily { a_plus, a_minus, d_plus, d_minus, e6_plus, e6_minus, e7, e8 };

std::string_view to_string(CatastropheFamily family);
CatastropheFamily catastrophe_from_string(std::string_view name);

struct CanonicalPotential {
  CatastropheFamily family = CatastropheFamily::a_plus;
  int order = 2;  ///< n for A and D families; 6, 7, 8 for E families
  std::vector<double> controls;
  int variable_count = 1;
};

/// Number of control parameters a_j for a family and order.
int control_count(CatastropheFamily family, int order);
/// Smallest admissible variable count (1 for A, 2 otherwise).
int core_variables(CatastropheFamily family);

/// Validates control count, order and variable count. Throws DomainError.
CanonicalPotential make_canonical_potential(CatastropheFamily family, int order,
                                           std::vector<double> controls, int variable_count);

/// V0(x) + Q(x), Q the sum of squares of the variables beyond the core ones.
/// Throws DimensionError if x.size() != variable_count.
double canonical_potential(const CanonicalPotential& spec, std::span<const double> x);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct CriticalPoint {
  std::vector<double> point;
  double value = 0.0;
  double gradient_norm = 0.0;
  int positive = 0;  ///< Hessian signature counts
  int negative = 0;
  int zero = 0;
};

using ScalarField = std::function<double(std::span<const double>)>;

/// Grid scan for local minima of the finite-difference gradient norm, each
/// refined by damped Newton iteration and kept when the gradient norm falls
/// to `refine_tol` inside the box. Requires grid >= 16 and 1..3 dimensions.
/// Points are sorted lexicographically.
std::vector<CriticalPoint> critical_points(const ScalarField& potential, const std::vector<Interval>& box,
                                           int grid, double refine_tol = 1e-8);

}  // namespace liouville
