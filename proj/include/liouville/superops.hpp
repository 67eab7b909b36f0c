#pragma once

#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "liouville/hilbert.hpp"

namespace liouville {

/// Linear map on Liouville space, stored densely as a d^2 x d^2 matrix in the
/// row-major pairing of hilbert.hpp. A factor form sum_k L_k (.) R_k may ride
/// along; when present its action agrees with the dense matrix.
class SuperOperator {
 public:
  using Factor = std::pair<OperatorMatrix, OperatorMatrix>;

  SuperOperator() = default;
  explicit SuperOperator(Eigen::MatrixXcd dense);
  SuperOperator(Eigen::MatrixXcd dense, std::vector<Factor> factors);

  static SuperOperator identity(int dim);
  static SuperOperator zero(int dim);
  /// Dense form of B -> sum_k left_k * B * right_k.
  static SuperOperator from_factors(std::vector<Factor> factors);

  int dim() const noexcept { return dim_; }
  int dim2() const noexcept { return static_cast<int>(dense_.rows()); }
  const Eigen::MatrixXcd& matrix() const noexcept { return dense_; }
  const std::optional<std::vector<Factor>>& factor_form() const noexcept { return factors_; }

  /// Action through the factor form; throws if none is attached.
  LiouvilleVector apply_factored(const LiouvilleVector& v) const;

 private:
  Eigen::MatrixXcd dense_;
  std::optional<std::vector<Factor>> factors_;
  int dim_ = 0;
};

SuperOperator left_mult(const OperatorMatrix& a);
SuperOperator right_mult(const OperatorMatrix& a);
/// (L_A - R_A) / (i hbar): B -> (AB - BA) / (i hbar).
SuperOperator lie_mult(const OperatorMatrix& a, double hbar);
/// (L_A + R_A) / 2: B -> (AB + BA) / 2.
SuperOperator jordan_mult(const OperatorMatrix& a);

/// s1 after s2.
SuperOperator compose(const SuperOperator& s1, const SuperOperator& s2);
SuperOperator add(const SuperOperator& s1, const SuperOperator& s2);
SuperOperator subtract(const SuperOperator& s1, const SuperOperator& s2);
SuperOperator scale(cplx c, const SuperOperator& s);
LiouvilleVector apply(const SuperOperator& s, const LiouvilleVector& v);

using SpectralFunction = std::function<cplx(double, double)>;

/// N(L_H, R_H) for diagonal H: diagonal in the matrix-unit basis with entry
/// f(E_x, E_x') at (x, x'). Throws DomainError if H is not real diagonal.
SuperOperator spectral_function(const OperatorMatrix& h_diag, const SpectralFunction& f);

/// sum_k coeffs[k] S^k v by Horner's rule.
LiouvilleVector power_series_apply(const std::vector<cplx>& coeffs, const SuperOperator& s,
                                   const LiouvilleVector& v);

/// Largest singular value.
double spectral_norm(const SuperOperator& s);
double max_abs(const Eigen::MatrixXcd& m);

/// Max over columns of |sum_x S[(x,x), col]|, i.e. the norm of (I|S.
double trace_preservation_residual(const SuperOperator& s);

struct IdentityResidual {
  double residual = 0.0;  ///< max-norm of lhs - rhs
  double scale = 0.0;     ///< max of the max-norms of lhs and rhs
  bool pass = false;      ///< relative() <= tolerance

  double relative() const { return scale > 0.0 ? residual / scale : residual; }
};

/// Residuals of the Lie, Jordan and mixed relations for L^+/L^- superoperators.
/// Keys: lie, jordan1..jordan3, mixed1..mixed4.
struct IdentityReport {
  double tolerance = 1e-10;
  std::map<std::string, IdentityResidual> identities;
  /// Extra residuals that are expected to be large (sign/constant variants).
  std::map<std::string, double> diagnostics;
  std::vector<std::string> notes;

  bool all_pass() const;
  double max_relative() const;
};

IdentityReport algebra_check(const OperatorMatrix& a, const OperatorMatrix& b,
                             const OperatorMatrix& c, double hbar, double tol = 1e-10);

/// Residual of L^+_{A o B} = L^+_A L^+_B - k L^-_B L^-_A for a chosen constant k.
/// The identity holds for k = hbar^2 / 4.
IdentityResidual jordan_product_relation(const OperatorMatrix& a, const OperatorMatrix& b,
                                         double hbar, double coefficient);

/// Complex matrix with independent standard normal real and imaginary parts.
OperatorMatrix random_operator(int dim, std::mt19937_64& rng);

struct AlgebraSuiteResult {
  double tolerance = 1e-12;
  int trials = 0;
  std::vector<int> dims;
  std::map<std::string, double> max_relative;  ///< worst relative residual per identity
  double negative_control_min = 0.0;  ///< smallest relative residual of the perturbed-hbar relation

  bool identities_pass() const;
  double worst() const;
};

/// algebra_check on `trials` random triples per dimension, plus the Jordan
/// product relation evaluated with hbar scaled by (1 + perturbation).
AlgebraSuiteResult algebra_suite(const std::vector<int>& dims, int trials, unsigned long long seed,
                                 double hbar = 1.0, double tol = 1e-12, double perturbation = 0.1);

}  // namespace liouville
