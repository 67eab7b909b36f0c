#pragma once

// Truncated Fock-space operators and their embedding into Liouville space.
//
// Liouville vectors use row-major pairing: the component of |A) at flattened
// index x*d + x' is the kernel A(x, x') = <x|A|x'>.

#include <complex>
#include <iosfwd>

#include <Eigen/Dense>

namespace liouville {

using cplx = std::complex<double>;
using OperatorMatrix = Eigen::MatrixXcd;

struct FockBasis {
  int dim = 24;
  double hbar = 1.0;
  double mass = 1.0;
  double omega = 1.0;
};

/// Validated basis. Throws DomainError for dim < 4 or non-positive constants.
FockBasis make_basis(int dim, double hbar = 1.0, double mass = 1.0, double omega = 1.0);

struct LadderOperators {
  OperatorMatrix lowering;
  OperatorMatrix raising;
};

struct CanonicalOperators {
  OperatorMatrix q;
  OperatorMatrix p;
};

enum class HamiltonianMode { analytic, constructed };

LadderOperators ladder_operators(const FockBasis& basis);

/// q = sqrt(hbar/2 m omega)(a + a^+), p = i sqrt(hbar m omega / 2)(a^+ - a).
CanonicalOperators canonical_operators(const FockBasis& basis);

/// analytic: diag(hbar omega (n + 1/2)); constructed: p^2/2m + m omega^2 q^2/2
/// from the truncated q, p (differs from analytic in the cutoff corner).
OperatorMatrix hamiltonian(const FockBasis& basis, HamiltonianMode mode = HamiltonianMode::analytic);

/// Oscillator level energy hbar omega (n + 1/2).
double level_energy(const FockBasis& basis, int n);

/// |n><n| in a d-dimensional basis. Throws DimensionError for n outside [0, d).
OperatorMatrix fock_projector(int dim, int n);

/// |row><col|. Throws DimensionError for indices outside [0, d).
OperatorMatrix matrix_unit(int dim, int row, int col);

/// max |A[i,j] - conj(A[j,i])|.
double hermiticity_defect(const OperatorMatrix& a);

/// Hilbert-Schmidt inner product Tr(A^+ B).
cplx hs_inner(const OperatorMatrix& a, const OperatorMatrix& b);

/// Number of Fock levels kept by the guard band: levels n < cutoff are
/// trusted. The top ceil(fraction * d) levels plus a fixed margin of four are
/// excluded.
int guard_cutoff(int dim, double guard_fraction);

class LiouvilleVector {
 public:
  LiouvilleVector() = default;
  /// Throws DimensionError unless entries.size() is a positive perfect square.
  explicit LiouvilleVector(Eigen::VectorXcd entries);

  static LiouvilleVector zero(int dim);

  int dim() const noexcept { return dim_; }
  int dim2() const noexcept { return static_cast<int>(entries_.size()); }
  const Eigen::VectorXcd& entries() const noexcept { return entries_; }
  cplx operator()(int x, int x_prime) const { return entries_(x * dim_ + x_prime); }

  double norm() const { return entries_.norm(); }

 private:
  Eigen::VectorXcd entries_;
  int dim_ = 0;
};

LiouvilleVector vectorize(const OperatorMatrix& a);
OperatorMatrix devectorize(const LiouvilleVector& v);

/// (I|v) = sum_x v(x, x).
cplx trace_functional(const LiouvilleVector& v);

/// CSV dump: header "row,col,re,im", one line per nonzero entry.
void write_matrix_csv(std::ostream& out, const Eigen::MatrixXcd& m);

}  // namespace liouville
