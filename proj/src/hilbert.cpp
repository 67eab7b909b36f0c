#include "liouville/hilbert.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <string>

#include "liouville/errors.hpp"

namespace liouville {

FockBasis make_basis(int dim, double hbar, double mass, double omega) {
  if (dim < 4) {
    throw DomainError("basis dimension must be at least 4, got " + std::to_string(dim));
  }
  if (!(hbar > 0.0) || !(mass > 0.0) || !(omega > 0.0)) {
    throw DomainError("hbar, mass and omega must be strictly positive");
  }
  return FockBasis{dim, hbar, mass, omega};
}

LadderOperators ladder_operators(const FockBasis& basis) {
  const int d = basis.dim;
  OperatorMatrix a = OperatorMatrix::Zero(d, d);
  for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  OperatorMatrix adag = a.adjoint();
  return {std::move(a), std::move(adag)};
}

CanonicalOperators canonical_operators(const FockBasis& basis) {
  const auto [a, adag] = ladder_operators(basis);
  const double q_scale = std::sqrt(basis.hbar / (2.0 * basis.mass * basis.omega));
  const double p_scale = std::sqrt(basis.hbar * basis.mass * basis.omega / 2.0);
  OperatorMatrix q = q_scale * (a + adag);
  OperatorMatrix p = cplx(0.0, p_scale) * (adag - a);
  return {std::move(q), std::move(p)};
}

double level_energy(const FockBasis& basis, int n) {
  return basis.hbar * basis.omega * (n + 0.5);
}

OperatorMatrix hamiltonian(const FockBasis& basis, HamiltonianMode mode) {
  const int d = basis.dim;
  if (mode == HamiltonianMode::analytic) {
    OperatorMatrix h = OperatorMatrix::Zero(d, d);
    for (int n = 0; n < d; ++n) h(n, n) = level_energy(basis, n);
    return h;
  }
  const auto [q, p] = canonical_operators(basis);
  return (p * p) / (2.0 * basis.mass) +
         (0.5 * basis.mass * basis.omega * basis.omega) * (q * q);
}

OperatorMatrix matrix_unit(int dim, int row, int col) {
  if (row < 0 || col < 0 || row >= dim || col >= dim) {
    throw DimensionError("matrix unit index outside a " + std::to_string(dim) + "-level basis");
  }
  OperatorMatrix m = OperatorMatrix::Zero(dim, dim);
  m(row, col) = 1.0;
  return m;
}

OperatorMatrix fock_projector(int dim, int n) { return matrix_unit(dim, n, n); }

double hermiticity_defect(const OperatorMatrix& a) {
  if (a.size() == 0) return 0.0;
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

cplx hs_inner(const OperatorMatrix& a, const OperatorMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("hs_inner: operand shapes differ");
  }
  // Tr(A^+ B) = sum_ij conj(A_ij) B_ij
  return (a.conjugate().cwiseProduct(b)).sum();
}

int guard_cutoff(int dim, double guard_fraction) {
  if (!(guard_fraction >= 0.0 && guard_fraction <= 0.5)) {
    throw DomainError("guard fraction must lie in [0, 0.5]");
  }
  const int excluded = static_cast<int>(std::ceil(guard_fraction * dim - 1e-12)) + 4;
  return std::max(0, dim - excluded);
}

LiouvilleVector::LiouvilleVector(Eigen::VectorXcd entries) : entries_(std::move(entries)) {
  const auto n = entries_.size();
  const auto root = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(n))));
  if (n == 0 || root * root != n) {
    throw DimensionError("Liouville vector length " + std::to_string(n) +
                         " is not a positive perfect square");
  }
  dim_ = static_cast<int>(root);
}

LiouvilleVector LiouvilleVector::zero(int dim) {
  return LiouvilleVector(Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim) * dim));
}

LiouvilleVector vectorize(const OperatorMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("vectorize: operator is not square");
  const auto d = a.rows();
  Eigen::VectorXcd v(d * d);
  for (Eigen::Index x = 0; x < d; ++x)
    for (Eigen::Index xp = 0; xp < d; ++xp) v(x * d + xp) = a(x, xp);
  return LiouvilleVector(std::move(v));
}

OperatorMatrix devectorize(const LiouvilleVector& v) {
  const int d = v.dim();
  OperatorMatrix a(d, d);
  for (int x = 0; x < d; ++x)
    for (int xp = 0; xp < d; ++xp) a(x, xp) = v(x, xp);
  return a;
}

cplx trace_functional(const LiouvilleVector& v) {
  cplx t = 0.0;
  for (int x = 0; x < v.dim(); ++x) t += v(x, x);
  return t;
}

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXcd& m) {
  out << "row,col,re,im\n";
  out << std::setprecision(17);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const cplx z = m(r, c);
      if (z == cplx(0.0, 0.0)) continue;
      out << r << ',' << c << ',' << z.real() << ',' << z.imag() << '\n';
    }
  }
}

}  // namespace liouville
