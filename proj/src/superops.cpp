#include "liouville/superops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "liouville/errors.hpp"

namespace liouville {
namespace {

int root_of(Eigen::Index n2) {
  const auto r = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(n2))));
  if (r * r != n2) throw DimensionError("superoperator size is not a perfect square");
  return static_cast<int>(r);
}

void require_same(const SuperOperator& s1, const SuperOperator& s2, const char* op) {
  if (s1.dim2() != s2.dim2()) {
    throw DimensionError(std::string(op) + ": superoperator dimensions differ");
  }
}

void require_square(const OperatorMatrix& a) {
  if (a.rows() != a.cols() || a.rows() == 0) throw DimensionError("operator is not square");
}

std::optional<std::vector<SuperOperator::Factor>> combine_sum(const SuperOperator& s1,
                                                              const SuperOperator& s2,
                                                              cplx sign) {
  if (!s1.factor_form() || !s2.factor_form()) return std::nullopt;
  auto out = *s1.factor_form();
  for (const auto& [l, r] : *s2.factor_form()) out.emplace_back(sign * l, r);
  return out;
}

}  // namespace

SuperOperator::SuperOperator(Eigen::MatrixXcd dense) : dense_(std::move(dense)) {
  if (dense_.rows() != dense_.cols()) throw DimensionError("superoperator is not square");
  dim_ = root_of(dense_.rows());
}

SuperOperator::SuperOperator(Eigen::MatrixXcd dense, std::vector<Factor> factors)
    : SuperOperator(std::move(dense)) {
  for (const auto& [l, r] : factors) {
    if (l.rows() != dim_ || l.cols() != dim_ || r.rows() != dim_ || r.cols() != dim_) {
      throw DimensionError("factor shape does not match superoperator dimension");
    }
  }
  factors_ = std::move(factors);
}

SuperOperator SuperOperator::identity(int dim) {
  const OperatorMatrix id = OperatorMatrix::Identity(dim, dim);
  return SuperOperator(Eigen::MatrixXcd::Identity(dim * dim, dim * dim), {{id, id}});
}

SuperOperator SuperOperator::zero(int dim) {
  return SuperOperator(Eigen::MatrixXcd::Zero(dim * dim, dim * dim), {});
}

SuperOperator SuperOperator::from_factors(std::vector<Factor> factors) {
  if (factors.empty()) throw DimensionError("from_factors: empty factor list");
  const auto d = factors.front().first.rows();
  Eigen::MatrixXcd dense = Eigen::MatrixXcd::Zero(d * d, d * d);
  // (x,x'|L B R) = sum_{y,y'} L(x,y) R(y',x') B(y,y')
  for (const auto& [l, r] : factors) {
    for (Eigen::Index x = 0; x < d; ++x)
      for (Eigen::Index xp = 0; xp < d; ++xp)
        for (Eigen::Index y = 0; y < d; ++y) {
          const cplx lxy = l(x, y);
          if (lxy == cplx(0.0)) continue;
          for (Eigen::Index yp = 0; yp < d; ++yp) dense(x * d + xp, y * d + yp) += lxy * r(yp, xp);
        }
  }
  return SuperOperator(std::move(dense), std::move(factors));
}

LiouvilleVector SuperOperator::apply_factored(const LiouvilleVector& v) const {
  if (!factors_) throw DimensionError("apply_factored: no factor form attached");
  if (v.dim() != dim_) throw DimensionError("apply_factored: vector dimension mismatch");
  const OperatorMatrix b = devectorize(v);
  OperatorMatrix out = OperatorMatrix::Zero(dim_, dim_);
  for (const auto& [l, r] : *factors_) out += l * b * r;
  return vectorize(out);
}

SuperOperator left_mult(const OperatorMatrix& a) {
  require_square(a);
  const auto d = a.rows();
  Eigen::MatrixXcd dense = Eigen::MatrixXcd::Zero(d * d, d * d);
  // (x,x'|L_A|y,y') = A(x,y) delta(x',y')
  for (Eigen::Index x = 0; x < d; ++x)
    for (Eigen::Index y = 0; y < d; ++y)
      for (Eigen::Index xp = 0; xp < d; ++xp) dense(x * d + xp, y * d + xp) = a(x, y);
  return SuperOperator(std::move(dense), {{a, OperatorMatrix::Identity(d, d)}});
}

SuperOperator right_mult(const OperatorMatrix& a) {
  require_square(a);
  const auto d = a.rows();
  Eigen::MatrixXcd dense = Eigen::MatrixXcd::Zero(d * d, d * d);
  // (x,x'|R_A|y,y') = delta(x,y) A(y',x')
  for (Eigen::Index x = 0; x < d; ++x)
    for (Eigen::Index xp = 0; xp < d; ++xp)
      for (Eigen::Index yp = 0; yp < d; ++yp) dense(x * d + xp, x * d + yp) = a(yp, xp);
  return SuperOperator(std::move(dense), {{OperatorMatrix::Identity(d, d), a}});
}

SuperOperator lie_mult(const OperatorMatrix& a, double hbar) {
  if (!(hbar > 0.0)) throw DomainError("lie_mult: hbar must be positive");
  return scale(1.0 / cplx(0.0, hbar), subtract(left_mult(a), right_mult(a)));
}

SuperOperator jordan_mult(const OperatorMatrix& a) {
  return scale(0.5, add(left_mult(a), right_mult(a)));
}

SuperOperator compose(const SuperOperator& s1, const SuperOperator& s2) {
  require_same(s1, s2, "compose");
  Eigen::MatrixXcd dense = s1.matrix() * s2.matrix();
  if (!s1.factor_form() || !s2.factor_form()) return SuperOperator(std::move(dense));
  // (L1 (L2 B R2) R1) = (L1 L2) B (R2 R1)
  std::vector<SuperOperator::Factor> factors;
  for (const auto& [l1, r1] : *s1.factor_form())
    for (const auto& [l2, r2] : *s2.factor_form()) factors.emplace_back(l1 * l2, r2 * r1);
  return SuperOperator(std::move(dense), std::move(factors));
}

SuperOperator add(const SuperOperator& s1, const SuperOperator& s2) {
  require_same(s1, s2, "add");
  auto factors = combine_sum(s1, s2, 1.0);
  Eigen::MatrixXcd dense = s1.matrix() + s2.matrix();
  return factors ? SuperOperator(std::move(dense), std::move(*factors))
                 : SuperOperator(std::move(dense));
}

SuperOperator subtract(const SuperOperator& s1, const SuperOperator& s2) {
  require_same(s1, s2, "subtract");
  auto factors = combine_sum(s1, s2, -1.0);
  Eigen::MatrixXcd dense = s1.matrix() - s2.matrix();
  return factors ? SuperOperator(std::move(dense), std::move(*factors))
                 : SuperOperator(std::move(dense));
}

SuperOperator scale(cplx c, const SuperOperator& s) {
  Eigen::MatrixXcd dense = c * s.matrix();
  if (!s.factor_form()) return SuperOperator(std::move(dense));
  std::vector<SuperOperator::Factor> factors;
  for (const auto& [l, r] : *s.factor_form()) factors.emplace_back(c * l, r);
  return SuperOperator(std::move(dense), std::move(factors));
}

LiouvilleVector apply(const SuperOperator& s, const LiouvilleVector& v) {
  if (s.dim2() != v.dim2()) throw DimensionError("apply: vector dimension mismatch");
  return LiouvilleVector(s.matrix() * v.entries());
}

SuperOperator spectral_function(const OperatorMatrix& h_diag, const SpectralFunction& f) {
  require_square(h_diag);
  const auto d = h_diag.rows();
  const double scale_h = std::max(1.0, h_diag.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < d; ++i) {
    if (std::abs(h_diag(i, i).imag()) > 1e-14 * scale_h) {
      throw DomainError("spectral_function: diagonal entries must be real");
    }
    for (Eigen::Index j = 0; j < d; ++j) {
      if (i != j && std::abs(h_diag(i, j)) > 1e-14 * scale_h) {
        throw DomainError("spectral_function: Hamiltonian must be diagonal");
      }
    }
  }
  Eigen::VectorXcd diag(d * d);
  for (Eigen::Index x = 0; x < d; ++x)
    for (Eigen::Index xp = 0; xp < d; ++xp)
      diag(x * d + xp) = f(h_diag(x, x).real(), h_diag(xp, xp).real());
  return SuperOperator(Eigen::MatrixXcd(diag.asDiagonal()));
}

LiouvilleVector power_series_apply(const std::vector<cplx>& coeffs, const SuperOperator& s,
                                   const LiouvilleVector& v) {
  if (s.dim2() != v.dim2()) throw DimensionError("power_series_apply: dimension mismatch");
  if (coeffs.empty()) return LiouvilleVector::zero(v.dim());
  Eigen::VectorXcd acc = coeffs.back() * v.entries();
  for (auto k = static_cast<std::ptrdiff_t>(coeffs.size()) - 2; k >= 0; --k) {
    acc = s.matrix() * acc + coeffs[static_cast<std::size_t>(k)] * v.entries();
  }
  return LiouvilleVector(std::move(acc));
}

double spectral_norm(const SuperOperator& s) {
  if (s.dim2() == 0) return 0.0;
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(s.matrix());
  return svd.singularValues()(0);
}

double max_abs(const Eigen::MatrixXcd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double trace_preservation_residual(const SuperOperator& s) {
  const int d = s.dim();
  Eigen::RowVectorXcd functional = Eigen::RowVectorXcd::Zero(s.dim2());
  for (int x = 0; x < d; ++x) functional(x * d + x) = 1.0;
  const Eigen::RowVectorXcd row = functional * s.matrix();
  return row.size() == 0 ? 0.0 : row.cwiseAbs().maxCoeff();
}

bool IdentityReport::all_pass() const {
  return std::all_of(identities.begin(), identities.end(),
                     [](const auto& kv) { return kv.second.pass; });
}

double IdentityReport::max_relative() const {
  double worst = 0.0;
  for (const auto& [name, r] : identities) worst = std::max(worst, r.relative());
  return worst;
}

namespace {

IdentityResidual compare(const Eigen::MatrixXcd& lhs, const Eigen::MatrixXcd& rhs, double tol) {
  IdentityResidual r;
  r.residual = max_abs(lhs - rhs);
  r.scale = std::max(max_abs(lhs), max_abs(rhs));
  r.pass = r.residual <= tol;
  return r;
}

}  // namespace

IdentityResidual jordan_product_relation(const OperatorMatrix& a, const OperatorMatrix& b,
                                         double hbar, double coefficient) {
  const OperatorMatrix a_o_b = 0.5 * (a * b + b * a);
  const Eigen::MatrixXcd lhs = jordan_mult(a_o_b).matrix();
  const Eigen::MatrixXcd rhs = jordan_mult(a).matrix() * jordan_mult(b).matrix() -
                               coefficient * (lie_mult(b, hbar).matrix() * lie_mult(a, hbar).matrix());
  return compare(lhs, rhs, 0.0);
}

IdentityReport algebra_check(const OperatorMatrix& a, const OperatorMatrix& b,
                             const OperatorMatrix& c, double hbar, double tol) {
  if (a.rows() != b.rows() || a.rows() != c.rows() || a.rows() != a.cols() ||
      b.rows() != b.cols() || c.rows() != c.cols()) {
    throw DimensionError("algebra_check: operator shapes differ");
  }
  const cplx i_hbar(0.0, hbar);
  auto lie_product = [&](const OperatorMatrix& x, const OperatorMatrix& y) -> OperatorMatrix {
    return (x * y - y * x) / i_hbar;
  };
  auto jordan_product = [](const OperatorMatrix& x, const OperatorMatrix& y) -> OperatorMatrix {
    return 0.5 * (x * y + y * x);
  };
  auto lm = [&](const OperatorMatrix& x) { return lie_mult(x, hbar).matrix(); };
  auto lp = [&](const OperatorMatrix& x) { return jordan_mult(x).matrix(); };

  const Eigen::MatrixXcd lm_a = lm(a), lm_b = lm(b);
  const Eigen::MatrixXcd lp_a = lp(a), lp_b = lp(b), lp_c = lp(c);
  const OperatorMatrix ab_dot = lie_product(a, b);
  const OperatorMatrix ab_o = jordan_product(a, b);
  const OperatorMatrix bc_o = jordan_product(b, c);
  const OperatorMatrix ac_o = jordan_product(a, c);
  const double h2_4 = hbar * hbar / 4.0;

  IdentityReport report;
  report.tolerance = tol;
  auto& ids = report.identities;

  ids["lie"] = compare(lm(ab_dot), lm_a * lm_b - lm_b * lm_a, tol);

  const Eigen::MatrixXcd jordan_lhs =
      lp(jordan_product(ab_o, c)) + lp_b * lp_c * lp_a + lp_a * lp_c * lp_b;
  const Eigen::MatrixXcd jordan_right = lp(ab_o) * lp_c + lp(bc_o) * lp_a + lp(ac_o) * lp_b;
  const Eigen::MatrixXcd jordan_left = lp_c * lp(ab_o) + lp_b * lp(ac_o) + lp_a * lp(bc_o);
  ids["jordan1"] = compare(jordan_lhs, jordan_right, tol);
  ids["jordan2"] = compare(jordan_lhs, jordan_left, tol);
  ids["jordan3"] = compare(jordan_left, jordan_right, tol);

  ids["mixed1"] = compare(lp(ab_dot), lm_a * lp_b - lp_b * lm_a, tol);
  ids["mixed2"] = compare(lm(ab_o), lp_a * lm_b + lp_b * lm_a, tol);
  ids["mixed3"] = compare(lp(ab_o), lp_a * lp_b - h2_4 * (lm_b * lm_a), tol);
  const Eigen::MatrixXcd commutator = lp_b * lp_a - lp_a * lp_b;
  ids["mixed4"] = compare(commutator, h2_4 * lm(ab_dot), tol);

  report.diagnostics["mixed4_negative_sign"] = max_abs(commutator + h2_4 * lm(ab_dot));
  report.notes.emplace_back(
      "mixed4 is evaluated as L+_B L+_A - L+_A L+_B = +(hbar^2/4) L-_{A.B}; "
      "the negative-sign variant is reported under diagnostics");
  report.notes.emplace_back(
      "jordan1..jordan3 compare the three distinct pairings of "
      "L+_{(AoB)oC} + L+_B L+_C L+_A + L+_A L+_C L+_B, "
      "L+_{AoB} L+_C + L+_{BoC} L+_A + L+_{AoC} L+_B and "
      "L+_C L+_{AoB} + L+_B L+_{AoC} + L+_A L+_{BoC}");
  for (auto& [name, r] : ids) r.pass = r.relative() <= tol;
  return report;
}

OperatorMatrix random_operator(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  OperatorMatrix m(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) m(r, c) = cplx(gauss(rng), gauss(rng));
  return m;
}

AlgebraSuiteResult algebra_suite(const std::vector<int>& dims, int trials, unsigned long long seed,
                                 double hbar, double tol, double perturbation) {
  if (trials < 1) throw DomainError("algebra_suite: trials must be positive");
  std::mt19937_64 rng(seed);
  AlgebraSuiteResult result;
  result.tolerance = tol;
  result.trials = trials;
  result.dims = dims;
  result.negative_control_min = std::numeric_limits<double>::infinity();
  const double wrong = (hbar * (1.0 + perturbation)) * (hbar * (1.0 + perturbation)) / 4.0;
  for (int d : dims) {
    for (int t = 0; t < trials; ++t) {
      const OperatorMatrix a = random_operator(d, rng);
      const OperatorMatrix b = random_operator(d, rng);
      const OperatorMatrix c = random_operator(d, rng);
      const IdentityReport rep = algebra_check(a, b, c, hbar, tol);
      for (const auto& [name, r] : rep.identities) {
        double& worst = result.max_relative[name];
        worst = std::max(worst, r.relative());
      }
      const IdentityResidual control = jordan_product_relation(a, b, hbar, wrong);
      result.negative_control_min = std::min(result.negative_control_min, control.relative());
    }
  }
  return result;
}

bool AlgebraSuiteResult::identities_pass() const {
  for (const auto& [name, r] : max_relative)
    if (!(r <= tolerance)) return false;
  return !max_relative.empty();
}

double AlgebraSuiteResult::worst() const {
  double w = 0.0;
  for (const auto& [name, r] : max_relative) w = std::max(w, r);
  return w;
}

}  // namespace liouville
