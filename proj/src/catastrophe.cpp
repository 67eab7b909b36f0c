#include "liouville/catastrophe.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "liouville/errors.hpp"

namespace liouville {
namespace {

double ipow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

Polynomial::Polynomial(std::vector<double> coefficients) : coeffs_(std::move(coefficients)) {
  while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
}

double Polynomial::operator()(double x) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  std::vector<double> d;
  for (std::size_t k = 1; k < coeffs_.size(); ++k) d.push_back(static_cast<double>(k) * coeffs_[k]);
  return Polynomial(std::move(d));
}

Polynomial Polynomial::antiderivative() const {
  std::vector<double> v(coeffs_.size() + 1, 0.0);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) v[k + 1] = coeffs_[k] / static_cast<double>(k + 1);
  return Polynomial(std::move(v));
}

Polynomial potential_of(const Polynomial& n) {
  if (n.degree() < 1) throw DomainError("potential_of: N must have degree >= 1");
  return n.antiderivative();
}

ShiftedPolynomial normal_form_shift(const Polynomial& n) {
  const int deg = n.degree();
  if (deg < 2) throw DomainError("normal_form_shift: degree must be at least 2");
  const auto& a = n.coefficients();
  const double lead = a[static_cast<std::size_t>(deg)];
  if (lead == 0.0) throw DomainError("normal_form_shift: zero leading coefficient");
  const double shift = -a[static_cast<std::size_t>(deg - 1)] / (deg * lead);
  // N(x + s) = sum_k a_k sum_m C(k, m) x^m s^{k-m}
  std::vector<double> out(static_cast<std::size_t>(deg + 1), 0.0);
  for (int k = 0; k <= deg; ++k)
    for (int m = 0; m <= k; ++m)
      out[static_cast<std::size_t>(m)] += a[static_cast<std::size_t>(k)] * binomial(k, m) * ipow(shift, k - m);
  // The x^{n-1} coefficient is zero by construction; remove rounding residue.
  out[static_cast<std::size_t>(deg - 1)] = 0.0;
  return {shift, Polynomial(std::move(out))};
}

double MultiPolynomial::operator()(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != variables) throw DimensionError("MultiPolynomial: point dimension mismatch");
  double acc = 0.0;
  for (const auto& [exps, c] : terms) {
    double t = c;
    for (int l = 0; l < variables; ++l) t *= ipow(x[static_cast<std::size_t>(l)], exps[static_cast<std::size_t>(l)]);
    acc += t;
  }
  return acc;
}

MultiPolynomial MultiPolynomial::partial(int variable) const {
  if (variable < 0 || variable >= variables) throw DimensionError("partial: variable out of range");
  MultiPolynomial out{variables, {}};
  for (const auto& [exps, c] : terms) {
    const int e = exps[static_cast<std::size_t>(variable)];
    if (e == 0 || c == 0.0) continue;
    auto lowered = exps;
    lowered[static_cast<std::size_t>(variable)] = e - 1;
    out.terms[lowered] += c * e;
  }
  return out;
}

std::vector<MultiPolynomial> gradient(const MultiPolynomial& v) {
  std::vector<MultiPolynomial> g;
  for (int l = 0; l < v.variables; ++l) g.push_back(v.partial(l));
  return g;
}

PotentialityResult potentiality_check(const std::vector<MultiPolynomial>& n_table, double tol) {
  const int s = static_cast<int>(n_table.size());
  if (s < 2) throw DomainError("potentiality_check: need at least two variables");
  for (const auto& p : n_table) {
    if (p.variables != s) throw DimensionError("potentiality_check: table must have one entry per variable");
  }
  PotentialityResult result;
  for (int k = 0; k < s; ++k) {
    for (int l = k + 1; l < s; ++l) {
      const MultiPolynomial dk = n_table[static_cast<std::size_t>(k)].partial(l);
      const MultiPolynomial dl = n_table[static_cast<std::size_t>(l)].partial(k);
      std::map<std::vector<int>, double> diff = dk.terms;
      for (const auto& [exps, c] : dl.terms) diff[exps] -= c;
      for (const auto& [exps, c] : diff) result.residual = std::max(result.residual, std::abs(c));
    }
  }
  result.potential = result.residual <= tol;
  return result;
}

FoldReport fold_analyze(double alpha0, double alpha1, double alpha2, const FockBasis& basis, double tol) {
  if (alpha2 == 0.0) throw DomainError("fold_analyze: alpha2 must be nonzero");
  FoldReport r;
  r.vertex = -alpha1 / (2.0 * alpha2);
  r.lambda_param = (alpha1 * alpha1 - 4.0 * alpha0 * alpha2) / (4.0 * alpha2 * alpha2);
  r.convention = "lambda = (alpha1^2 - 4 alpha0 alpha2) / (4 alpha2^2); N(E,E) = 0 <=> x^2 = lambda, x = E - vertex";
  const double zero_band = 1e-12 * std::max(1.0, r.vertex * r.vertex);
  if (std::abs(r.lambda_param) <= zero_band) {
    r.degenerate = true;
  } else if (r.lambda_param > 0.0) {
    const double root = std::sqrt(r.lambda_param);
    r.stationary_energies = {r.vertex - root, r.vertex + root};
  }
  if (r.lambda_param >= -tol) {
    const double quantum = basis.hbar * basis.omega;
    const int m = static_cast<int>(std::lround(2.0 * std::sqrt(std::max(r.lambda_param, 0.0)) / quantum));
    const int n = static_cast<int>(std::lround(r.vertex / quantum - 0.5 - 0.5 * m));
    const bool vertex_ok = std::abs(r.vertex - quantum * (n + 0.5 + 0.5 * m)) <= tol;
    const bool lambda_ok = std::abs(r.lambda_param - quantum * quantum * m * m / 4.0) <= tol;
    if (n >= 0 && vertex_ok && lambda_ok) r.resonance = Resonance{n, m, m == 0};
  }
  return r;
}

namespace {

constexpr struct {
  CatastropheFamily family;
  std::string_view name;
} kCatastropheNames[] = {
    {CatastropheFamily::a_plus, "A+"},   {CatastropheFamily::a_minus, "A-"},
    {CatastropheFamily::d_plus, "D+"},   {CatastropheFamily::d_minus, "D-"},
    {CatastropheFamily::e6_plus, "E+6"}, {CatastropheFamily::e6_minus, "E-6"},
    {CatastropheFamily::e7, "E7"},       {CatastropheFamily::e8, "E8"},
};

}  // namespace

std::string_view to_string(CatastropheFamily family) {
  for (const auto& e : kCatastropheNames)
    if (e.family == family) return e.name;
  return "unknown";
}

CatastropheFamily catastrophe_from_string(std::string_view name) {
  for (const auto& e : kCatastropheNames)
    if (e.name == name) return e.family;
  throw DomainError("unknown catastrophe family '" + std::string(name) + "'");
}

int control_count(CatastropheFamily family, int order) {
  switch (family) {
    case CatastropheFamily::a_plus:
    case CatastropheFamily::a_minus:
    case CatastropheFamily::d_plus:
    case CatastropheFamily::d_minus:
      return order - 1;
    case CatastropheFamily::e6_plus:
    case CatastropheFamily::e6_minus:
      return 5;
    case CatastropheFamily::e7:
      return 6;
    case CatastropheFamily::e8:
      return 7;
  }
  return 0;
}

int core_variables(CatastropheFamily family) {
  return family == CatastropheFamily::a_plus || family == CatastropheFamily::a_minus ? 1 : 2;
}

CanonicalPotential make_canonical_potential(CatastropheFamily family, int order,
                                           std::vector<double> controls, int variable_count) {
  switch (family) {
    case CatastropheFamily::a_plus:
    case CatastropheFamily::a_minus:
      if (order < 2) throw DomainError("A family requires n >= 2");
      break;
    case CatastropheFamily::d_plus:
    case CatastropheFamily::d_minus:
      if (order < 4) throw DomainError("D family requires n >= 4");
      break;
    case CatastropheFamily::e6_plus:
    case CatastropheFamily::e6_minus:
      order = 6;
      break;
    case CatastropheFamily::e7:
      order = 7;
      break;
    case CatastropheFamily::e8:
      order = 8;
      break;
  }
  const int expected = control_count(family, order);
  if (static_cast<int>(controls.size()) != expected) {
    throw DomainError(std::string(to_string(family)) + std::to_string(order) + " expects " +
                      std::to_string(expected) + " control parameters, got " +
                      std::to_string(controls.size()));
  }
  if (variable_count < core_variables(family)) {
    throw DomainError("variable count below the family's core variables");
  }
  return CanonicalPotential{family, order, std::move(controls), variable_count};
}

double canonical_potential(const CanonicalPotential& spec, std::span<const double> x) {
  if (static_cast<int>(x.size()) != spec.variable_count) {
    throw DimensionError("canonical_potential: point has " + std::to_string(x.size()) +
                         " coordinates, expected " + std::to_string(spec.variable_count));
  }
  const auto& a = spec.controls;  // a[j - 1] holds a_j
  const int n = spec.order;
  const double x1 = x[0];
  const double x2 = x.size() > 1 ? x[1] : 0.0;
  double v0 = 0.0;
  switch (spec.family) {
    case CatastropheFamily::a_plus:
    case CatastropheFamily::a_minus: {
      const double sign = spec.family == CatastropheFamily::a_plus ? 1.0 : -1.0;
      v0 = sign * ipow(x1, n + 1);
      for (int j = 1; j <= n - 1; ++j) v0 += a[j - 1] * ipow(x1, j);
      break;
    }
    case CatastropheFamily::d_plus:
    case CatastropheFamily::d_minus: {
      const double sign = spec.family == CatastropheFamily::d_plus ? 1.0 : -1.0;
      v0 = x1 * x1 * x2 + sign * ipow(x2, n - 1);
      for (int j = 1; j <= n - 3; ++j) v0 += a[j - 1] * ipow(x2, j);
      for (int j = n - 2; j <= n - 1; ++j) v0 += a[j - 1] * ipow(x1, j - (n - 3));
      break;
    }
    case CatastropheFamily::e6_plus:
    case CatastropheFamily::e6_minus: {
      const double sign = spec.family == CatastropheFamily::e6_plus ? 1.0 : -1.0;
      v0 = ipow(x1, 3) + sign * ipow(x2, 4);
      for (int j = 1; j <= 2; ++j) v0 += a[j - 1] * ipow(x2, j);
      for (int j = 3; j <= 5; ++j) v0 += a[j - 1] * x1 * ipow(x2, j - 3);
      break;
    }
    case CatastropheFamily::e7:
      v0 = ipow(x1, 3) + x1 * ipow(x2, 3);
      for (int j = 1; j <= 4; ++j) v0 += a[j - 1] * ipow(x2, j);
      for (int j = 5; j <= 6; ++j) v0 += a[j - 1] * x1 * ipow(x2, j - 5);
      break;
    case CatastropheFamily::e8:
      v0 = ipow(x1, 3) + ipow(x2, 5);
      for (int j = 1; j <= 3; ++j) v0 += a[j - 1] * ipow(x2, j);
      for (int j = 4; j <= 7; ++j) v0 += a[j - 1] * x1 * ipow(x2, j - 4);
      break;
  }
  double quadratic = 0.0;
  for (std::size_t l = static_cast<std::size_t>(core_variables(spec.family)); l < x.size(); ++l) {
    quadratic += x[l] * x[l];
  }
  return v0 + quadratic;
}

namespace {

struct FiniteDifferences {
  const ScalarField& f;
  int dims;

  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const {
    Eigen::VectorXd g(dims);
    Eigen::VectorXd xp = x, xm = x;
    for (int i = 0; i < dims; ++i) {
      const double h = 1e-5 * std::max(1.0, std::abs(x(i)));
      xp(i) = x(i) + h;
      xm(i) = x(i) - h;
      g(i) = (eval(xp) - eval(xm)) / (2.0 * h);
      xp(i) = xm(i) = x(i);
    }
    return g;
  }

  Eigen::MatrixXd hessian(const Eigen::VectorXd& x) const {
    Eigen::MatrixXd hs(dims, dims);
    const double f0 = eval(x);
    for (int i = 0; i < dims; ++i) {
      const double hi = 1e-4 * std::max(1.0, std::abs(x(i)));
      for (int j = i; j < dims; ++j) {
        const double hj = 1e-4 * std::max(1.0, std::abs(x(j)));
        if (i == j) {
          Eigen::VectorXd p = x, m = x;
          p(i) += hi;
          m(i) -= hi;
          hs(i, i) = (eval(p) - 2.0 * f0 + eval(m)) / (hi * hi);
        } else {
          Eigen::VectorXd pp = x, pm = x, mp = x, mm = x;
          pp(i) += hi; pp(j) += hj;
          pm(i) += hi; pm(j) -= hj;
          mp(i) -= hi; mp(j) += hj;
          mm(i) -= hi; mm(j) -= hj;
          hs(i, j) = hs(j, i) = (eval(pp) - eval(pm) - eval(mp) + eval(mm)) / (4.0 * hi * hj);
        }
      }
    }
    return hs;
  }

  double eval(const Eigen::VectorXd& x) const {
    return f(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
  }
};

bool inside(const Eigen::VectorXd& x, const std::vector<Interval>& box) {
  for (std::size_t i = 0; i < box.size(); ++i) {
    const double slack = 1e-9 * std::max(1.0, box[i].hi - box[i].lo);
    if (x(static_cast<Eigen::Index>(i)) < box[i].lo - slack || x(static_cast<Eigen::Index>(i)) > box[i].hi + slack) {
      return false;
    }
  }
  return true;
}

}  // namespace

std::vector<CriticalPoint> critical_points(const ScalarField& potential, const std::vector<Interval>& box,
                                           int grid, double refine_tol) {
  const int dims = static_cast<int>(box.size());
  if (dims < 1 || dims > 3) throw DomainError("critical_points: dimension must be 1, 2 or 3");
  if (grid < 16) throw DomainError("critical_points: grid must have at least 16 points per axis");
  for (const auto& iv : box)
    if (!(iv.hi > iv.lo)) throw DomainError("critical_points: empty box interval");

  const FiniteDifferences fd{potential, dims};
  std::vector<double> spacing(static_cast<std::size_t>(dims));
  for (int i = 0; i < dims; ++i) spacing[static_cast<std::size_t>(i)] = (box[static_cast<std::size_t>(i)].hi - box[static_cast<std::size_t>(i)].lo) / (grid - 1);

  int total = 1;
  for (int i = 0; i < dims; ++i) total *= grid;
  auto node_point = [&](int index) {
    Eigen::VectorXd x(dims);
    for (int i = 0; i < dims; ++i) {
      const int k = index % grid;
      index /= grid;
      x(i) = box[static_cast<std::size_t>(i)].lo + k * spacing[static_cast<std::size_t>(i)];
    }
    return x;
  };
  std::vector<double> gnorm(static_cast<std::size_t>(total));
  for (int idx = 0; idx < total; ++idx) gnorm[static_cast<std::size_t>(idx)] = fd.gradient(node_point(idx)).norm();

  // Local minima of the gradient norm over the full neighbourhood.
  std::vector<int> seeds;
  for (int idx = 0; idx < total; ++idx) {
    std::vector<int> coord(static_cast<std::size_t>(dims));
    for (int i = 0, r = idx; i < dims; ++i, r /= grid) coord[static_cast<std::size_t>(i)] = r % grid;
    bool minimum = true;
    int offsets = 1;
    for (int i = 0; i < dims; ++i) offsets *= 3;
    for (int o = 0; o < offsets && minimum; ++o) {
      int neighbour = 0, stride = 1, r = o;
      bool valid = true, self = true;
      for (int i = 0; i < dims; ++i) {
        const int delta = r % 3 - 1;
        r /= 3;
        const int c = coord[static_cast<std::size_t>(i)] + delta;
        if (delta != 0) self = false;
        if (c < 0 || c >= grid) valid = false;
        neighbour += c * stride;
        stride *= grid;
      }
      if (!valid || self) continue;
      if (gnorm[static_cast<std::size_t>(neighbour)] < gnorm[static_cast<std::size_t>(idx)]) minimum = false;
    }
    if (minimum) seeds.push_back(idx);
  }

  std::vector<CriticalPoint> found;
  const double merge_distance = 0.5 * *std::min_element(spacing.begin(), spacing.end());
  for (int seed : seeds) {
    Eigen::VectorXd x = node_point(seed);
    Eigen::VectorXd g = fd.gradient(x);
    for (int it = 0; it < 200 && g.norm() > 0.0; ++it) {
      const Eigen::MatrixXd hs = fd.hessian(x);
      const Eigen::VectorXd step = hs.completeOrthogonalDecomposition().solve(g);
      double alpha = 1.0;
      Eigen::VectorXd next = x - step;
      Eigen::VectorXd g_next = fd.gradient(next);
      for (int halvings = 0; halvings < 30 && !(g_next.norm() < g.norm()); ++halvings) {
        alpha *= 0.5;
        next = x - alpha * step;
        g_next = fd.gradient(next);
      }
      if (!(g_next.norm() < g.norm())) break;
      const double moved = (next - x).norm();
      x = next;
      g = g_next;
      if (moved <= 1e-14 * (1.0 + x.norm())) break;
    }
    if (!(g.norm() <= refine_tol) || !inside(x, box)) continue;

    CriticalPoint cp;
    cp.point.assign(x.data(), x.data() + x.size());
    cp.value = fd.eval(x);
    cp.gradient_norm = g.norm();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(fd.hessian(x));
    const Eigen::VectorXd ev = eig.eigenvalues();
    const double zero_band = 1e-4 * std::max(1.0, ev.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
      if (ev(i) > zero_band) ++cp.positive;
      else if (ev(i) < -zero_band) ++cp.negative;
      else ++cp.zero;
    }
    bool merged = false;
    for (auto& existing : found) {
      double dist2 = 0.0;
      for (int i = 0; i < dims; ++i) {
        const double dx = existing.point[static_cast<std::size_t>(i)] - cp.point[static_cast<std::size_t>(i)];
        dist2 += dx * dx;
      }
      if (std::sqrt(dist2) <= merge_distance) {
        if (cp.gradient_norm < existing.gradient_norm) existing = cp;
        merged = true;
        break;
      }
    }
    if (!merged) found.push_back(std::move(cp));
  }
  std::sort(found.begin(), found.end(),
            [](const CriticalPoint& a, const CriticalPoint& b) { return a.point < b.point; });
  return found;
}

}  // namespace liouville
