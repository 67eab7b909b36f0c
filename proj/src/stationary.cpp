#include "liouville/stationary.hpp"

#include <algorithm>
#include <cmath>

#include "liouville/errors.hpp"

namespace liouville {
namespace {

double frobenius(const OperatorMatrix& a) { return a.norm(); }

double operator_norm(const OperatorMatrix& h) {
  if (h.size() == 0) return 0.0;
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(h);
  return svd.singularValues()(0);
}

// Orthonormalizes hermitian candidates with real coefficients (modified
// Gram-Schmidt, two passes). Inner products of hermitian matrices are real, so
// every kept vector stays hermitian.
std::vector<Eigen::VectorXcd> hermitian_orthonormalize(const std::vector<Eigen::VectorXcd>& candidates,
                                                       std::size_t limit) {
  std::vector<Eigen::VectorXcd> kept;
  for (const auto& c : candidates) {
    if (kept.size() == limit) break;
    const double c_norm = c.norm();
    if (c_norm == 0.0) continue;
    Eigen::VectorXcd w = c / c_norm;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& u : kept) w -= u.dot(w).real() * u;
    const double w_norm = w.norm();
    if (w_norm > 1e-8) kept.push_back(w / w_norm);
  }
  return kept;
}

Eigen::VectorXcd adjoint_of(const Eigen::VectorXcd& v, int d) {
  Eigen::VectorXcd out(v.size());
  for (int x = 0; x < d; ++x)
    for (int xp = 0; xp < d; ++xp) out(x * d + xp) = std::conj(v(xp * d + x));
  return out;
}

std::optional<int> identify_level(const DensityState& s, const OperatorMatrix& h, double energy) {
  const auto d = s.matrix.rows();
  for (Eigen::Index n = 0; n < d; ++n) {
    if (std::abs(s.matrix(n, n) - cplx(1.0)) < 1e-6 &&
        std::abs(h(n, n).real() - energy) <= 1e-8 * std::max(1.0, std::abs(energy))) {
      return static_cast<int>(n);
    }
  }
  return std::nullopt;
}

}  // namespace

DensityState classify_state(const LiouvilleVector& v, double tol) {
  DensityState s;
  const OperatorMatrix a = devectorize(v);
  const cplx trace = a.trace();
  s.trace_defect = std::abs(trace - cplx(1.0));
  s.normalizable = std::abs(trace) > 1e-10 * std::max(frobenius(a), 1e-300);
  s.matrix = s.normalizable ? OperatorMatrix(a / trace) : a;
  s.hermiticity_defect = hermiticity_defect(s.matrix);
  const OperatorMatrix herm = 0.5 * (s.matrix + s.matrix.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(herm, Eigen::EigenvaluesOnly);
  s.min_eigenvalue = eig.eigenvalues()(0);
  const OperatorMatrix sq = s.matrix * s.matrix;
  s.purity = sq.trace().real();
  s.is_pure = s.normalizable && frobenius(sq - s.matrix) <= tol;
  return s;
}

std::optional<double> state_energy(const LiouvilleVector& v, const OperatorMatrix& h) {
  const OperatorMatrix a = devectorize(v);
  if (h.rows() != a.rows()) throw DimensionError("state_energy: dimension mismatch");
  const cplx trace = a.trace();
  if (std::abs(trace) <= 1e-10 * frobenius(a)) return std::nullopt;
  return ((h * a).trace() / trace).real();
}

EigenprojectorCheck verify_eigenprojector(const LiouvilleVector& v, const OperatorMatrix& h,
                                          double tol) {
  const OperatorMatrix a = devectorize(v);
  if (h.rows() != a.rows()) throw DimensionError("verify_eigenprojector: dimension mismatch");
  const double a_norm = frobenius(a);
  EigenprojectorCheck check;
  if (a_norm == 0.0) return check;
  const OperatorMatrix ha = h * a;
  const OperatorMatrix ah = a * h;
  if (const auto e = state_energy(v, h)) {
    check.energy = *e;
  } else {
    check.energy = (a.adjoint() * ha).trace().real() / (a_norm * a_norm);
  }
  check.left_residual = frobenius(ha - check.energy * a) / a_norm;
  check.right_residual = frobenius(ah - check.energy * a) / a_norm;
  check.lie_residual = frobenius(ha - ah) / a_norm;
  const double bound = tol * operator_norm(h);
  check.is_eigenprojector = check.left_residual <= bound && check.right_residual <= bound;
  return check;
}

namespace {

// The kernel dimension comes from the unscaled SVD; the basis itself is
// recomputed from the column-equilibrated matrix, whose backward error no
// longer scales with the largest columns.
std::vector<Eigen::VectorXcd> equilibrated_kernel(const Eigen::MatrixXcd& m, const std::vector<Eigen::VectorXcd>& raw,
                                                  double tol) {
  const Eigen::VectorXd colnorm = m.colwise().norm();
  const double floor = tol * colnorm.maxCoeff();
  if (!(floor > 0.0)) return raw;
  const Eigen::VectorXd scale = colnorm.cwiseMax(floor).cwiseInverse();
  const Eigen::MatrixXcd scaled = m * scale.asDiagonal();
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(scaled, Eigen::ComputeFullV);
  if (svd.info() != Eigen::Success) return raw;
  const auto k = static_cast<Eigen::Index>(raw.size());
  const Eigen::Index n = scaled.cols();
  Eigen::MatrixXcd basis = scale.cast<cplx>().asDiagonal() * svd.matrixV().rightCols(k);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(basis);
  basis = qr.householderQ() * Eigen::MatrixXcd::Identity(n, k);

  double raw_worst = 0.0, new_worst = 0.0;
  for (const auto& v : raw) raw_worst = std::max(raw_worst, (m * v).norm());
  for (Eigen::Index i = 0; i < k; ++i) new_worst = std::max(new_worst, (m * basis.col(i)).norm());
  if (new_worst > std::max(10.0 * raw_worst, 1e-15 * colnorm.maxCoeff())) return raw;
  std::vector<Eigen::VectorXcd> out;
  for (Eigen::Index i = 0; i < k; ++i) out.emplace_back(basis.col(i));
  return out;
}

}  // namespace

KernelSize null_dimension(const SuperOperator& lambda, double tol, const std::string& generator_id) {
  if (!(tol > 0.0)) throw DomainError("null_dimension: tolerance must be positive");
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(lambda.matrix());
  if (svd.info() != Eigen::Success || !svd.singularValues().allFinite()) {
    throw NumericalBreakdown(generator_id, "singular value decomposition failed");
  }
  const Eigen::VectorXd& sv = svd.singularValues();
  KernelSize k;
  k.sigma_max = sv.size() ? sv(0) : 0.0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) <= tol * k.sigma_max) ++k.dimension;
  return k;
}

NullSpace null_space(const SuperOperator& lambda, double tol, const std::string& generator_id) {
  if (!(tol > 0.0)) throw DomainError("null_space: tolerance must be positive");
  const int d = lambda.dim();
  const Eigen::MatrixXcd& m = lambda.matrix();
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullV);
  if (svd.info() != Eigen::Success || !svd.singularValues().allFinite()) {
    throw NumericalBreakdown(generator_id, "singular value decomposition failed");
  }
  NullSpace ns;
  const Eigen::VectorXd& sv = svd.singularValues();
  ns.sigma_max = sv.size() ? sv(0) : 0.0;
  ns.threshold = tol * ns.sigma_max;

  std::vector<Eigen::VectorXcd> raw;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) <= ns.threshold) raw.emplace_back(svd.matrixV().col(i));
  }
  if (raw.empty()) return ns;
  raw = equilibrated_kernel(m, raw, tol);

  std::vector<Eigen::VectorXcd> candidates;
  candidates.reserve(2 * raw.size());
  for (const auto& v : raw) {
    const Eigen::VectorXcd vdag = adjoint_of(v, d);
    candidates.emplace_back(0.5 * (v + vdag));
    candidates.emplace_back(cplx(0.0, -0.5) * (v - vdag));
  }
  auto herm = hermitian_orthonormalize(candidates, raw.size());
  const double accept = 10.0 * std::max(ns.threshold, 1e-14 * ns.sigma_max);
  const bool closed = herm.size() == raw.size() &&
                      std::all_of(herm.begin(), herm.end(), [&](const Eigen::VectorXcd& u) {
                        return (m * u).norm() <= accept;
                      });
  const auto& chosen = closed ? herm : raw;
  for (const auto& u : chosen) {
    NullVector nv{LiouvilleVector(u), closed, false};
    nv.trace_class = std::abs(trace_functional(nv.vector)) > 1e-8;
    ns.basis.push_back(std::move(nv));
  }
  return ns;
}

double null_space_overlap(const NullSpace& space, int dim, int level) {
  double total = 0.0;
  for (const auto& nv : space.basis) total += std::norm(nv.vector(level, level));
  (void)dim;
  return total;
}

std::vector<ScanEntry> fock_scan(const SuperOperator& lambda, const FockBasis& basis,
                                 double guard_fraction) {
  return fock_scan(lambda, basis, guard_fraction, spectral_norm(lambda));
}

std::vector<ScanEntry> fock_scan(const SuperOperator& lambda, const FockBasis& basis,
                                 double guard_fraction, double lambda_norm) {
  if (lambda.dim() != basis.dim) throw DimensionError("fock_scan: basis dimension mismatch");
  const int cutoff = guard_cutoff(basis.dim, guard_fraction);
  const int d = basis.dim;
  std::vector<ScanEntry> scan;
  scan.reserve(static_cast<std::size_t>(cutoff));
  for (int n = 0; n < cutoff; ++n) {
    // Lambda |n><n|) is the column at flattened index (n, n).
    const double col = lambda.matrix().col(n * d + n).norm();
    scan.push_back({n, level_energy(basis, n), lambda_norm > 0.0 ? col / lambda_norm : col});
  }
  return scan;
}

std::vector<int> stationary_levels(const std::vector<ScanEntry>& scan, double tol) {
  std::vector<int> levels;
  for (const auto& e : scan)
    if (e.residual <= tol) levels.push_back(e.level);
  return levels;
}

std::vector<double> condition_sc_roots(const BuiltGenerator& gen, const std::vector<double>& energy_grid,
                                       double tol) {
  std::vector<double> grid = energy_grid;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  if (gen.n_functions.empty() || grid.empty()) return {};

  auto worst = [&](double e) {
    double w = 0.0;
    for (const auto& f : gen.n_functions) w = std::max(w, std::abs(f(e)));
    return w;
  };

  std::vector<std::pair<double, double>> found;  // (energy, worst |N|)
  for (double e : grid) {
    const double w = worst(e);
    if (w <= tol) found.emplace_back(e, w);
  }
  for (const auto& f : gen.n_functions) {
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
      double lo = grid[i], hi = grid[i + 1];
      double f_lo = f(lo).real();
      const double f_hi = f(hi).real();
      if (!(f_lo * f_hi < 0.0)) continue;
      for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = f(mid).real();
        if (f_mid == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((f_mid < 0.0) == (f_lo < 0.0)) {
          lo = mid;
          f_lo = f_mid;
        } else {
          hi = mid;
        }
      }
      const double root = std::abs(f(lo)) <= std::abs(f(hi)) ? lo : hi;
      const double w = worst(root);
      if (w <= tol) found.emplace_back(root, w);
    }
  }
  std::sort(found.begin(), found.end());
  std::vector<std::pair<double, double>> merged;
  for (const auto& r : found) {
    if (!merged.empty() && std::abs(r.first - merged.back().first) <= 1e-9 * std::max(1.0, std::abs(r.first))) {
      if (r.second < merged.back().second) merged.back() = r;
      continue;
    }
    merged.push_back(r);
  }
  std::vector<double> roots;
  for (const auto& r : merged) roots.push_back(r.first);
  return roots;
}

std::vector<double> default_energy_grid(const FockBasis& basis, double guard_fraction, int points) {
  const int cutoff = guard_cutoff(basis.dim, guard_fraction);
  std::vector<double> grid;
  for (int n = 0; n < cutoff; ++n) grid.push_back(level_energy(basis, n));
  const double top = level_energy(basis, std::max(cutoff, 1)) - 0.5 * basis.hbar * basis.omega;
  for (int i = 0; i < points; ++i) grid.push_back(top * i / std::max(points - 1, 1));
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

std::vector<const StationaryState*> StationaryReport::pure_states() const {
  std::vector<const StationaryState*> out;
  for (const auto& s : states)
    if (s.state.is_pure && s.eigenprojector && s.level) out.push_back(&s);
  return out;
}

StationaryReport analyze_stationary(const BuiltGenerator& gen, const StationaryOptions& options) {
  StationaryReport report;
  report.generator_id = gen.id;
  report.basis = gen.basis;
  report.guard_fraction = options.guard_fraction;
  report.tolerance = options.tolerance;

  const NullSpace ns = null_space(gen.lambda, options.tolerance, gen.id);
  report.lambda_norm = ns.sigma_max;
  report.null_dimension = static_cast<int>(ns.basis.size());
  const int d = gen.basis.dim;
  const OperatorMatrix& h = gen.hamiltonian;

  if (!ns.basis.empty()) {
    // Ritz rotation by L^+_H inside the kernel separates eigenprojectors.
    const auto k = static_cast<Eigen::Index>(ns.basis.size());
    Eigen::MatrixXcd q(d * d, k), jq(d * d, k);
    for (Eigen::Index i = 0; i < k; ++i) {
      const auto& u = ns.basis[static_cast<std::size_t>(i)].vector;
      q.col(i) = u.entries();
      const OperatorMatrix a = devectorize(u);
      jq.col(i) = vectorize(0.5 * (h * a + a * h)).entries();
    }
    Eigen::MatrixXcd ritz = q.adjoint() * jq;
    ritz = 0.5 * (ritz + ritz.adjoint()).eval();
    const bool hermitian_basis = ns.basis.front().hermitian;
    Eigen::MatrixXcd rotated;
    if (hermitian_basis) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(ritz.real());
      rotated = q * eig.eigenvectors().cast<cplx>();
    } else {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(ritz);
      rotated = q * eig.eigenvectors();
    }
    for (Eigen::Index i = 0; i < k; ++i) {
      LiouvilleVector u(rotated.col(i));
      const cplx trace = trace_functional(u);
      StationaryState st;
      st.vector = std::abs(trace) > 1e-8 ? LiouvilleVector(u.entries() / trace) : u;
      st.state = classify_state(st.vector, options.purity_tolerance);
      st.energy = state_energy(st.vector, h);
      const double v_norm = st.vector.norm();
      st.residual = (gen.lambda.matrix() * st.vector.entries()).norm() /
                    (report.lambda_norm > 0.0 ? report.lambda_norm * v_norm : v_norm);
      st.eigenprojector = verify_eigenprojector(st.vector, h).is_eigenprojector;
      if (st.state.is_pure && st.eigenprojector && st.energy) {
        st.level = identify_level(st.state, h, *st.energy);
      }
      report.states.push_back(std::move(st));
    }
  }

  report.fock_scan = fock_scan(gen.lambda, gen.basis, options.guard_fraction, report.lambda_norm);
  if (!gen.n_functions.empty()) {
    report.sc_roots = condition_sc_roots(gen, default_energy_grid(gen.basis, options.guard_fraction),
                                         options.scan_tolerance);
  }
  const int cutoff = guard_cutoff(d, options.guard_fraction);
  for (int n = 0; n < cutoff; ++n) {
    if (null_space_overlap(ns, d, n) > 1.0 - 1e-6) report.null_space_levels.push_back(n);
  }
  return report;
}

}  // namespace liouville
