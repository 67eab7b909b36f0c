#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "liouville/hilbert.hpp"
#include "liouville/stationary.hpp"
#include "liouville/superops.hpp"

namespace liouville {

enum class PropagationMethod { eigendecomposition, scaling_and_squaring };

/// exp(t Lambda) acting on Liouville vectors. The eigendecomposition of Lambda
/// is computed once; when the eigenvector matrix has a 1-norm condition
/// estimate above `condition_limit`, every propagation instead evaluates the
/// dense exponential by scaling and squaring.
class Propagator {
 public:
  explicit Propagator(const SuperOperator& lambda, double condition_limit = 1e8);

  /// Throws NumericalBreakdown when the result is not finite (growing modes
  /// overflow for large t).
  LiouvilleVector operator()(const LiouvilleVector& rho0, double t) const;

  PropagationMethod method() const noexcept { return method_; }
  double condition_estimate() const noexcept { return condition_; }
  /// Largest real part of the eigenvalues of Lambda; NaN on the dense path.
  double growth_rate() const;

 private:
  LiouvilleVector checked(Eigen::VectorXcd v, double t) const;

  Eigen::MatrixXcd lambda_;
  Eigen::VectorXcd eigenvalues_;
  Eigen::MatrixXcd eigenvectors_;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
  PropagationMethod method_ = PropagationMethod::eigendecomposition;
  double condition_ = 1.0;
};

LiouvilleVector propagate(const SuperOperator& lambda, const LiouvilleVector& rho0, double t);

struct MonitorRow {
  double t = 0.0;
  double trace_defect = 0.0;
  double hermiticity_defect = 0.0;
  double purity = 0.0;
  double min_eigenvalue = 0.0;
  double energy = 0.0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<DensityState> states;
  std::vector<MonitorRow> monitors;
  PropagationMethod method = PropagationMethod::eigendecomposition;
  double condition_estimate = 1.0;
};

/// Propagates rho0 to every time in `times` (strictly increasing) and records
/// monitors. Energy is Re Tr(H rho(t)) when `h` is given, else 0. Monitors are
/// taken on rho(t) as propagated, without renormalization.
Trajectory trajectory(const SuperOperator& lambda, const LiouvilleVector& rho0,
                      const std::vector<double>& times, const OperatorMatrix* h = nullptr);

/// CSV with header t,trace_defect,herm_defect,purity,min_eig,energy.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

}  // namespace liouville
