#include "liouville/evolution.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "liouville/errors.hpp"

namespace liouville {

Propagator::Propagator(const SuperOperator& lambda, double condition_limit)
    : lambda_(lambda.matrix()) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> eig(lambda_);
  bool usable = eig.info() == Eigen::Success;
  if (usable) {
    eigenvalues_ = eig.eigenvalues();
    eigenvectors_ = eig.eigenvectors();
    lu_.compute(eigenvectors_);
    const Eigen::MatrixXcd inverse = lu_.inverse();
    // 1-norm condition number of the eigenvector matrix
    const auto one_norm = [](const Eigen::MatrixXcd& m) {
      return m.cwiseAbs().colwise().sum().maxCoeff();
    };
    condition_ = one_norm(eigenvectors_) * one_norm(inverse);
    usable = std::isfinite(condition_) && condition_ <= condition_limit;
  } else {
    condition_ = std::numeric_limits<double>::infinity();
  }
  if (!usable) {
    method_ = PropagationMethod::scaling_and_squaring;
    eigenvectors_.resize(0, 0);
    eigenvalues_.resize(0);
  }
}

LiouvilleVector Propagator::operator()(const LiouvilleVector& rho0, double t) const {
  if (!std::isfinite(t)) throw DomainError("propagate: time must be finite");
  if (rho0.dim2() != lambda_.rows()) throw DimensionError("propagate: dimension mismatch");
  if (t == 0.0) return rho0;
  if (method_ == PropagationMethod::eigendecomposition) {
    Eigen::VectorXcd coeffs = lu_.solve(rho0.entries());
    for (Eigen::Index i = 0; i < coeffs.size(); ++i) coeffs(i) *= std::exp(t * eigenvalues_(i));
    return checked(eigenvectors_ * coeffs, t);
  }
  const Eigen::MatrixXcd scaled = t * lambda_;
  const Eigen::MatrixXcd expm = scaled.exp();
  return checked(expm * rho0.entries(), t);
}

LiouvilleVector Propagator::checked(Eigen::VectorXcd v, double t) const {
  if (!v.allFinite()) {
    std::ostringstream msg;
    msg << "propagate: exp(t Lambda) overflowed at t = " << t << " (max Re eigenvalue " << growth_rate() << ")";
    throw NumericalBreakdown("", msg.str());
  }
  return LiouvilleVector(std::move(v));
}

double Propagator::growth_rate() const {
  if (eigenvalues_.size() > 0) return eigenvalues_.real().maxCoeff();
  return std::numeric_limits<double>::quiet_NaN();
}

LiouvilleVector propagate(const SuperOperator& lambda, const LiouvilleVector& rho0, double t) {
  if (t == 0.0) return rho0;
  return Propagator(lambda)(rho0, t);
}

Trajectory trajectory(const SuperOperator& lambda, const LiouvilleVector& rho0,
                      const std::vector<double>& times, const OperatorMatrix* h) {
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) throw DomainError("trajectory: times must be strictly increasing");
  }
  const Propagator prop(lambda);
  Trajectory traj;
  traj.method = prop.method();
  traj.condition_estimate = prop.condition_estimate();
  for (double t : times) {
    const LiouvilleVector rho = prop(rho0, t);
    const OperatorMatrix m = devectorize(rho);
    const OperatorMatrix herm = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(herm, Eigen::EigenvaluesOnly);
    MonitorRow row;
    row.t = t;
    row.trace_defect = std::abs(m.trace() - cplx(1.0));
    row.hermiticity_defect = hermiticity_defect(m);
    row.purity = (m * m).trace().real();
    row.min_eigenvalue = eig.eigenvalues()(0);
    row.energy = h ? ((*h) * m).trace().real() : 0.0;
    traj.times.push_back(t);
    traj.states.push_back(classify_state(rho));
    traj.monitors.push_back(row);
  }
  return traj;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << "t,trace_defect,herm_defect,purity,min_eig,energy\n" << std::setprecision(17);
  for (const auto& r : traj.monitors) {
    out << r.t << ',' << r.trace_defect << ',' << r.hermiticity_defect << ',' << r.purity << ','
        << r.min_eigenvalue << ',' << r.energy << '\n';
  }
}

}  // namespace liouville
