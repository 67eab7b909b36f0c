#pragma once

#include <optional>
#include <string>
#include <vector>

#include "liouville/generators.hpp"
#include "liouville/hilbert.hpp"
#include "liouville/superops.hpp"

namespace liouville {

/// Summary of an operator read as a density matrix. All fields except
/// trace_defect refer to the trace-normalized matrix when the trace is nonzero.
struct DensityState {
  OperatorMatrix matrix;        ///< trace-normalized when normalizable
  double trace_defect = 0.0;    ///< |Tr A - 1| of the raw input
  double hermiticity_defect = 0.0;
  double min_eigenvalue = 0.0;  ///< of the hermitian part
  double purity = 0.0;          ///< Re Tr rho^2
  bool normalizable = false;
  bool is_pure = false;         ///< ||rho^2 - rho|| <= tol after normalization
};

DensityState classify_state(const LiouvilleVector& v, double tol = 1e-8);

/// Re Tr(H rho) / Tr rho; nullopt for a (numerically) zero-trace input.
std::optional<double> state_energy(const LiouvilleVector& v, const OperatorMatrix& h);

struct EigenprojectorCheck {
  bool is_eigenprojector = false;
  double energy = 0.0;
  double left_residual = 0.0;   ///< ||L_H v - E v|| / ||v||
  double right_residual = 0.0;  ///< ||R_H v - E v|| / ||v||
  double lie_residual = 0.0;    ///< ||L^-_H v|| / ||v|| (hbar = 1 scaling)
};

/// Simultaneous-eigenvector test for L_H and R_H. E comes from state_energy,
/// or from the L_H Rayleigh quotient when the trace vanishes.
EigenprojectorCheck verify_eigenprojector(const LiouvilleVector& v, const OperatorMatrix& h,
                                          double tol = 1e-10);

struct NullVector {
  LiouvilleVector vector;   ///< unit Hilbert-Schmidt norm
  bool hermitian = false;   ///< devectorizes to a hermitian matrix
  bool trace_class = false; ///< has nonzero trace
};

struct NullSpace {
  std::vector<NullVector> basis;
  double sigma_max = 0.0;
  double threshold = 0.0;  ///< absolute singular-value cutoff used
};

/// Orthonormal basis of ker Lambda: right singular vectors with singular value
/// <= tol * sigma_max. When the kernel is closed under adjoint the basis is
/// rebuilt from hermitian matrices. Throws NumericalBreakdown on SVD failure.
NullSpace null_space(const SuperOperator& lambda, double tol = 1e-10,
                     const std::string& generator_id = "");

struct KernelSize {
  int dimension = 0;
  double sigma_max = 0.0;
};

/// Number of singular values <= tol * sigma_max, from singular values only.
KernelSize null_dimension(const SuperOperator& lambda, double tol = 1e-10,
                          const std::string& generator_id = "");

struct ScanEntry {
  int level = 0;
  double energy = 0.0;
  double residual = 0.0;  ///< ||Lambda |n><n|)|| / ||Lambda||_2
};

std::vector<ScanEntry> fock_scan(const SuperOperator& lambda, const FockBasis& basis,
                                 double guard_fraction = 0.25);
/// Same scan with a precomputed ||Lambda||_2.
std::vector<ScanEntry> fock_scan(const SuperOperator& lambda, const FockBasis& basis,
                                 double guard_fraction, double lambda_norm);

/// Energies where every |N_k(E, E)| <= tol: grid points that satisfy the
/// bound directly, plus bisection-refined roots of sign changes of Re N_k
/// between consecutive grid points. Sorted, duplicates within 1e-9 merged.
std::vector<double> condition_sc_roots(const BuiltGenerator& gen, const std::vector<double>& energy_grid,
                                       double tol = 1e-9);

/// Default grid for condition_sc_roots: all guard-band level energies plus a
/// uniform grid of `points` energies spanning [0, E_cutoff].
std::vector<double> default_energy_grid(const FockBasis& basis, double guard_fraction, int points = 2000);

struct StationaryState {
  LiouvilleVector vector;  ///< trace-normalized when trace_class, else unit norm
  DensityState state;
  std::optional<double> energy;
  double residual = 0.0;   ///< ||Lambda v|| / (||Lambda||_2 ||v||)
  std::optional<int> level;  ///< Fock level when identified as |n><n|
  bool eigenprojector = false;
};

struct StationaryReport {
  std::string generator_id;
  FockBasis basis;
  double guard_fraction = 0.25;
  double tolerance = 1e-10;
  double lambda_norm = 0.0;
  int null_dimension = 0;
  std::vector<StationaryState> states;
  std::vector<ScanEntry> fock_scan;
  std::vector<double> sc_roots;
  /// Levels whose projector lies in the null space (overlap > 1 - 1e-6).
  std::vector<int> null_space_levels;

  std::vector<const StationaryState*> pure_states() const;
};

struct StationaryOptions {
  double tolerance = 1e-10;       ///< null-space cutoff relative to sigma_max
  double guard_fraction = 0.25;
  double scan_tolerance = 1e-9;   ///< stationary threshold for scan residuals
  double purity_tolerance = 1e-8;
};

/// Full pipeline: null space, Ritz rotation by L^+_H, per-state classification,
/// Fock scan and N(E,E) roots.
StationaryReport analyze_stationary(const BuiltGenerator& gen, const StationaryOptions& options = {});

/// Squared norm of the projection of |n><n| onto the span of `space`.
double null_space_overlap(const NullSpace& space, int dim, int level);

/// Guard-band levels with scan residual <= tol.
std::vector<int> stationary_levels(const std::vector<ScanEntry>& scan, double tol);

}  // namespace liouville
