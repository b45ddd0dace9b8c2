#pragma once

// Eigenanalysis of assembled Hamiltonians: HVZ onset, threshold sets, the
// rho-hat profile, Mourre and virial checks, and grid-refinement gates.

#include <limits>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "slat/euclid_model.hpp"
#include "slat/threshold_calc.hpp"

namespace slat {

/// Largest dimension handled by dense eigensolvers. Above it, spectra are
/// only available below a level, through the sparse solver.
inline constexpr Eigen::Index kDenseCap = 4000;

struct EigenSystem {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns; empty when not requested
};

/// Symmetric eigensolve. Throws InvalidArgument when m is not symmetric within
/// 1e-10 max(1, |m|), InternalError when a residual exceeds 1e-8 |m|.
EigenSystem eig_sym(const Eigen::MatrixXd& m, bool vectors = true);

/// Eigenpairs strictly below `level`; dense up to kDenseCap, sparse above.
EigenSystem eigenpairs_below(const SpMat& h, double level);
/// The k lowest eigenvalues.
Eigen::VectorXd lowest_eigenvalues(const SpMat& h, Eigen::Index k);

struct HvzReport {
  double tau = std::numeric_limits<double>::infinity();
  std::map<std::string, double> per_atom;  // min eig H_{S/X}
};

/// tau = min over atoms X of min eig(H_{S/X}); +inf when there are no atoms.
/// Throws PreconditionViolation without a least element.
HvzReport hvz_tau(const Hamiltonian& h);

/// An eigenvalue of a quotient that fell in [tau - eps, tau) and was dropped.
struct NearThreshold {
  std::string element;
  double value = 0.0;
  double tau = 0.0;
};

struct ThresholdReport {
  double eps = 0.0;
  EvMap ev;                               // ev(H_{S/X}) for X above the least element
  std::map<std::string, double> tau_sub;  // hvz_tau(H_{S/X}), +inf for maximal X
  std::vector<NearThreshold> flagged;
  ClosedPointSet thresholds;
};

/// tau(H) = union over X above the least element of the eigenvalues of
/// H_{S/X} strictly below hvz_tau(H_{S/X}) - eps. For maximal X the quotient
/// is one-dimensional and contributes its single value.
ThresholdReport threshold_set_numeric(const Hamiltonian& h, double eps);

/// 1000 uniform points over [min tau - 1, max tau + 3] together with the
/// threshold points themselves.
std::vector<double> default_lambda_grid(const ClosedPointSet& tau);

/// Direct and recursive rho-hat on the grid; InternalError if they disagree
/// by more than 1e-9.
RhoComparison rho_hat_numeric(const ThresholdReport& t, const Semilattice& s, const std::vector<double>& lambdas);

enum class MourreStatus { positive, not_positive, window_empty, inconclusive };
std::string to_string(MourreStatus s);

struct MourreReport {
  double lambda = 0.0;
  double delta = 0.0;
  Eigen::Index subspace_dim = 0;
  std::vector<double> window_eigenvalues;
  /// Lowest eigenvalue of V^T [H, iD] V with the kinetic commutator taken as K.
  double min_compressed = std::numeric_limits<double>::quiet_NaN();
  /// Same with H(iD) - (iD)H; on exact eigenvectors its diagonal vanishes.
  double min_compressed_literal = std::numeric_limits<double>::quiet_NaN();
  ExtReal rho_hat_at_lambda;
  /// 0.25 |rho_hat| plus the boundary-error estimate.
  double margin = 0.0;
  /// Largest boundary mass of a window vector times the norm of the
  /// interaction commutator.
  double boundary_error = 0.0;
  bool threshold_in_window = false;
  MourreStatus status = MourreStatus::inconclusive;
};

/// Compresses the commutator to the eigenvectors of H in [lambda - delta,
/// lambda + delta]. Positive when min_compressed is within `margin` of a
/// finite rho_hat; inconclusive when rho_hat is infinite or a threshold lies in
/// the window. Requires total_dim <= kDenseCap.
MourreReport mourre_check(const Hamiltonian& h, const ClosedPointSet& thresholds, double lambda, double delta);

struct VirialEntry {
  double eigenvalue = 0.0;
  double residual = 0.0;  // |<psi, [H, iD] psi>| with the literal commutator
  double relative = 0.0;  // residual / (|H| |D|), Frobenius norms
  double bulk = 0.0;      // |<psi, [H, iD] psi>| with the kinetic commutator taken as K
  double boundary_mass = 0.0;
  bool skipped = false;
  bool passed = false;
};

/// Fraction of |psi|^2 on grid points with some coordinate beyond 0.9 L.
double boundary_mass(const Hamiltonian& h, const Eigen::VectorXd& psi);

/// Virial residuals of the given eigenpairs. States whose boundary mass
/// exceeds `cutoff` are listed as skipped.
std::vector<VirialEntry> virial_check(const Hamiltonian& h, const EigenSystem& states, double tol = 1e-3,
                                      double cutoff = 1e-6);

struct RefinementGate {
  GridSpec coarse;
  GridSpec fine;
  /// Lowest three eigenvalues of H and of H_{S/X} for every atom X, keyed by
  /// "H" and the atom id.
  std::map<std::string, std::vector<double>> coarse_values;
  std::map<std::string, std::vector<double>> fine_values;
  double max_relative_drift = 0.0;
  double max_absolute_drift = 0.0;
  bool passed = false;  // max_relative_drift < 1%
  /// 10 times the absolute drift.
  double suggested_eps() const { return 10.0 * max_absolute_drift; }
};

/// Compares the model on its grid with the model on the refined grid.
RefinementGate refinement_gate(const ModelSpec& m);

struct BoundStates {
  double tau = 0.0;
  double eps = 0.0;
  std::vector<double> values;  // eigenvalues of H below tau - eps
  /// Every value is farther than eps from each threshold.
  bool isolated = true;
};

BoundStates bound_states(const Hamiltonian& h, double tau, double eps, const ClosedPointSet& thresholds);

}  // namespace slat
