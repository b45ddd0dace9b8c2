#pragma once

// Eigenvalue counting and lowest eigenpairs of large sparse symmetric matrices.

#include <utility>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace slat::sparse {

using SpMat = Eigen::SparseMatrix<double>;

/// [lo, hi] containing every eigenvalue.
std::pair<double, double> gershgorin(const SpMat& h);

/// Number of eigenvalues strictly below sigma, from the inertia of an LDL^T
/// factorization of h - sigma. Throws InternalError if a pivot vanishes.
Eigen::Index count_below(const SpMat& h, double sigma);

struct EigenPairs {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns
};

/// The k lowest eigenpairs. Shift-invert Lanczos with full reorthogonalization,
/// shifted below the Gershgorin interval; converged pairs are locked and the
/// search is repeated in their complement until the inertia count below the
/// largest value agrees, so repeated eigenvalues are not lost.
/// Pairs satisfy ||h v - l v|| <= tol * max(1, |l|).
EigenPairs lowest(const SpMat& h, Eigen::Index k, double tol = 1e-9);

/// All eigenpairs strictly below level.
EigenPairs below(const SpMat& h, double level, double tol = 1e-9);

}  // namespace slat::sparse
