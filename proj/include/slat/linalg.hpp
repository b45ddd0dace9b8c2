#pragma once

// Thin LAPACK wrappers for the dense factorizations used across modules.

#include <complex>

#include <Eigen/Dense>

namespace slat::linalg {

/// Singular values (descending) and thin left singular vectors of a.
void svd_left(const Eigen::MatrixXd& a, Eigen::VectorXd& s, Eigen::MatrixXd& u);
void svd_left(const Eigen::MatrixXcd& a, Eigen::VectorXd& s, Eigen::MatrixXcd& u);

/// Eigenvalues (ascending) of a real symmetric matrix; eigenvectors in the
/// columns of *v when v is non-null. Only the lower triangle is read.
void eigh(const Eigen::MatrixXd& a, Eigen::VectorXd& w, Eigen::MatrixXd* v);

}  // namespace slat::linalg
