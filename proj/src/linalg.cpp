#include "slat/linalg.hpp"

#include <lapacke.h>

#include <string>

#include "slat/errors.hpp"

namespace slat::linalg {

namespace {

lapack_int as_int(Eigen::Index n) { return static_cast<lapack_int>(n); }

void check(lapack_int info, const char* what) {
  if (info != 0) throw InternalError(std::string(what) + " failed with info " + std::to_string(info));
}

}  // namespace

void svd_left(const Eigen::MatrixXd& a, Eigen::VectorXd& s, Eigen::MatrixXd& u) {
  const Eigen::Index m = a.rows(), n = a.cols(), k = std::min(m, n);
  s.resize(k);
  u.resize(m, k);
  if (k == 0) return;
  Eigen::MatrixXd w = a;
  Eigen::MatrixXd vt(k, n);
  lapack_int info = LAPACKE_dgesdd(LAPACK_COL_MAJOR, 'S', as_int(m), as_int(n), w.data(), as_int(m), s.data(),
                                   u.data(), as_int(m), vt.data(), as_int(k));
  if (info != 0) {
    // divide and conquer can fail to converge; the QR iteration is slower but sturdier
    w = a;
    Eigen::VectorXd superb(k);
    info = LAPACKE_dgesvd(LAPACK_COL_MAJOR, 'S', 'N', as_int(m), as_int(n), w.data(), as_int(m), s.data(), u.data(),
                          as_int(m), vt.data(), 1, superb.data());
  }
  check(info, "dgesvd");
}

void svd_left(const Eigen::MatrixXcd& a, Eigen::VectorXd& s, Eigen::MatrixXcd& u) {
  const Eigen::Index m = a.rows(), n = a.cols(), k = std::min(m, n);
  s.resize(k);
  u.resize(m, k);
  if (k == 0) return;
  Eigen::MatrixXcd w = a;
  Eigen::VectorXd superb(k);
  Eigen::MatrixXcd vt(1, 1);
  const lapack_int info =
      LAPACKE_zgesvd(LAPACK_COL_MAJOR, 'S', 'N', as_int(m), as_int(n), reinterpret_cast<lapack_complex_double*>(w.data()),
                     as_int(m), s.data(), reinterpret_cast<lapack_complex_double*>(u.data()), as_int(m),
                     reinterpret_cast<lapack_complex_double*>(vt.data()), 1, superb.data());
  check(info, "zgesvd");
}

void eigh(const Eigen::MatrixXd& a, Eigen::VectorXd& w, Eigen::MatrixXd* v) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw InvalidArgument("eigh: matrix is not square");
  w.resize(n);
  if (n == 0) {
    if (v) v->resize(0, 0);
    return;
  }
  Eigen::MatrixXd work = a;
  const lapack_int info =
      LAPACKE_dsyevd(LAPACK_COL_MAJOR, v ? 'V' : 'N', 'L', as_int(n), work.data(), as_int(n), w.data());
  check(info, "dsyevd");
  if (v) *v = std::move(work);
}

}  // namespace slat::linalg
