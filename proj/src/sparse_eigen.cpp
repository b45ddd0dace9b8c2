#include "slat/sparse_eigen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include <Eigen/SparseCholesky>

#include "slat/errors.hpp"
#include "slat/linalg.hpp"

namespace slat::sparse {

namespace {

constexpr Eigen::Index kMaxBasis = 200;

SpMat shift(const SpMat& h, double sigma) {
  SpMat s = h;
  for (Eigen::Index i = 0; i < h.rows(); ++i) s.coeffRef(i, i) -= sigma;
  return s;
}

class ShiftInvert {
 public:
  explicit ShiftInvert(const SpMat& h) : h_(h) {
    const auto [lo, hi] = gershgorin(h);
    sigma_ = lo - 1e-3 * std::max(1.0, hi - lo);
    llt_.compute(shift(h, sigma_));
    if (llt_.info() != Eigen::Success) throw InternalError("sparse eigensolver: Cholesky factorization failed");
  }

  // Up to `want` lowest converged pairs in the orthogonal complement of `locked`.
  EigenPairs run(const Eigen::MatrixXd& locked, Eigen::Index want, double tol, std::uint64_t seed) const {
    const Eigen::Index n = h_.rows();
    const Eigen::Index room = n - locked.cols();
    const Eigen::Index m_max = std::min(room, std::max(kMaxBasis, 2 * want + 20));
    Eigen::MatrixXd q(n, m_max);
    std::vector<double> alpha, beta;
    auto deflate = [&](Eigen::VectorXd& w, Eigen::Index cols) {
      for (int pass = 0; pass < 2; ++pass) {
        if (locked.cols() > 0) w -= locked * (locked.transpose() * w);
        w -= q.leftCols(cols) * (q.leftCols(cols).transpose() * w);
      }
    };
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    Eigen::VectorXd v(n);
    for (auto& e : v) e = gauss(rng);
    deflate(v, 0);
    q.col(0) = v.normalized();

    for (Eigen::Index j = 0; j < m_max; ++j) {
      Eigen::VectorXd w = llt_.solve(q.col(j));
      alpha.push_back(q.col(j).dot(w));
      deflate(w, j + 1);
      const double b = w.norm();
      const Eigen::Index m = j + 1;
      const bool exhausted = b <= 1e-13 * std::abs(alpha.front()) || m == m_max;
      if (m % 10 == 0 || exhausted) {
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
        for (Eigen::Index i = 0; i < m; ++i) {
          t(i, i) = alpha[static_cast<std::size_t>(i)];
          if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
        }
        Eigen::VectorXd theta;
        Eigen::MatrixXd s;
        linalg::eigh(t, theta, &s);
        // largest Ritz values of the inverse belong to the lowest eigenvalues of h
        const Eigen::Index k = std::min(want, m);
        EigenPairs out{Eigen::VectorXd(k), Eigen::MatrixXd(n, k)};
        Eigen::Index good = 0;
        for (Eigen::Index i = 0; i < k; ++i) {
          const Eigen::Index c = m - 1 - i;
          const double val = sigma_ + 1.0 / theta(c);
          Eigen::VectorXd vec = q.leftCols(m) * s.col(c);
          vec.normalize();
          if ((h_ * vec - val * vec).norm() > tol * std::max(1.0, std::abs(val))) break;
          out.values(good) = val;
          out.vectors.col(good) = vec;
          ++good;
        }
        if (good == want || exhausted) {
          out.values.conservativeResize(good);
          out.vectors.conservativeResize(n, good);
          return out;
        }
      }
      beta.push_back(b);
      q.col(j + 1) = w / b;
    }
    throw InternalError("sparse eigensolver: unreachable");
  }

 private:
  const SpMat& h_;
  double sigma_ = 0.0;
  Eigen::SimplicialLLT<SpMat, Eigen::Lower, Eigen::AMDOrdering<int>> llt_;
};

EigenPairs sorted(EigenPairs p) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(p.values.size()));
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return p.values(a) < p.values(b); });
  EigenPairs out{Eigen::VectorXd(p.values.size()), Eigen::MatrixXd(p.vectors.rows(), p.values.size())};
  for (std::size_t i = 0; i < idx.size(); ++i) {
    out.values(static_cast<Eigen::Index>(i)) = p.values(idx[i]);
    out.vectors.col(static_cast<Eigen::Index>(i)) = p.vectors.col(idx[i]);
  }
  return out;
}

void append(EigenPairs& acc, const EigenPairs& more) {
  const Eigen::Index a = acc.values.size(), b = more.values.size();
  acc.values.conservativeResize(a + b);
  acc.values.tail(b) = more.values;
  acc.vectors.conservativeResize(more.vectors.rows(), a + b);
  acc.vectors.rightCols(b) = more.vectors;
}

// Locks pairs until `target(found)` reports that nothing is missing.
template <class Target>
EigenPairs search(const SpMat& h, Eigen::Index want, double tol, Target missing) {
  const ShiftInvert op(h);
  EigenPairs acc{Eigen::VectorXd(0), Eigen::MatrixXd(h.rows(), 0)};
  for (std::uint64_t round = 0; round < 50; ++round) {
    const Eigen::Index need = missing(acc, want);
    if (need == 0) return acc;
    const EigenPairs more = op.run(acc.vectors, need, tol, 7 + round);
    if (more.values.size() == 0) throw InternalError("sparse eigensolver: no converged pair");
    append(acc, more);
    acc = sorted(std::move(acc));
  }
  throw InternalError("sparse eigensolver: locking did not terminate");
}

}  // namespace

std::pair<double, double> gershgorin(const SpMat& h) {
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(h.rows());
  Eigen::VectorXd rad = Eigen::VectorXd::Zero(h.rows());
  for (Eigen::Index j = 0; j < h.outerSize(); ++j)
    for (SpMat::InnerIterator it(h, j); it; ++it) {
      if (it.row() == it.col()) diag(it.row()) += it.value();
      else rad(it.row()) += std::abs(it.value());
    }
  return {(diag - rad).minCoeff(), (diag + rad).maxCoeff()};
}

Eigen::Index count_below(const SpMat& h, double sigma) {
  Eigen::SimplicialLDLT<SpMat, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt(shift(h, sigma));
  if (ldlt.info() != Eigen::Success) throw InternalError("count_below: LDL^T factorization failed");
  const Eigen::VectorXd d = ldlt.vectorD();
  Eigen::Index neg = 0;
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (d(i) == 0.0 || !std::isfinite(d(i))) throw InternalError("count_below: singular pivot at shift " + std::to_string(sigma));
    if (d(i) < 0.0) ++neg;
  }
  return neg;
}

EigenPairs lowest(const SpMat& h, Eigen::Index k, double tol) {
  if (k < 0 || k > h.rows()) throw InvalidArgument("lowest: k out of range");
  if (k == 0) return {Eigen::VectorXd(0), Eigen::MatrixXd(h.rows(), 0)};
  EigenPairs out = search(h, k, tol, [&](const EigenPairs& acc, Eigen::Index want) -> Eigen::Index {
    if (acc.values.size() < want) return want - acc.values.size();
    // every eigenvalue strictly below the k-th found one must have been found
    const double top = acc.values(want - 1);
    const double level = top - 1e-7 * std::max(1.0, std::abs(top));
    const Eigen::Index have = (acc.values.array() < level).count();
    const Eigen::Index truth = count_below(h, level);
    return truth > have ? truth - have : 0;
  });
  out.values.conservativeResize(k);
  out.vectors.conservativeResize(h.rows(), k);
  return out;
}

EigenPairs below(const SpMat& h, double level, double tol) {
  const Eigen::Index c = count_below(h, level);
  EigenPairs out = search(h, c, tol, [&](const EigenPairs& acc, Eigen::Index want) -> Eigen::Index {
    const Eigen::Index have = (acc.values.array() < level).count();
    return want > have ? want - have : 0;
  });
  const Eigen::Index keep = (out.values.array() < level).count();
  out.values.conservativeResize(keep);
  out.vectors.conservativeResize(h.rows(), keep);
  return out;
}

}  // namespace slat::sparse
