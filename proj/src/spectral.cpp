#include "slat/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "slat/errors.hpp"
#include "slat/linalg.hpp"
#include "slat/sparse_eigen.hpp"

namespace slat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double drift(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale < 1e-12 ? std::abs(a - b) : std::abs(a - b) / scale;
}

}  // namespace

EigenSystem eig_sym(const Eigen::MatrixXd& m, bool vectors) {
  if (m.rows() != m.cols()) throw InvalidArgument("eig_sym: matrix is not square");
  const double norm = m.norm();
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, norm))
    throw InvalidArgument("eig_sym: matrix is not symmetric");
  EigenSystem out;
  if (m.rows() == 0) return out;
  Eigen::MatrixXd v;
  linalg::eigh(m, out.values, &v);
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    if ((m * v.col(i) - out.values(i) * v.col(i)).norm() > 1e-8 * std::max(1.0, norm))
      throw InternalError("eig_sym: residual too large for eigenpair " + std::to_string(i));
  if (vectors) out.vectors = std::move(v);
  return out;
}

EigenSystem eigenpairs_below(const SpMat& h, double level) {
  if (h.rows() <= kDenseCap) {
    EigenSystem all = eig_sym(Eigen::MatrixXd(h));
    const Eigen::Index k = (all.values.array() < level).count();
    return {all.values.head(k), all.vectors.leftCols(k)};
  }
  if (!std::isfinite(level))
    throw InvalidArgument("full spectrum of a " + std::to_string(h.rows()) + "-dimensional operator exceeds the dense cap");
  auto p = sparse::below(h, level);
  return {std::move(p.values), std::move(p.vectors)};
}

Eigen::VectorXd lowest_eigenvalues(const SpMat& h, Eigen::Index k) {
  k = std::min(k, h.rows());
  if (h.rows() <= kDenseCap) {
    Eigen::VectorXd w;
    linalg::eigh(Eigen::MatrixXd(h), w, nullptr);
    return w.head(k);
  }
  return sparse::lowest(h, k).values;
}

HvzReport hvz_tau(const Hamiltonian& h) {
  if (!h.lattice.least()) throw PreconditionViolation("hvz_tau: the semilattice has no least element");
  HvzReport r;
  for (const auto& x : h.lattice.atoms()) {
    const double m = lowest_eigenvalues(subsystem(h, x).matrix(), 1)(0);
    r.per_atom[x] = m;
    r.tau = std::min(r.tau, m);
  }
  return r;
}

ThresholdReport threshold_set_numeric(const Hamiltonian& h, double eps) {
  const auto least = h.lattice.least();
  if (!least) throw PreconditionViolation("threshold_set_numeric: the semilattice has no least element");
  ThresholdReport r;
  r.eps = eps;
  std::vector<double> all;
  for (const auto& x : h.lattice.ids()) {
    if (x == *least) continue;
    const Hamiltonian q = subsystem(h, x);
    const double tau = q.lattice.atoms().empty() ? kInf : hvz_tau(q).tau;
    r.tau_sub[x] = tau;
    const SpMat qm = q.matrix();
    const EigenSystem below = eigenpairs_below(qm, std::isfinite(tau) ? tau : kInf);
    std::vector<double> kept;
    for (Eigen::Index i = 0; i < below.values.size(); ++i) {
      const double v = below.values(i);
      if (std::isfinite(tau) && v >= tau - eps) r.flagged.push_back({x, v, tau});
      else kept.push_back(v);
    }
    all.insert(all.end(), kept.begin(), kept.end());
    r.ev[x] = ClosedPointSet(kept);
  }
  r.thresholds = ClosedPointSet(all);
  return r;
}

std::vector<double> default_lambda_grid(const ClosedPointSet& tau) {
  const double lo = tau.empty() ? -1.0 : tau.points().front() - 1.0;
  const double hi = tau.empty() ? 3.0 : tau.points().back() + 3.0;
  std::vector<double> g;
  for (int i = 0; i < 1000; ++i) g.push_back(lo + (hi - lo) * i / 999.0);
  g.insert(g.end(), tau.points().begin(), tau.points().end());
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

RhoComparison rho_hat_numeric(const ThresholdReport& t, const Semilattice& s, const std::vector<double>& lambdas) {
  return rho_hat_both(s, t.ev, lambdas, 1e-9);
}

std::string to_string(MourreStatus s) {
  switch (s) {
    case MourreStatus::positive:
      return "positive";
    case MourreStatus::not_positive:
      return "not_positive";
    case MourreStatus::window_empty:
      return "window_empty";
    case MourreStatus::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

double boundary_mass(const Hamiltonian& h, const Eigen::VectorXd& psi) {
  const double edge = 0.9 * h.grid.half_length;
  const double total = psi.squaredNorm();
  double outer = 0.0;
  for (const auto& id : h.lattice.ids()) {
    const Eigen::Index off = h.kinetic.offset(id);
    const Axes& ax = h.axes.at(id);
    const Eigen::Index n = h.kinetic.dim(id);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto u = grid_point(i, ax.size(), h.grid);
      if (std::any_of(u.begin(), u.end(), [&](double c) { return std::abs(c) > edge; }))
        outer += psi(off + i) * psi(off + i);
    }
  }
  return total > 0.0 ? outer / total : 0.0;
}

MourreReport mourre_check(const Hamiltonian& h, const ClosedPointSet& thresholds, double lambda, double delta) {
  if (!(delta > 0.0)) throw InvalidArgument("mourre_check: delta must be positive");
  if (h.total_dim() > kDenseCap)
    throw InvalidArgument("mourre_check: dimension " + std::to_string(h.total_dim()) + " exceeds the dense cap");
  MourreReport r;
  r.lambda = lambda;
  r.delta = delta;
  r.rho_hat_at_lambda = rho_hat_from_thresholds(thresholds, lambda);
  for (double t : thresholds.points())
    if (std::abs(t - lambda) <= delta) r.threshold_in_window = true;

  const SpMat H = h.matrix();
  const EigenSystem all = eig_sym(Eigen::MatrixXd(H));
  std::vector<Eigen::Index> in;
  for (Eigen::Index i = 0; i < all.values.size(); ++i)
    if (std::abs(all.values(i) - lambda) <= delta) in.push_back(i);
  r.subspace_dim = static_cast<Eigen::Index>(in.size());
  if (in.empty()) {
    r.status = MourreStatus::window_empty;
    return r;
  }
  Eigen::MatrixXd v(H.rows(), r.subspace_dim);
  for (std::size_t c = 0; c < in.size(); ++c) {
    v.col(static_cast<Eigen::Index>(c)) = all.vectors.col(in[c]);
    r.window_eigenvalues.push_back(all.values(in[c]));
  }
  const Eigen::MatrixXd bulk = v.transpose() * (bulk_commutator(h) * v);
  const Eigen::MatrixXd literal = v.transpose() * (literal_commutator(h) * v);
  r.min_compressed = eig_sym(0.5 * (bulk + bulk.transpose()), false).values(0);
  r.min_compressed_literal = eig_sym(0.5 * (literal + literal.transpose()), false).values(0);

  const SpMat inter = bulk_commutator(h) - h.kinetic.assemble();
  double mass = 0.0;
  for (Eigen::Index c = 0; c < v.cols(); ++c) mass = std::max(mass, boundary_mass(h, v.col(c)));
  r.boundary_error = mass * inter.norm();

  if (!r.rho_hat_at_lambda.finite() || r.threshold_in_window) {
    r.margin = r.boundary_error;
    r.status = MourreStatus::inconclusive;
    return r;
  }
  const double rho = r.rho_hat_at_lambda.value;
  r.margin = 0.25 * std::abs(rho) + r.boundary_error;
  r.status = std::abs(r.min_compressed - rho) <= r.margin && r.min_compressed > 0.0 ? MourreStatus::positive
                                                                                     : MourreStatus::not_positive;
  return r;
}

std::vector<VirialEntry> virial_check(const Hamiltonian& h, const EigenSystem& states, double tol, double cutoff) {
  const SpMat lit = literal_commutator(h);
  const SpMat bulk = bulk_commutator(h);
  const double scale = h.matrix().norm() * dilation(h).assemble().norm();
  std::vector<VirialEntry> out;
  for (Eigen::Index i = 0; i < states.values.size(); ++i) {
    const Eigen::VectorXd psi = states.vectors.col(i).normalized();
    VirialEntry e;
    e.eigenvalue = states.values(i);
    e.residual = std::abs(psi.dot(lit * psi));
    e.relative = scale > 0.0 ? e.residual / scale : e.residual;
    e.bulk = std::abs(psi.dot(bulk * psi));
    e.boundary_mass = boundary_mass(h, psi);
    e.skipped = e.boundary_mass > cutoff;
    e.passed = e.skipped || e.relative <= tol;
    out.push_back(e);
  }
  return out;
}

RefinementGate refinement_gate(const ModelSpec& m) {
  RefinementGate g;
  g.coarse = m.grid;
  g.fine = m.grid.refined();
  auto collect = [&](const GridSpec& grid, std::map<std::string, std::vector<double>>& out) {
    ModelSpec spec = m;
    spec.grid = grid;
    const Hamiltonian h = assemble(spec);
    auto put = [&](const std::string& key, const SpMat& mat) {
      const Eigen::VectorXd w = lowest_eigenvalues(mat, 3);
      out[key] = std::vector<double>(w.data(), w.data() + w.size());
    };
    put("H", h.matrix());
    if (h.lattice.least())
      for (const auto& x : h.lattice.atoms()) put(x, subsystem(h, x).matrix());
  };
  collect(g.coarse, g.coarse_values);
  collect(g.fine, g.fine_values);
  for (const auto& [key, a] : g.coarse_values) {
    const auto& b = g.fine_values.at(key);
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
      g.max_relative_drift = std::max(g.max_relative_drift, drift(a[i], b[i]));
      g.max_absolute_drift = std::max(g.max_absolute_drift, std::abs(a[i] - b[i]));
    }
  }
  g.passed = g.max_relative_drift < 0.01;
  return g;
}

BoundStates bound_states(const Hamiltonian& h, double tau, double eps, const ClosedPointSet& thresholds) {
  BoundStates b;
  b.tau = tau;
  b.eps = eps;
  if (!std::isfinite(tau)) throw InvalidArgument("bound_states: tau is not finite");
  const EigenSystem s = eigenpairs_below(h.matrix(), tau - eps);
  b.values.assign(s.values.data(), s.values.data() + s.values.size());
  for (double v : b.values)
    for (double t : thresholds.points())
      if (std::abs(v - t) <= eps) b.isolated = false;
  return b;
}

}  // namespace slat
