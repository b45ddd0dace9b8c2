#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include <Eigen/Eigenvalues>
#include "slat/errors.hpp"
#include "slat/sparse_eigen.hpp"
#include "slat/spectral.hpp"

using namespace slat;

namespace {

// Cyclic Jacobi rotations; eigenvalues ascending.
std::vector<double> jacobi_eigenvalues(Eigen::MatrixXd a) {
  const Eigen::Index n = a.rows();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off < 1e-26) break;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
  }
  std::vector<double> w(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] = a(i, i);
  std::sort(w.begin(), w.end());
  return w;
}

ModelSpec model_1d(int n, double half) {
  std::map<std::string, Axes> axes{{"O", {}}, {"X", {1}}};
  return ModelSpec{axes_semilattice(axes), axes, GridSpec{n, half}, Scheme::fd, {}, {}};
}

ModelSpec model_2d(int n, double half) {
  std::map<std::string, Axes> axes{{"O", {}}, {"X1", {1}}, {"X12", {1, 2}}, {"X2", {2}}};
  return ModelSpec{axes_semilattice(axes), axes, GridSpec{n, half}, Scheme::fd, {}, {}};
}

Profile well(double depth, double width) { return Profile{Profile::Kind::gaussian, -depth, width, {}, {}}; }

// Eigenvalues of the 1D Dirichlet block Delta + V by a dense solve.
Eigen::VectorXd well_1d(const GridSpec& g, const Profile& p) {
  Eigen::MatrixXd m = Eigen::MatrixXd(laplacian_1d(g, Scheme::fd));
  for (int j = 0; j < g.n; ++j) m(j, j) += p({g.point(j)});
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  return es.eigenvalues();
}

}  // namespace

TEST_SUITE("spectral") {
  TEST_CASE("eig_sym") {
    const auto d = eig_sym(Eigen::Vector3d(3, 1, 2).asDiagonal().toDenseMatrix());
    CHECK(d.values(0) == doctest::Approx(1.0));
    CHECK(d.values(2) == doctest::Approx(3.0));

    const auto l = eig_sym(Eigen::MatrixXd(laplacian_1d(GridSpec{21, 3.0}, Scheme::fd)), false);
    CHECK(l.values(0) > 0.0);
    for (Eigen::Index i = 1; i < l.values.size(); ++i) CHECK(l.values(i) > l.values(i - 1));

    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 3; ++trial) {
      Eigen::MatrixXd a = Eigen::MatrixXd::NullaryExpr(50, 50, [&] { return u(rng); });
      a = (a + a.transpose()).eval();
      const auto got = eig_sym(a, false);
      const auto ref = jacobi_eigenvalues(a);
      for (int i = 0; i < 50; ++i) CHECK(got.values(i) == doctest::Approx(ref[static_cast<std::size_t>(i)]).epsilon(1e-9));
    }
    Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(3, 3);
    bad(0, 1) = 1.0;
    CHECK_THROWS_AS(eig_sym(bad), InvalidArgument);
  }

  TEST_CASE("sparse counting and lowest pairs agree with dense") {
    // Kronecker sum of two identical wells: repeated eigenvalues e_i + e_j
    const GridSpec g{31, 6.0};
    SpMat b = laplacian_1d(g, Scheme::fd);
    for (int j = 0; j < g.n; ++j) b.coeffRef(j, j) += well(3.0, 1.0)({g.point(j)});
    const SpMat h = kron(b, identity(g.n)) + kron(identity(g.n), b);
    const Eigen::VectorXd ref = eig_sym(Eigen::MatrixXd(h), false).values;

    const auto [lo, hi] = sparse::gershgorin(h);
    CHECK(lo <= ref(0));
    CHECK(hi >= ref(ref.size() - 1));
    for (double level : {ref(0) - 0.1, 0.5 * (ref(2) + ref(3)), -0.3, 1.0}) {
      CAPTURE(level);
      CHECK(sparse::count_below(h, level) == (ref.array() < level).count());
    }
    CHECK(ref(1) == doctest::Approx(ref(2)));  // degenerate pair

    const auto low = sparse::lowest(h, 6);
    for (int i = 0; i < 6; ++i) CHECK(low.values(i) == doctest::Approx(ref(i)).epsilon(1e-9));
    for (int i = 0; i < 6; ++i)
      CHECK((h * low.vectors.col(i) - low.values(i) * low.vectors.col(i)).norm() < 1e-8);

    const auto neg = sparse::below(h, 0.0);
    CHECK(neg.values.size() == (ref.array() < 0.0).count());
    CHECK(neg.values(neg.values.size() - 1) == doctest::Approx(ref(neg.values.size() - 1)));
  }

  TEST_CASE("hvz onset") {
    const auto free = assemble(model_2d(21, 5.0));
    const auto r = hvz_tau(free);
    CHECK(r.tau == doctest::Approx(0.0));
    CHECK(r.per_atom.size() == 2);

    auto m = model_2d(41, 6.0);
    m.interactions.push_back({"X12", "X12", "X1", well(2.0, 1.0)});
    const double e0 = well_1d(m.grid, well(2.0, 1.0))(0);
    CHECK(hvz_tau(assemble(m)).tau == doctest::Approx(e0).epsilon(1e-10));

    m.interactions.push_back({"X12", "X12", "X2", well(3.0, 0.8)});
    const double e1 = well_1d(m.grid, well(3.0, 0.8))(0);
    const auto two = hvz_tau(assemble(m));
    CHECK(two.tau == doctest::Approx(std::min(e0, e1)).epsilon(1e-10));
    CHECK(two.per_atom.at("X2") == doctest::Approx(e1).epsilon(1e-10));
    CHECK(two.per_atom.at("X1") == doctest::Approx(e0).epsilon(1e-10));
  }

  TEST_CASE("filter bottom is a tensor sum") {
    auto m = model_2d(25, 5.0);
    m.interactions.push_back({"X12", "X12", "X1", well(2.0, 1.0)});
    m.interactions.push_back({"X12", "X12", "X2", well(1.0, 1.2)});
    const auto h = assemble(m);
    for (const std::string x : {"X1", "X2"}) {
      const double bottom = lowest_eigenvalues(project_geq(h, x).matrix(), 1)(0);
      const double dx = lowest_eigenvalues(build_laplacian(h.axes.at(x), h.grid, h.scheme), 1)(0);
      const double sub = lowest_eigenvalues(subsystem(h, x).matrix(), 1)(0);
      CHECK(bottom == doctest::Approx(dx + sub).epsilon(1e-10));
    }
  }

  TEST_CASE("threshold sets and rho-hat") {
    const auto free = assemble(model_2d(21, 5.0));
    const auto tf = threshold_set_numeric(free, 1e-3);
    CHECK(tf.thresholds == ClosedPointSet{0.0});
    const auto grid = default_lambda_grid(tf.thresholds);
    const auto rf = rho_hat_numeric(tf, free.lattice, grid);
    CHECK(rf.max_discrepancy == 0.0);
    CHECK(rf.direct.at(-0.5).is_pos_inf());
    CHECK(rf.direct.at(2.0).value == doctest::Approx(2.0).epsilon(1e-2));
    CHECK(rf.direct.at(0.0).value == 0.0);

    auto m = model_2d(41, 6.0);
    m.interactions.push_back({"X12", "X12", "X1", well(1.0, 1.0)});
    const auto h = assemble(m);
    const auto t = threshold_set_numeric(h, 1e-3);
    const Eigen::VectorXd e = well_1d(m.grid, well(1.0, 1.0));
    REQUIRE(e(0) < 0.0);
    REQUIRE(e(1) > 0.0);  // a single bound state
    CHECK(t.thresholds.size() == 2);
    CHECK(t.thresholds.points()[0] == doctest::Approx(e(0)).epsilon(1e-10));
    CHECK(t.thresholds.points()[1] == 0.0);
    CHECK(t.ev.at("X12") == ClosedPointSet{0.0});
    CHECK(t.ev.at("X2").empty());
    const auto r = rho_hat_numeric(t, h.lattice, default_lambda_grid(t.thresholds));
    CHECK(r.max_discrepancy == 0.0);
    const double mid = 0.5 * e(0);
    CHECK(rho_hat_from_thresholds(t.thresholds, mid).value == doctest::Approx(mid - e(0)));
    CHECK(r.direct.at(e(0)).value == 0.0);

    const auto wide = threshold_set_numeric(h, 2.0);
    CHECK(wide.thresholds == ClosedPointSet{0.0});
    REQUIRE(wide.flagged.size() == 1);
    CHECK(wide.flagged[0].element == "X1");
  }

  TEST_CASE("bound states are stable under refinement") {
    auto m = model_2d(21, 5.0);
    m.interactions.push_back({"X12", "X12", "X1", well(3.0, 1.0)});
    m.interactions.push_back({"X12", "X12", "X2", well(2.0, 1.0)});
    std::vector<std::size_t> counts;
    for (const auto& g : {m.grid, m.grid.refined()}) {
      ModelSpec s = m;
      s.grid = g;
      const auto h = assemble(s);
      const auto tau = hvz_tau(h).tau;
      const auto t = threshold_set_numeric(h, 0.05);
      const auto b = bound_states(h, tau, 0.05, t.thresholds);
      CHECK(b.isolated);
      counts.push_back(b.values.size());
    }
    CHECK(counts[0] > 0);
    CHECK(counts[0] == counts[1]);
  }

  TEST_CASE("Mourre estimate on the free line") {
    const auto h = assemble(model_1d(201, 30.0));
    const auto t = threshold_set_numeric(h, 1e-3);
    CHECK(t.thresholds == ClosedPointSet{0.0});
    const auto r = mourre_check(h, t.thresholds, 1.0, 0.1);
    CHECK(r.status == MourreStatus::positive);
    CHECK(r.subspace_dim > 0);
    CHECK(r.rho_hat_at_lambda.value == 1.0);
    CHECK(r.min_compressed == doctest::Approx(1.0).epsilon(0.25));
    CHECK(r.min_compressed_literal <= 1e-9);

    CHECK(mourre_check(h, t.thresholds, -1.0, 0.1).status == MourreStatus::window_empty);
    CHECK(mourre_check(h, t.thresholds, 0.05, 0.1).status == MourreStatus::inconclusive);
    CHECK_THROWS_AS(mourre_check(h, t.thresholds, 1.0, 0.0), InvalidArgument);
  }

  TEST_CASE("virial residuals") {
    auto m = model_1d(201, 10.0);
    m.interactions.push_back({"X", "X", "O", well(8.0, 1.0)});
    const auto h = assemble(m);
    const auto states = eigenpairs_below(h.matrix(), hvz_tau(h).tau);
    REQUIRE(states.values.size() >= 2);
    const auto v = virial_check(h, states);
    for (const auto& e : v) {
      CHECK_FALSE(e.skipped);
      CHECK(e.residual < 1e-10);
      CHECK(e.relative < 1e-6);
      CHECK(e.passed);
    }
    // a free box state reaches the walls
    const auto box = eigenpairs_below(assemble(model_1d(201, 10.0)).matrix(), 0.1);
    const auto vb = virial_check(assemble(model_1d(201, 10.0)), box);
    bool any_skipped = false;
    for (const auto& e : vb) any_skipped |= e.skipped;
    CHECK(any_skipped);
  }

  TEST_CASE("refinement gate") {
    auto m = model_1d(201, 8.0);
    m.interactions.push_back({"X", "X", "O", well(2.0, 1.0)});
    const auto g = refinement_gate(m);
    CHECK(g.fine.n == 401);
    CHECK(g.coarse_values.count("H") == 1);
    CHECK(g.coarse_values.count("X") == 1);
    CHECK(g.passed);
    CHECK(g.suggested_eps() > 0.0);
    CHECK(g.suggested_eps() < 0.1);
  }
}
