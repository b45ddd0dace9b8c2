// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "slat/algebra_suite.hpp"
#include "slat/cli.hpp"
#include "slat/config.hpp"
#include "slat/euclid_model.hpp"
#include "slat/semilattice.hpp"
#include "slat/spectral.hpp"
#include "slat/threshold_calc.hpp"

#ifndef SLAT_SOURCE_DIR
#define SLAT_SOURCE_DIR "."
#endif

using namespace slat;

namespace {

std::string config_path(const std::string& name) { return std::string(SLAT_SOURCE_DIR) + "/configs/" + name + ".json"; }

template <class T>
T load(const std::string& name) {
  std::string bytes;
  ParseResult r = load_config(config_path(name), bytes);
  if (!r.ok()) throw std::runtime_error(name + ": configuration rejected");
  return std::get<T>(*r.config);
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

bool run_criterion(int id, const std::string& name, double budget_s, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs > budget_s) {
    o.pass = false;
    o.detail += "; over budget " + fmt(budget_s) + " s";
  }
  std::cout << "criterion " << id << " " << (o.pass ? "PASS" : "FAIL") << " [" << name << "] " << o.detail << " ("
            << fmt(secs) << " s)" << std::endl;
  return o.pass;
}

// ---------------------------------------------------------------- fixtures

Semilattice lattice_from(const std::vector<std::pair<std::string, Axes>>& list) {
  std::map<std::string, Axes> axes(list.begin(), list.end());
  return axes_semilattice(axes);
}

Semilattice chain3() { return lattice_from({{"O", {}}, {"X", {1}}, {"Y", {1, 2}}}); }
Semilattice axes2() { return lattice_from({{"O", {}}, {"X1", {1}}, {"X2", {2}}, {"X12", {1, 2}}}); }
Semilattice axes3() {
  return lattice_from({{"O", {}},
                       {"X1", {1}},
                       {"X2", {2}},
                       {"X3", {3}},
                       {"X12", {1, 2}},
                       {"X13", {1, 3}},
                       {"X23", {2, 3}},
                       {"X123", {1, 2, 3}}});
}

// Count of eigenvalues of the symmetric tridiagonal (d, e) below x.
int sturm_count(const std::vector<double>& d, const std::vector<double>& e, double x) {
  int count = 0;
  double q = 1.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double off = i == 0 ? 0.0 : e[i - 1] * e[i - 1];
    q = d[i] - x - (i == 0 ? 0.0 : off / q);
    if (q == 0.0) q = -1e-300;
    if (q < 0.0) ++count;
  }
  return count;
}

// Ground energy of -u'' + v u on [-L, L] with Dirichlet ends, fd with n points.
double ground_1d(const std::function<double(double)>& v, int n, double half_length) {
  const double h = 2.0 * half_length / (n - 1);
  std::vector<double> d, e;
  for (int j = 1; j < n - 1; ++j) d.push_back(2.0 / (h * h) + v(-half_length + j * h));
  e.assign(d.size() - 1, -1.0 / (h * h));
  double lo = *std::min_element(d.begin(), d.end()) - 4.0 / (h * h), hi = *std::max_element(d.begin(), d.end()) + 4.0 / (h * h);
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (sturm_count(d, e, mid) >= 1 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------- criteria

Outcome algebra_suite() {
  struct Case {
    std::vector<int> orders;
    SuiteOptions opt;
  };
  SuiteOptions big;
  big.max_subgroup_order = 12;
  big.max_instances = 200;
  big.seed = 1;
  const std::vector<Case> cases = {{{2}, {}},    {{3}, {}},    {{4}, {}},    {{6}, {}},
                                   {{2, 2}, {}}, {{2, 4}, {}}, {{3, 3}, {}}, {{6, 6}, big}};
  bool ok = true;
  int checks = 0;
  std::ostringstream failed;
  for (const auto& c : cases) {
    const SuiteReport r = verify_group_identities(FinAbGroup(c.orders), c.opt);
    checks += static_cast<int>(r.checks.size());
    if (!r.passed()) {
      ok = false;
      for (const auto& f : r.failures()) failed << " " << r.group << ":" << f.identity << "(" << f.instance << ")";
    }
  }
  return {ok, std::to_string(cases.size()) + " groups, " + std::to_string(checks) + " rank checks" +
                  (ok ? "" : ", failures:" + failed.str())};
}

Outcome generation() {
  const auto g = load<GroupConfig>("z4_chain");
  if (!g.model) return {false, "z4_chain has no model"};
  const IdentityCheck c = check_generation(*g.model);
  return {c.passed, "ranks (" + std::to_string(c.ranks.a) + ", " + std::to_string(c.ranks.b) + ", " +
                        std::to_string(c.ranks.joint) + ")"};
}

Outcome threshold_identity() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> pt(-5.0, 3.0);
  std::uniform_int_distribution<int> count(0, 3);
  const std::vector<Semilattice> shapes = {chain3(), axes2(), axes3()};
  double worst = 0.0;
  int maps = 0;
  for (const auto& s : shapes)
    for (int rep = 0; rep < 8; ++rep) {
      EvMap ev;
      for (const auto& x : s.ids()) {
        if (x == *s.least()) continue;
        std::vector<double> v;
        if (x == *s.top()) v.push_back(0.0);
        else
          for (int k = count(rng); k > 0; --k) v.push_back(pt(rng));
        ev[x] = ClosedPointSet(v);
      }
      std::vector<double> grid;
      for (int i = 0; i < 1000; ++i) grid.push_back(-7.0 + 12.0 * i / 999.0);
      const ClosedPointSet tau = threshold_union(s, ev);
      grid.insert(grid.end(), tau.points().begin(), tau.points().end());
      for (double l : grid) {
        const ExtReal a = rho_hat_recursive(s, ev, l);
        const ExtReal b = rho_hat_from_thresholds(tau, l);
        if (a.finite() != b.finite() || (!a.finite() && a.value != b.value)) return {false, "infinite mismatch at " + fmt(l)};
        if (a.finite()) worst = std::max(worst, std::abs(a.value - b.value));
      }
      ++maps;
    }

  // N and M against a brute force on a grid holding every set point.
  std::mt19937_64 r2(11);
  const int steps = 9999;
  const double lo = -6.0, hi = 4.0, step = (hi - lo) / steps;
  std::uniform_int_distribution<int> idx(0, steps);
  std::uniform_int_distribution<int> sz(0, 5);
  int bad = 0;
  for (int inst = 0; inst < 500; ++inst) {
    std::vector<double> a, b;
    for (int k = sz(r2); k > 0; --k) a.push_back(lo + idx(r2) * step);
    for (int k = sz(r2); k > 0; --k) b.push_back(lo + idx(r2) * step);
    const int li = idx(r2);
    const double lambda = lo + li * step;
    const ClosedPointSet sa(a), sb(b);
    auto n_brute = [](const std::vector<double>& set, double mu) {
      double best = -std::numeric_limits<double>::infinity();
      for (double x : set)
        if (x <= mu + 1e-12) best = std::max(best, x);
      return best;
    };
    double m = -std::numeric_limits<double>::infinity();
    for (int j = 0; j <= li; ++j) {
      const double mu = lo + j * step;
      const bool in_b = std::any_of(b.begin(), b.end(), [&](double x) { return std::abs(x - mu) < 1e-12; });
      m = std::max(m, in_b ? mu : n_brute(a, mu));
    }
    std::vector<double> ab = a;
    ab.insert(ab.end(), b.begin(), b.end());
    const double nu = n_brute(ab, lambda);
    auto same = [](ExtReal x, double y) { return x.finite() ? std::abs(x.value - y) <= 1e-9 : x.value == y; };
    if (!same(m_sup(sa, sb, lambda), m) || !same(n_union(sa, sb, lambda), nu)) ++bad;
  }
  return {worst <= 1e-12 && bad == 0 && maps >= 20,
          std::to_string(maps) + " ev maps over 3 shapes, max discrepancy " + fmt(worst) + "; 500 N/M instances, " +
              std::to_string(bad) + " mismatches"};
}

Outcome tensor_factorization() {
  double worst_term = 0.0, worst_sum = 0.0;
  int pairs = 0;
  for (const char* name : {"free_line", "well_line", "axes_free", "axes_one_well", "axes_two_wells", "pauli_fierz"}) {
    const Hamiltonian h = assemble(load<EuclidConfig>(name).model);
    for (const auto& x : h.lattice.ids()) {
      const NrResidual r = nr_residual(h, x);
      worst_term = std::max(worst_term, r.termwise);
      worst_sum = std::max(worst_sum, r.summed);
      ++pairs;
    }
  }
  return {worst_term < 1e-12,
          std::to_string(pairs) + " (model, X) pairs, termwise " + fmt(worst_term) + ", summed " + fmt(worst_sum)};
}

Outcome hvz() {
  const ModelSpec m = load<EuclidConfig>("axes_two_wells").model;
  const RefinementGate gate = refinement_gate(m);
  const double eps = std::max(gate.suggested_eps(), 1e-12);

  const Hamiltonian h = assemble(m);
  const HvzReport tau = hvz_tau(h);
  const double well1 = ground_1d([](double x) { return -2.0 * std::exp(-x * x / 2.0); }, 4001, 12.0);
  const double well2 = ground_1d([](double x) { return -1.5 * std::exp(-x * x / (2.0 * 1.44)); }, 4001, 12.0);
  const double oracle = std::min(well1, well2);
  const double tau_err = std::abs(tau.tau - oracle) / std::abs(oracle);

  const ThresholdReport t = threshold_set_numeric(h, eps);
  const BoundStates coarse = bound_states(h, tau.tau, eps, t.thresholds);

  ModelSpec fine_spec = m;
  fine_spec.grid = m.grid.refined();
  const Hamiltonian fine = assemble(fine_spec);
  const double fine_tau = hvz_tau(fine).tau;
  const BoundStates refined = bound_states(fine, fine_tau, eps, t.thresholds);

  std::ostringstream d;
  d << "gate drift " << fmt(gate.max_relative_drift) << ", eps " << fmt(eps) << ", tau " << fmt(tau.tau) << " vs oracle "
    << fmt(oracle) << " (" << fmt(100.0 * tau_err) << "%), bound states " << coarse.values.size() << " at n="
    << m.grid.n << " and " << refined.values.size() << " at n=" << fine_spec.grid.n
    << (coarse.isolated ? ", isolated" : ", not isolated");
  const bool ok = gate.passed && tau_err < 0.02 && coarse.isolated && !coarse.values.empty() &&
                  coarse.values.size() == refined.values.size();
  return {ok, d.str()};
}

Outcome mourre() {
  const Hamiltonian free = assemble(load<EuclidConfig>("free_line").model);
  const ThresholdReport t = threshold_set_numeric(free, 1e-6);
  const MourreReport r = mourre_check(free, t.thresholds, 1.0, 0.1);
  const bool mourre_ok = r.status == MourreStatus::positive && std::abs(r.min_compressed - 1.0) <= 0.25;

  const Hamiltonian well = assemble(load<EuclidConfig>("well_line").model);
  const auto states = eigenpairs_below(well.matrix(), hvz_tau(well).tau);
  const auto entries = virial_check(well, states, 1e-6);
  double worst_rel = 0.0, worst_abs = 0.0;
  int used = 0;
  for (const auto& e : entries) {
    if (e.skipped) continue;
    ++used;
    worst_rel = std::max(worst_rel, e.relative);
    worst_abs = std::max(worst_abs, e.residual);
  }
  const bool virial_ok = used > 0 && worst_rel < 1e-6 && worst_abs < 1e-10;
  return {mourre_ok && virial_ok, "min compressed " + fmt(r.min_compressed) + " (" + to_string(r.status) + ", " +
                                      std::to_string(r.subspace_dim) + " states); virial on " + std::to_string(used) +
                                      " bound states: relative " + fmt(worst_rel) + ", absolute " + fmt(worst_abs)};
}

Outcome negative_controls() {
  bool ok = true;
  std::ostringstream d;
  for (const char* id : {ident::kHyz, ident::kHyz1, ident::kFactor, ident::kProduct, ident::kXyzef, ident::kMorita}) {
    SuiteOptions opt;
    opt.corrupt = id;
    const SuiteReport r = verify_group_identities(FinAbGroup({4}), opt);
    const auto f = r.failures();
    const bool caught = !f.empty() && std::all_of(f.begin(), f.end(), [&](const IdentityCheck& c) { return c.identity == id; });
    if (!caught) ok = false;
    d << id << (caught ? " caught" : " missed");
    if (!f.empty()) d << " (" << f.front().ranks.a << "," << f.front().ranks.b << "," << f.front().ranks.joint << ")";
    d << "; ";
  }

  std::string bytes;
  const ParseResult bad = load_config(config_path("bad_target"), bytes);
  const bool flagged = !bad.ok() && std::any_of(bad.diagnostics.begin(), bad.diagnostics.end(), [](const Diagnostic& g) {
                         return g.path.find("/interactions/0") == 0;
                       });
  std::ostringstream sink;
  const int rc = cli::run({"validate", config_path("bad_target"), "--out", "acceptance-out"}, sink, sink);
  if (!flagged || rc != 1) ok = false;
  d << "bad target " << (flagged ? "rejected" : "accepted") << " (validate exit " << rc << ")";
  return {ok, d.str()};
}

}  // namespace

int main() {
  bool all = true;
  all &= run_criterion(1, "span identities", 120, algebra_suite);
  all &= run_criterion(2, "generation", 30, generation);
  all &= run_criterion(3, "threshold identity", 10, threshold_identity);
  all &= run_criterion(4, "tensor factorization", 60, tensor_factorization);
  all &= run_criterion(5, "hvz", 300, hvz);
  all &= run_criterion(6, "mourre and virial", 60, mourre);
  all &= run_criterion(7, "negative controls", 60, negative_controls);
  std::cout << (all ? "all criteria passed" : "some criteria failed") << std::endl;
  return all ? 0 : 1;
}
