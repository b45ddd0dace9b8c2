#include "slat/threshold_calc.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "slat/errors.hpp"

namespace slat {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

ExtReal::ExtReal(double v) : value(v) {
  if (std::isnan(v)) throw InvalidArgument("ExtReal cannot hold NaN");
}

ExtReal ExtReal::pos_inf() { return ExtReal(kInf); }
ExtReal ExtReal::neg_inf() { return ExtReal(-kInf); }
bool ExtReal::finite() const { return std::isfinite(value); }
bool ExtReal::is_pos_inf() const { return value == kInf; }
bool ExtReal::is_neg_inf() const { return value == -kInf; }

ExtReal operator-(ExtReal a, ExtReal b) {
  if (!a.finite() && a.value == b.value) throw InternalError("indeterminate inf - inf");
  return ExtReal(a.value - b.value);
}

ExtReal operator+(ExtReal a, ExtReal b) {
  if (!a.finite() && !b.finite() && a.value != b.value) throw InternalError("indeterminate inf + (-inf)");
  return ExtReal(a.value + b.value);
}

ExtReal ext_min(ExtReal a, ExtReal b) { return b < a ? b : a; }
ExtReal ext_max(ExtReal a, ExtReal b) { return a < b ? b : a; }

std::string format_double(double x) {
  if (x == kInf) return "inf";
  if (x == -kInf) return "-inf";
  if (x == 0.0) x = 0.0;  // drop the sign of -0
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string to_string(ExtReal x) { return format_double(x.value); }

ClosedPointSet::ClosedPointSet(std::vector<double> pts) {
  for (double p : pts)
    if (!std::isfinite(p)) throw InvalidArgument("point sets hold finite reals only");
  std::sort(pts.begin(), pts.end());
  for (double p : pts)
    if (pts_.empty() || p - pts_.back() > kMergeTol) pts_.push_back(p);
}

bool ClosedPointSet::contains(double x) const {
  auto it = std::lower_bound(pts_.begin(), pts_.end(), x - kMergeTol);
  return it != pts_.end() && *it <= x + kMergeTol;
}

ClosedPointSet ClosedPointSet::unite(const ClosedPointSet& other) const {
  std::vector<double> all = pts_;
  all.insert(all.end(), other.pts_.begin(), other.pts_.end());
  return ClosedPointSet(std::move(all));
}

std::vector<double> ClosedPointSet::at_most(double lambda) const {
  return {pts_.begin(), std::upper_bound(pts_.begin(), pts_.end(), lambda)};
}

ExtReal n_eval(const ClosedPointSet& a, double lambda) {
  const auto& p = a.points();
  auto it = std::upper_bound(p.begin(), p.end(), lambda);
  if (it == p.begin()) return ExtReal::neg_inf();
  return ExtReal(*std::prev(it));
}

ExtReal n_union(const ClosedPointSet& a, const ClosedPointSet& b, double lambda) {
  const ExtReal r = ext_max(n_eval(a, lambda), n_eval(b, lambda));
  if (r != n_eval(a.unite(b), lambda)) throw InternalError("sup(N_A, N_B) != N_{A u B}");
  return r;
}

ExtReal m_sup(const ClosedPointSet& a, const ClosedPointSet& b, double lambda) {
  // Off b, M = N_a is nondecreasing, so its sup over mu <= lambda is N_a(lambda)
  // (attained at lambda itself, or approached from the left when lambda is in b).
  // On b, M(mu) = mu, maximal at the last point of b below lambda.
  ExtReal r = n_eval(a, lambda);
  const auto bs = b.at_most(lambda);
  if (!bs.empty()) r = ext_max(r, ExtReal(bs.back()));
  if (r != n_eval(a.unite(b), lambda)) throw InternalError("m_sup != N_{A u B}");
  return r;
}

ExtReal rho_of_laplacian(double lambda) { return lambda < 0 ? ExtReal::pos_inf() : ExtReal(lambda); }

ExtReal RhoProfile::at(double lambda) const {
  if (lambdas.empty()) throw InvalidArgument("empty rho profile");
  auto it = std::upper_bound(lambdas.begin(), lambdas.end(), lambda);
  if (it == lambdas.begin()) return values.front();
  return values[static_cast<std::size_t>(std::prev(it) - lambdas.begin())];
}

ExtReal rho_geq(const RhoProfile& rho_sub, double lambda) {
  if (rho_sub.lambdas.empty()) throw InvalidArgument("rho_geq: empty grid");
  if (rho_sub.lambdas.size() != rho_sub.values.size()) throw InvalidArgument("rho_geq: grid/value size mismatch");
  // Below the grid rho is the constant values[0], so mu - rho increases up to lambda.
  ExtReal sup = ExtReal(std::min(lambda, rho_sub.lambdas.front())) - rho_sub.values.front();
  for (std::size_t i = 0; i < rho_sub.lambdas.size() && rho_sub.lambdas[i] <= lambda; ++i)
    sup = ext_max(sup, ExtReal(rho_sub.lambdas[i]) - rho_sub.values[i]);
  if (sup.is_pos_inf()) return ExtReal::neg_inf();
  return ExtReal(lambda) - sup;
}

ExtReal rho_geq(const std::function<ExtReal(double)>& rho_sub, const ClosedPointSet& candidates, double lambda) {
  ExtReal sup = ExtReal(lambda) - rho_sub(lambda);
  for (double mu : candidates.at_most(lambda)) sup = ext_max(sup, ExtReal(mu) - rho_sub(mu));
  if (sup.is_pos_inf()) return ExtReal::neg_inf();
  return ExtReal(lambda) - sup;
}

ExtReal rho_hat_from_thresholds(const ClosedPointSet& tau, double lambda) {
  return ExtReal(lambda) - n_eval(tau, lambda);
}

ClosedPointSet threshold_union(const Semilattice& s, const EvMap& ev_map) {
  const auto least = s.least();
  ClosedPointSet out;
  for (const auto& id : s.ids()) {
    if (least && id == *least) continue;
    auto it = ev_map.find(id);
    if (it == ev_map.end()) throw InvalidArgument("missing ev entry for '" + id + "'");
    out = out.unite(it->second);
  }
  return out;
}

RhoRecursion::RhoRecursion(const Semilattice& s, EvMap ev_map) : s_(s), ev_(std::move(ev_map)) {
  const auto least = s.least();
  if (!least) throw PreconditionViolation("rho_hat recursion requires a least element");
  for (const auto& id : s.ids()) {
    if (id == *least) continue;
    if (!ev_.count(id)) throw InvalidArgument("missing ev entry for '" + id + "'");
  }
  for (const auto& x : s.ids()) {
    ClosedPointSet c;
    for (const auto& w : s.ids())
      if (w != *least && s.leq(x, w)) c = c.unite(ev_.at(w));
    candidates_[x] = std::move(c);
  }
}

ExtReal RhoRecursion::rho(const std::string& y, double mu) {
  if (ev_.at(y).contains(mu)) return ExtReal(0.0);
  return rho_hat_above(y, mu);
}

ExtReal RhoRecursion::rho_hat_above(const std::string& x, double lambda) {
  const auto key = std::make_pair(x, lambda);
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  ExtReal best = ExtReal::pos_inf();
  for (const auto& y : s_.covers(x)) {
    auto rho_y = [&](double mu) { return rho(y, mu); };
    best = ext_min(best, rho_geq(rho_y, candidates_.at(y), lambda));
  }
  memo_.emplace(key, best);
  return best;
}

ExtReal RhoRecursion::rho_hat(double lambda) { return rho_hat_above(*s_.least(), lambda); }

ExtReal rho_hat_recursive(const Semilattice& s, const EvMap& ev_map, double lambda) {
  RhoRecursion r(s, ev_map);
  return r.rho_hat(lambda);
}

RhoComparison rho_hat_both(const Semilattice& s, const EvMap& ev_map, const std::vector<double>& lambdas,
                           double tol) {
  RhoComparison out;
  const ClosedPointSet tau = threshold_union(s, ev_map);
  RhoRecursion rec(s, ev_map);
  out.direct.source = RhoSource::direct;
  out.recursive.source = RhoSource::recursive;
  for (double l : lambdas) {
    const ExtReal d = rho_hat_from_thresholds(tau, l);
    const ExtReal r = rec.rho_hat(l);
    out.direct.lambdas.push_back(l);
    out.direct.values.push_back(d);
    out.recursive.lambdas.push_back(l);
    out.recursive.values.push_back(r);
    const double gap = (d == r) ? 0.0 : std::abs(d.value - r.value);
    out.max_discrepancy = std::max(out.max_discrepancy, gap);
  }
  if (!(out.max_discrepancy <= tol))
    throw InternalError("direct and recursive rho-hat disagree by " + format_double(out.max_discrepancy));
  return out;
}

std::string rho_profile_csv(const RhoProfile& p) {
  std::ostringstream os;
  os << "lambda,value\n";
  for (std::size_t i = 0; i < p.lambdas.size(); ++i)
    os << format_double(p.lambdas[i]) << ',' << to_string(p.values[i]) << '\n';
  return os.str();
}

std::string rho_profile_dat(const RhoProfile& p) {
  std::ostringstream os;
  os << "# lambda rho_hat\n";
  for (std::size_t i = 0; i < p.lambdas.size(); ++i)
    os << format_double(p.lambdas[i]) << ' ' << to_string(p.values[i]) << '\n';
  return os.str();
}

}  // namespace slat
