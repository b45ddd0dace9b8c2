#pragma once

// Scalar threshold calculus: last-point-below functions N_A, the Mourre
// constant profile rho-hat, and its recursion over a semilattice.

#include <compare>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "slat/semilattice.hpp"

namespace slat {

/// Real number or one of the two infinities. Arithmetic saturates.
struct ExtReal {
  double value = 0.0;

  ExtReal() = default;
  ExtReal(double v);  // NOLINT: implicit by design, rejects NaN

  static ExtReal pos_inf();
  static ExtReal neg_inf();

  bool finite() const;
  bool is_pos_inf() const;
  bool is_neg_inf() const;

  friend std::partial_ordering operator<=>(const ExtReal& a, const ExtReal& b) { return a.value <=> b.value; }
  friend bool operator==(const ExtReal& a, const ExtReal& b) { return a.value == b.value; }
};

/// a - b; throws InternalError on inf - inf of the same sign.
ExtReal operator-(ExtReal a, ExtReal b);
ExtReal operator+(ExtReal a, ExtReal b);
ExtReal ext_min(ExtReal a, ExtReal b);
ExtReal ext_max(ExtReal a, ExtReal b);
/// "inf", "-inf" or the shortest round-trip decimal.
std::string to_string(ExtReal x);

/// Finite sorted set of reals; points closer than 1e-12 are merged.
class ClosedPointSet {
 public:
  static constexpr double kMergeTol = 1e-12;

  ClosedPointSet() = default;
  ClosedPointSet(std::vector<double> pts);  // NOLINT
  ClosedPointSet(std::initializer_list<double> pts) : ClosedPointSet(std::vector<double>(pts)) {}

  const std::vector<double>& points() const { return pts_; }
  std::size_t size() const { return pts_.size(); }
  bool empty() const { return pts_.empty(); }
  bool contains(double x) const;
  ClosedPointSet unite(const ClosedPointSet& other) const;
  /// Points <= lambda.
  std::vector<double> at_most(double lambda) const;

  friend bool operator==(const ClosedPointSet&, const ClosedPointSet&) = default;

 private:
  std::vector<double> pts_;
};

using EvMap = std::map<std::string, ClosedPointSet>;

/// sup{x in a | x <= lambda}, -inf when empty.
ExtReal n_eval(const ClosedPointSet& a, double lambda);
/// max(N_a, N_b)(lambda); throws InternalError if it differs from N_{a u b}.
ExtReal n_union(const ClosedPointSet& a, const ClosedPointSet& b, double lambda);
/// sup over mu <= lambda of (mu if mu in b else N_a(mu)); throws InternalError
/// if it differs from N_{a u b}(lambda).
ExtReal m_sup(const ClosedPointSet& a, const ClosedPointSet& b, double lambda);

/// Mourre constant of a nonzero free Laplacian.
ExtReal rho_of_laplacian(double lambda);

enum class RhoSource { direct, recursive };

struct RhoProfile {
  std::vector<double> lambdas;
  std::vector<ExtReal> values;
  RhoSource source = RhoSource::direct;

  /// Value at lambda: the grid value at the largest grid point <= lambda,
  /// or the first value below the grid.
  ExtReal at(double lambda) const;
};

/// lambda - sup_{mu <= lambda} (mu - rho_sub(mu)) with the sup taken over
/// the profile grid, extrapolated flat below its first point.
ExtReal rho_geq(const RhoProfile& rho_sub, double lambda);
/// Same, with rho_sub given as a function and the sup taken over `candidates`
/// that are <= lambda together with lambda itself.
ExtReal rho_geq(const std::function<ExtReal(double)>& rho_sub, const ClosedPointSet& candidates, double lambda);

/// lambda - N_tau(lambda).
ExtReal rho_hat_from_thresholds(const ClosedPointSet& tau, double lambda);

/// Union of ev_map(X) over X different from the least element.
ClosedPointSet threshold_union(const Semilattice& s, const EvMap& ev_map);

/// Evaluates rho-hat by recursion over quotients: for the filter above x,
///   rho_hat(x, l) = min over covers y of x of  l - sup_{m <= l} (m - rho(y, m)),
///   rho(y, m)     = 0 if m in ev(y), rho_hat(y, m) otherwise,
/// and rho_hat(x, l) = +inf when x is maximal. Memoized per (element, point).
class RhoRecursion {
 public:
  RhoRecursion(const Semilattice& s, EvMap ev_map);
  ExtReal rho_hat(double lambda);
  ExtReal rho_hat_above(const std::string& x, double lambda);

 private:
  ExtReal rho(const std::string& y, double mu);

  const Semilattice& s_;
  EvMap ev_;
  std::map<std::string, ClosedPointSet> candidates_;  // ev points in the filter above each element
  std::map<std::pair<std::string, double>, ExtReal> memo_;
};

ExtReal rho_hat_recursive(const Semilattice& s, const EvMap& ev_map, double lambda);

/// Both evaluations on a grid; throws InternalError when they differ by more than `tol`.
struct RhoComparison {
  RhoProfile direct;
  RhoProfile recursive;
  double max_discrepancy = 0.0;
};
RhoComparison rho_hat_both(const Semilattice& s, const EvMap& ev_map, const std::vector<double>& lambdas,
                           double tol = 1e-9);

/// CSV with header "lambda,value".
std::string rho_profile_csv(const RhoProfile& p);
/// Two whitespace-separated columns; infinite values are written as "inf".
std::string rho_profile_dat(const RhoProfile& p);

/// Shortest round-trip decimal representation.
std::string format_double(double x);

}  // namespace slat
