#pragma once

// Finite meet-semilattices given extensionally by a meet table.
//
// Elements are opaque string ids carrying a nonnegative dimension label.
// The order is recovered from the meet: a <= b iff meet(a, b) == a.
// Element lists are always reported in lexicographic id order.

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "slat/diagnostics.hpp"

namespace slat {

struct SubspaceId {
  std::string id;
  int dim = 0;

  friend bool operator==(const SubspaceId&, const SubspaceId&) = default;
};

using MeetTable = std::vector<std::vector<std::string>>;

class Semilattice {
 public:
  /// Validates a candidate table without throwing. `table[i][j]` is the id of
  /// the meet of `elements[i]` and `elements[j]` in the order given.
  static Diagnostics check_table(const std::vector<SubspaceId>& elements, const MeetTable& table,
                                 const std::string& path_prefix = "");

  /// Throws InvalidArgument carrying the first diagnostic if the table is not
  /// a meet-semilattice.
  Semilattice(std::vector<SubspaceId> elements, const MeetTable& table);

  /// Builds the table by evaluating `meet` on every pair, then validates it.
  static Semilattice from_meet(std::vector<SubspaceId> elements,
                               const std::function<std::string(const std::string&, const std::string&)>& meet);

  std::size_t size() const { return elems_.size(); }
  const std::vector<SubspaceId>& elements() const { return elems_; }
  std::vector<std::string> ids() const;
  bool contains(const std::string& id) const { return index_.count(id) != 0; }
  int dim(const std::string& id) const;

  const std::string& meet(const std::string& a, const std::string& b) const;
  bool leq(const std::string& a, const std::string& b) const;
  bool less(const std::string& a, const std::string& b) const { return a != b && leq(a, b); }

  std::optional<std::string> least() const;
  /// Largest element, when one exists.
  std::optional<std::string> top() const;

  /// Minimal elements strictly above the least element. Requires a least element.
  std::vector<std::string> atoms() const;
  /// Minimal elements strictly above `x`.
  std::vector<std::string> covers(const std::string& x) const;

  /// {t | t >= x}; `x` becomes the least element.
  Semilattice filter_geq(const std::string& x) const;
  /// {t | t <= x}.
  Semilattice ideal_leq(const std::string& x) const;
  /// Elements E/x for E >= x with dim(E/x) = dim(E) - dim(x). The class of x
  /// is named "O"; other classes are named by quotient_id(). Quotienting by
  /// the least element returns the same ids.
  Semilattice quotient(const std::string& x) const;

  /// Table in element order, for serialization.
  MeetTable table() const;

 private:
  Semilattice() = default;
  std::size_t idx(const std::string& id) const;
  Semilattice restrict_to(const std::vector<std::size_t>& keep) const;

  std::vector<SubspaceId> elems_;
  std::vector<std::size_t> meet_;  // row-major size() x size()
  std::map<std::string, std::size_t> index_;
  std::optional<std::size_t> least_;
  std::optional<std::size_t> top_;
};

/// Name of the class of `e` in the quotient by `x` (for e != x).
std::string quotient_id(const std::string& e, const std::string& x);

}  // namespace slat
