#pragma once

#include <algorithm>
#include <iterator>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "slat/semilattice.hpp"

namespace fixtures {

inline std::string axes_name(const std::set<int>& axes) {
  if (axes.empty()) return "O";
  std::string s = "X";
  for (int a : axes) s += std::to_string(a);
  return s;
}

/// Coordinate-subspace lattice with meet = intersection of axis sets.
inline slat::Semilattice axes_lattice(const std::vector<std::set<int>>& subsets) {
  std::vector<slat::SubspaceId> elems;
  std::map<std::string, std::set<int>> by_id;
  for (const auto& s : subsets) {
    elems.push_back({axes_name(s), static_cast<int>(s.size())});
    by_id[axes_name(s)] = s;
  }
  return slat::Semilattice::from_meet(elems, [&](const std::string& a, const std::string& b) {
    std::set<int> out;
    std::set_intersection(by_id[a].begin(), by_id[a].end(), by_id[b].begin(), by_id[b].end(),
                          std::inserter(out, out.begin()));
    return axes_name(out);
  });
}

/// {O, X1, X2, X12}
inline slat::Semilattice axes_model() { return axes_lattice({{}, {1}, {2}, {1, 2}}); }

/// All subsets of {1..d}.
inline slat::Semilattice full_axes(int d) {
  std::vector<std::set<int>> subsets;
  for (int mask = 0; mask < (1 << d); ++mask) {
    std::set<int> s;
    for (int a = 0; a < d; ++a)
      if (mask & (1 << a)) s.insert(a + 1);
    subsets.push_back(s);
  }
  return axes_lattice(subsets);
}

/// Chain of the given ids, each below the next; dims 0, 1, 2, ...
inline slat::Semilattice chain(const std::vector<std::string>& ids) {
  std::vector<slat::SubspaceId> elems;
  std::map<std::string, int> rank;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    elems.push_back({ids[i], static_cast<int>(i)});
    rank[ids[i]] = static_cast<int>(i);
  }
  return slat::Semilattice::from_meet(elems, [&](const std::string& a, const std::string& b) {
    return rank[a] <= rank[b] ? a : b;
  });
}

}  // namespace fixtures
