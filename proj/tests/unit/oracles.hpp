#pragma once

#include <cmath>
#include <set>
#include <utility>
#include <vector>

#include "doctest.h"
#include "slat/fingroup.hpp"

namespace oracles {

using slat::CMat;
using slat::FinAbGroup;
using slat::Subgroup;

// Rank over F_p of an integer matrix; agrees with the rational rank for the
// small 0/1 and integer matrices used here.
inline long long exact_rank(std::vector<std::vector<long long>> a) {
  const long long p = 1'000'000'007LL;
  auto inv = [&](long long x) {
    long long r = 1, e = p - 2;
    x %= p;
    while (e) {
      if (e & 1) r = r * x % p;
      x = x * x % p;
      e >>= 1;
    }
    return r;
  };
  long long rank = 0;
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  for (auto& r : a)
    for (auto& v : r) v = ((v % p) + p) % p;
  for (std::size_t c = 0; c < cols && rank < static_cast<long long>(rows); ++c) {
    std::size_t piv = static_cast<std::size_t>(rank);
    while (piv < rows && a[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[static_cast<std::size_t>(rank)]);
    const long long iv = inv(a[static_cast<std::size_t>(rank)][c]);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == static_cast<std::size_t>(rank) || a[r][c] == 0) continue;
      const long long f = a[r][c] * iv % p;
      for (std::size_t k = c; k < cols; ++k)
        a[r][k] = ((a[r][k] - f * a[static_cast<std::size_t>(rank)][k]) % p + p) % p;
    }
    ++rank;
  }
  return rank;
}

// Rows are vectorized integer matrices.
inline long long exact_span_rank(const std::vector<CMat>& mats) {
  std::vector<std::vector<long long>> rows;
  for (const auto& m : mats) {
    std::vector<long long> r;
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      for (Eigen::Index i = 0; i < m.rows(); ++i) {
        const double v = m(i, j).real();
        REQUIRE(std::abs(v - std::round(v)) < 1e-12);
        REQUIRE(std::abs(m(i, j).imag()) < 1e-12);
        r.push_back(std::llround(v));
      }
    rows.push_back(std::move(r));
  }
  return exact_rank(rows);
}

// Orbits of the diagonal z-action on x * y, counted by brute force.
inline int orbit_count(const Subgroup& x, const Subgroup& y, const Subgroup& z) {
  const auto& G = x.parent();
  std::set<std::pair<int, int>> reps;
  for (int a : x.members())
    for (int b : y.members()) {
      std::pair<int, int> r{G.order(), G.order()};
      for (int t : z.members()) r = std::min(r, {G.add(a, t), G.add(b, t)});
      reps.insert(r);
    }
  return static_cast<int>(reps.size());
}

inline Subgroup sg(const FinAbGroup& g, std::vector<std::vector<int>> gens) {
  std::vector<int> idx;
  for (const auto& d : gens) idx.push_back(g.index(d));
  return Subgroup::generated(g, idx);
}


}  // namespace oracles
