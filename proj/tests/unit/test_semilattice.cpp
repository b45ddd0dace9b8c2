#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "slat/errors.hpp"
#include "slat/semilattice.hpp"

using slat::Semilattice;
using Ids = std::vector<std::string>;

namespace {

Ids ids_of(const Semilattice& s) { return s.ids(); }

// Order-isomorphism check along a given bijection.
bool iso(const Semilattice& a, const Semilattice& b, const std::map<std::string, std::string>& f) {
  if (a.size() != b.size()) return false;
  for (const auto& x : a.ids())
    for (const auto& y : a.ids())
      if (f.at(a.meet(x, y)) != b.meet(f.at(x), f.at(y))) return false;
  return true;
}

}  // namespace

TEST_SUITE("semilattice") {
  TEST_CASE("meet on small models") {
    auto c = fixtures::chain({"O", "X", "Y"});
    CHECK(c.meet("X", "Y") == "X");
    CHECK(c.meet("Y", "Y") == "Y");
    auto ax = fixtures::axes_model();
    CHECK(ax.meet("X1", "X2") == "O");
    CHECK(ax.meet("X1", "X12") == "X1");
    CHECK_THROWS_AS(ax.meet("X1", "nope"), slat::InvalidArgument);
  }

  TEST_CASE("atoms") {
    CHECK(ids_of(fixtures::axes_model()) == Ids{"O", "X1", "X12", "X2"});
    CHECK(fixtures::axes_model().atoms() == Ids{"X1", "X2"});
    CHECK(fixtures::chain({"O", "X", "Y"}).atoms() == Ids{"X"});
    CHECK(fixtures::chain({"O"}).atoms().empty());
  }

  TEST_CASE("filters and ideals") {
    auto ax = fixtures::axes_model();
    CHECK(ids_of(ax.filter_geq("X1")) == Ids{"X1", "X12"});
    CHECK(ids_of(ax.filter_geq("O")) == ids_of(ax));
    CHECK(ids_of(ax.filter_geq("X12")) == Ids{"X12"});
    CHECK(ids_of(ax.ideal_leq("X1")) == Ids{"O", "X1"});
    CHECK(ids_of(ax.ideal_leq("O")) == Ids{"O"});
    CHECK(ids_of(ax.ideal_leq("X12")) == ids_of(ax));
    CHECK(ax.filter_geq("X1").least() == std::optional<std::string>("X1"));
  }

  TEST_CASE("quotients") {
    auto ax = fixtures::axes_model();
    auto q = ax.quotient("X1");
    REQUIRE(q.size() == 2);
    CHECK(q.least() == std::optional<std::string>("O"));
    CHECK(q.dim("O") == 0);
    CHECK(q.dim(slat::quotient_id("X12", "X1")) == 1);

    auto same = ax.quotient("O");
    CHECK(same.table() == ax.table());

    auto cube = fixtures::full_axes(3);
    REQUIRE(cube.size() == 8);
    auto q3 = cube.quotient("X2");
    CHECK(q3.size() == 4);
    CHECK(q3.atoms().size() == 2);
    CHECK(q3.dim(slat::quotient_id("X123", "X2")) == 2);
  }

  TEST_CASE("quotient is isomorphic to the filter") {
    auto cube = fixtures::full_axes(3);
    for (const auto& x : cube.ids()) {
      auto f = cube.filter_geq(x);
      auto q = cube.quotient(x);
      std::map<std::string, std::string> m;
      for (const auto& e : f.ids()) m[e] = (x == "O") ? e : (e == x ? "O" : slat::quotient_id(e, x));
      CHECK(iso(f, q, m));
      CHECK(q.least() == std::optional<std::string>("O"));
    }
  }

  TEST_CASE("covers") {
    auto ax = fixtures::axes_model();
    CHECK(ax.covers("O") == Ids{"X1", "X2"});
    CHECK(fixtures::chain({"O", "X", "Y"}).covers("X") == Ids{"Y"});
    CHECK(ax.covers("X12").empty());

    // covers(x) pulled back from atoms of the quotient
    auto cube = fixtures::full_axes(3);
    for (const auto& x : cube.ids()) {
      if (cube.covers(x).empty()) continue;
      Ids pulled;
      for (const auto& e : cube.covers(x)) pulled.push_back(x == "O" ? e : slat::quotient_id(e, x));
      std::sort(pulled.begin(), pulled.end());
      CHECK(cube.quotient(x).atoms() == pulled);
    }
  }

  TEST_CASE("atoms of an ideal are the atoms below its top") {
    auto cube = fixtures::full_axes(3);
    const auto all = cube.atoms();
    for (const auto& x : cube.ids()) {
      auto ideal = cube.ideal_leq(x);
      Ids expect;
      for (const auto& a : all)
        if (ideal.contains(a)) expect.push_back(a);
      CHECK(ideal.atoms() == expect);
    }
  }

  TEST_CASE("validation diagnostics") {
    std::vector<slat::SubspaceId> e{{"O", 0}, {"X", 1}, {"Y", 1}};
    slat::MeetTable good{{"O", "O", "O"}, {"O", "X", "O"}, {"O", "O", "Y"}};
    CHECK(Semilattice::check_table(e, good).empty());

    auto unknown = good;
    unknown[1][2] = "Q";
    auto d = Semilattice::check_table(e, unknown, "/semilattice");
    REQUIRE_FALSE(d.empty());
    CHECK(d[0].path == "/semilattice/meet/1/2");

    auto noncomm = good;
    noncomm[1][2] = "X";
    d = Semilattice::check_table(e, noncomm);
    REQUIRE_FALSE(d.empty());
    CHECK(d[0].reason.find("commutative") != std::string::npos);

    // commutative and idempotent but not associative
    std::vector<slat::SubspaceId> e3{{"a", 0}, {"b", 0}, {"c", 0}};
    slat::MeetTable na{{"a", "a", "c"}, {"a", "b", "b"}, {"c", "b", "c"}};
    d = Semilattice::check_table(e3, na);
    REQUIRE_FALSE(d.empty());
    CHECK(d[0].reason.find("associative") != std::string::npos);
    CHECK(d[0].reason.find("(a,b,c)") != std::string::npos);

    std::vector<slat::SubspaceId> bad_dims{{"O", 2}, {"X", 1}, {"Y", 1}};
    d = Semilattice::check_table(bad_dims, good);
    REQUIRE_FALSE(d.empty());
    CHECK(d[0].reason.find("monotone") != std::string::npos);

    std::vector<slat::SubspaceId> dup{{"O", 0}, {"O", 1}, {"Y", 1}};
    CHECK_FALSE(Semilattice::check_table(dup, good).empty());
    CHECK_THROWS_AS(Semilattice(e, unknown), slat::InvalidArgument);
  }

  TEST_CASE("random subset lattices satisfy the axioms") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 40; ++trial) {
      // random intersection-closed family of subsets of {1..5}
      std::set<std::set<int>> fam{{}};
      std::uniform_int_distribution<int> bit(0, 1);
      for (int k = 0; k < 6; ++k) {
        std::set<int> s;
        for (int a = 1; a <= 5; ++a)
          if (bit(rng)) s.insert(a);
        fam.insert(s);
      }
      bool grew = true;
      while (grew) {
        grew = false;
        for (const auto& a : std::vector<std::set<int>>(fam.begin(), fam.end()))
          for (const auto& b : std::vector<std::set<int>>(fam.begin(), fam.end())) {
            std::set<int> m;
            std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(m, m.begin()));
            grew = fam.insert(m).second || grew;
          }
      }
      auto s = fixtures::axes_lattice({fam.begin(), fam.end()});
      REQUIRE(s.size() <= 32);
      CHECK(Semilattice::check_table(s.elements(), s.table()).empty());
      for (const auto& a : s.ids())
        for (const auto& b : s.ids()) {
          CHECK(s.leq(s.meet(a, b), a));
          CHECK(s.leq(s.meet(a, b), b));
        }
      CHECK(s.least() == std::optional<std::string>("O"));
    }
  }
}
