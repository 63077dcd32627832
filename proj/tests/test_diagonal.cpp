#include "doctest.h"
#include "msalg/diagonal.hpp"
#include "msalg/error.hpp"
#include "msalg/hetero.hpp"
#include "msalg/homog.hpp"
#include "support.hpp"

using namespace msalg;
using msalg::test::corpus;
using msalg::test::Table;

namespace {

OpTable unary(std::size_t n, std::vector<Elem> v) {
  return OpTable(uniform_profile(1, 0), {n}, n, std::move(v));
}

OpTable table(std::size_t n, std::size_t arity, Table v) {
  return OpTable(uniform_profile(arity, 0), std::vector<std::size_t>(arity, n), n, std::move(v));
}

/// The three defining equations, evaluated directly from the tables.
bool pair_oracle(std::size_t n, Table const& d, std::vector<Table> const& e) {
  std::size_t ns = e.size();
  std::vector<std::size_t> radices(ns, n);
  auto row = [&](std::vector<Elem> const& x) {
    std::size_t r = 0;
    for (Elem v : x) r = r * n + v;
    return r;
  };
  bool ok = true;
  msalg::test::for_each_tuple(radices, [&](auto const& x) {
    Elem dx = d[row(x)];
    std::vector<Elem> ex(ns);
    for (std::size_t s = 0; s < ns; ++s) {
      if (e[s][dx] != e[s][x[s]]) ok = false;
      ex[s] = e[s][x[s]];
    }
    if (d[row(ex)] != dx) ok = false;
  });
  for (Elem a = 0; a < n; ++a) {
    if (d[row(std::vector<Elem>(ns, a))] != a) ok = false;
  }
  return ok;
}

bool diagonal_identity_oracle(std::size_t n, std::size_t ns, Table const& d) {
  std::vector<std::size_t> radices(ns * ns, n);
  auto row = [&](std::vector<Elem> const& x) {
    std::size_t r = 0;
    for (Elem v : x) r = r * n + v;
    return r;
  };
  bool ok = true;
  msalg::test::for_each_tuple(radices, [&](auto const& x) {
    std::vector<Elem> inner(ns);
    std::vector<Elem> diag(ns);
    for (std::size_t s = 0; s < ns; ++s) {
      inner[s] = d[row(std::vector<Elem>(x.begin() + static_cast<long>(s * ns),
                                         x.begin() + static_cast<long>((s + 1) * ns)))];
      diag[s] = x[s * ns + s];
    }
    if (d[row(inner)] != d[row(diag)]) ok = false;
  });
  return ok;
}

DiagonalPair tiny_pair(HomogenizedAlgebra const& h) {
  // e_u(a,x) = (a, cu(a)), e_w(a,x) = (cw(x), x)
  Table eu;
  Table ew;
  for (Elem c = 0; c < 6; ++c) {
    auto ax = h.decode(c);
    std::vector<Elem> u{ax[0], ax[0]};
    std::vector<Elem> w{std::min<Elem>(ax[1], 1), ax[1]};
    eu.push_back(h.encode(u));
    ew.push_back(h.encode(w));
  }
  DiagonalPair p;
  p.d = h.algebra.op(HomogenizedAlgebra::diagonal_symbol);
  p.e = {unary(6, eu), unary(6, ew)};
  return p;
}

DiagonalPair canonical(SortedAlgebra const& a) {
  HomogenizedAlgebra h = homogenize(a);
  return canonical_pair(h, cross_family(a, is_pure(a)));
}

}  // namespace

TEST_CASE("identity pair with one index is valid") {
  SortedAlgebra g = corpus("G_z3");
  DiagonalPair p{unary(3, {0, 1, 2}), {unary(3, {0, 1, 2})}, {}, {}};
  DiagonalReport r = verify_diagonal_pair(g, p);
  CHECK(r.valid);
  CHECK(satisfies_diagonal_identity(p.d));
}

TEST_CASE("the hand-written pair on H(A_tiny)") {
  HomogenizedAlgebra h = homogenize(corpus("A_tiny"));
  DiagonalPair p = tiny_pair(h);
  DiagonalReport r = verify_diagonal_pair(h.algebra, p);
  CHECK(r.valid);
  CHECK(r.eq3_index_independent);
  std::vector<Table> e;
  for (auto const& t : p.e) e.emplace_back(t.values().begin(), t.values().end());
  CHECK(pair_oracle(6, Table(p.d.values().begin(), p.d.values().end()), e));
  CHECK(p.e[0] == canonical(corpus("A_tiny")).e[0]);
  CHECK(p.e[1] == canonical(corpus("A_tiny")).e[1]);
}

TEST_CASE("identity as e_u breaks the first equation") {
  HomogenizedAlgebra h = homogenize(corpus("A_tiny"));
  DiagonalPair p = tiny_pair(h);
  p.e[0] = unary(6, {0, 1, 2, 3, 4, 5});
  DiagonalReport r = verify_diagonal_pair(h.algebra, p);
  CHECK_FALSE(r.valid);
  REQUIRE_FALSE(r.eq1[0].holds);
  auto const& x = r.eq1[0].counterexample;
  REQUIRE(x.size() == 2);
  CHECK(p.e[0].at_row(p.d.at(x)) != p.e[0].at_row(x[0]));
}

TEST_CASE("diagonal identity against direct evaluation") {
  std::size_t n = 3;
  Table first;
  Table second;
  Table minus;
  for (Elem x = 0; x < n; ++x) {
    for (Elem y = 0; y < n; ++y) {
      first.push_back(x);
      second.push_back(y);
      minus.push_back((x + n - y) % n);
    }
  }
  for (auto const& t : {first, second, minus}) {
    CHECK(satisfies_diagonal_identity(table(n, 2, t)) == diagonal_identity_oracle(n, 2, t));
  }
  CHECK(satisfies_diagonal_identity(table(n, 2, first)));
  CHECK_FALSE(satisfies_diagonal_identity(table(n, 2, minus)));
}

TEST_CASE("pair search agrees with exhaustive candidate testing") {
  SUBCASE("two elements and projections only") {
    SortedAlgebra a = msalg::test::single_sorted(2, {});
    CHECK(find_diagonal_pairs(a, 2).empty());
    auto one = find_diagonal_pairs(a, 1);
    REQUIRE(one.size() == 1);
    CHECK(one[0].d == unary(2, {0, 1}));
  }
  SUBCASE("H(A_tiny) with two indices") {
    SortedAlgebra a = corpus("A_tiny");
    HomogenizedAlgebra h = homogenize(a);
    auto found = find_diagonal_pairs(h.algebra, 2);
    auto ds = msalg::test::clone_oracle(h.algebra, uniform_profile(2, 0))[0];
    auto es = msalg::test::clone_oracle(h.algebra, uniform_profile(1, 0))[0];
    std::set<std::vector<Table>> expected;
    for (auto const& d : ds) {
      for (auto const& e0 : es) {
        for (auto const& e1 : es) {
          if (pair_oracle(6, d, {e0, e1})) expected.insert({d, e0, e1});
        }
      }
    }
    std::set<std::vector<Table>> got;
    for (auto const& p : found) {
      got.insert({Table(p.d.values().begin(), p.d.values().end()),
                  Table(p.e[0].values().begin(), p.e[0].values().end()),
                  Table(p.e[1].values().begin(), p.e[1].values().end())});
      CHECK(satisfies_diagonal_identity(p.d));
      REQUIRE(p.d_term);
      CHECK(table_of_term(h.algebra, uniform_profile(2, 0), *p.d_term) == p.d);
    }
    CHECK(got == expected);
    CHECK(got.size() == found.size());
    DiagonalPair c = canonical(a);
    bool member = false;
    for (auto const& p : found) member |= (p.d == c.d && p.e == c.e);
    CHECK(member);
  }
  SUBCASE("one index yields only the identity pair") {
    auto found = find_diagonal_pairs(homogenize(corpus("A_malcev")).algebra, 1);
    REQUIRE(found.size() == 1);
    CHECK(found[0].d == unary(6, {0, 1, 2, 3, 4, 5}));
  }
}

TEST_CASE("neighborhoods") {
  SortedAlgebra g = corpus("G_z3");
  Neighborhood whole = neighborhood(g, unary(3, {0, 1, 2}));
  CHECK(whole.carrier == std::vector<Elem>{0, 1, 2});
  for (std::size_t k = 0; k < g.num_ops(); ++k) CHECK(whole.algebra.op(k) == g.op(k));

  SortedAlgebra z = msalg::test::single_sorted(3, {{"z", 1, {0, 0, 0}}, {"s", 1, {1, 2, 0}}});
  Neighborhood point = neighborhood(z, unary(3, {0, 0, 0}));
  CHECK(point.carrier == std::vector<Elem>{0});
  CHECK(point.algebra.carrier(0) == 1);

  HomogenizedAlgebra h = homogenize(corpus("A_tiny"));
  DiagonalPair p = tiny_pair(h);
  Neighborhood nu = neighborhood(h.algebra, p.e[0], 1);
  std::vector<Elem> fixed;
  for (Elem c = 0; c < 6; ++c) {
    if (p.e[0].at_row(c) == c) fixed.push_back(c);
  }
  CHECK(nu.carrier == fixed);
  CHECK(nu.carrier.size() == 2);
  // e_u(A) behaves like sort u: its unary operations are identity and negation
  CHECK(nu.fragment[1].size() == 2);
}

TEST_CASE("matrix products and decomposition") {
  SUBCASE("one index") {
    SortedAlgebra g = corpus("G_z3");
    DiagonalPair p{unary(3, {0, 1, 2}), {unary(3, {0, 1, 2})}, {}, {}};
    MatrixProduct mp = matrix_product_algebra(g, p, 2);
    CHECK(mp.encoding.size() == 3);
    for (std::size_t k = 0; k < g.num_ops(); ++k) CHECK(mp.algebra.op(k) == g.op(k));
    VerificationReport r = verify_decomposition(g, p, 2);
    CHECK(r.passed());
  }
  for (auto const& name : {"A_tiny", "A_malcev"}) {
    SUBCASE(name) {
      SortedAlgebra a = corpus(name);
      HomogenizedAlgebra h = homogenize(a);
      DiagonalPair p = canonical(a);
      MatrixProduct mp = matrix_product_algebra(h.algebra, p, 2);
      CHECK(mp.encoding.size() == a.product_size());
      auto split = split_elements(p, mp.factors);
      CHECK(std::set<Elem>(split.begin(), split.end()).size() == a.product_size());
      DiagonalPair mpp = matrix_product_pair(mp, p);
      CHECK(verify_diagonal_pair(mp.algebra, mpp).valid);
      VerificationReport r = verify_decomposition(h.algebra, p, 2);
      for (auto const& c : r.checks) {
        INFO(c.name << ": " << c.witness);
        CHECK(c.passed);
      }
    }
  }
}

TEST_CASE("a corrupted idempotent is rejected before decomposing") {
  HomogenizedAlgebra h = homogenize(corpus("A_tiny"));
  DiagonalPair p = tiny_pair(h);
  p.e[0] = unary(6, {0, 0, 0, 0, 0, 0});
  VerificationReport r = verify_decomposition(h.algebra, p, 1);
  REQUIRE(r.checks.size() == 1);
  CHECK(r.checks[0].name == "diagonal_pair");
  CHECK_FALSE(r.checks[0].passed);
  p.e[0] = unary(6, {1, 2, 3, 4, 5, 0});
  CHECK_THROWS_AS(matrix_product_algebra(h.algebra, p, 1), PreconditionError);
  CHECK_THROWS_AS(neighborhood(h.algebra, p.e[0]), PreconditionError);
}

TEST_CASE("composition check reports a broken map") {
  SortedAlgebra g = corpus("G_z3");
  CloneFragment f = generate_fragment(g, {uniform_profile(0, 0), uniform_profile(1, 0)});
  std::vector<std::vector<OpTable>> clone{f.tables(uniform_profile(0, 0)),
                                          f.tables(uniform_profile(1, 0))};
  CHECK(check_clone_map(clone, clone).passed());
  auto image = clone;
  std::reverse(image[1].begin(), image[1].end());
  CHECK_FALSE(check_clone_map(clone, image).passed());
}
