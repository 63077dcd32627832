#include "doctest.h"
#include "msalg/error.hpp"
#include "msalg/homog.hpp"
#include "msalg/lattice.hpp"
#include "msalg/relations.hpp"
#include "support.hpp"

using namespace msalg;
using msalg::test::corpus;

namespace {

/// Every assignment of all variables; keep the free part when all
/// conjuncts hold.
Relation pp_oracle(std::vector<Relation> const& rels, PPFormula const& phi, std::size_t n) {
  std::size_t vars = phi.free + phi.exist;
  std::vector<std::vector<Elem>> out;
  msalg::test::for_each_tuple(std::vector<std::size_t>(vars, n), [&](auto const& x) {
    for (auto const& c : phi.conjuncts) {
      std::vector<Elem> t;
      for (auto v : c.coords) t.push_back(x[v]);
      if (!rels[c.relation].contains(t)) return;
    }
    out.emplace_back(x.begin(), x.begin() + static_cast<long>(phi.free));
  });
  return make_relation(phi.free, out);
}

bool invariant_oracle(SortedAlgebra const& alg, Relation const& r) {
  for (auto const& op : alg.ops()) {
    std::vector<std::size_t> pick(op.arity(), r.tuples.size());
    bool ok = true;
    msalg::test::for_each_tuple(pick, [&](auto const& idx) {
      if (!ok) return;
      std::vector<Elem> image(r.arity);
      std::vector<Elem> args(op.arity());
      for (std::size_t j = 0; j < r.arity; ++j) {
        for (std::size_t i = 0; i < op.arity(); ++i) args[i] = r.tuples[idx[i]][j];
        image[j] = op.at(args);
      }
      if (!r.contains(image)) ok = false;
    });
    if (!ok) return false;
  }
  return true;
}

SortedAlgebra one_per_sort() {
  SortedSignature sig;
  sig.add_sort("u");
  sig.add_sort("w");
  Profile p{{0, 1}, 1};
  sig.add_symbol("f", p);
  return SortedAlgebra(sig, {1, 1}, {OpTable(p, {1, 1}, 1, {0})});
}

}  // namespace

TEST_CASE("unary invariant relations are the products of subuniverses") {
  for (auto const& name : {"A_tiny", "A_malcev", "A_semilat", "NonPure"}) {
    SortedAlgebra a = corpus(name);
    HomogenizedAlgebra h = homogenize(a);
    std::set<Relation> from_subs;
    for (auto const& b : enumerate_subuniverses(a)) {
      auto m = homog_subset(h, b);
      std::vector<std::vector<Elem>> t;
      for (Elem x = 0; x < m.size(); ++x) {
        if (m[x]) t.push_back({x});
      }
      from_subs.insert(make_relation(1, t));
    }
    auto inv = inv_enumerate(a, 1);
    CHECK(std::set<Relation>(inv.begin(), inv.end()) == from_subs);
  }
}

TEST_CASE("invariant relations are the subuniverses of powers") {
  CHECK(inv_enumerate(one_per_sort(), 2).size() == 2);
  for (auto const& name : {"G_z3", "A_lattice"}) {
    SortedAlgebra a = corpus(name);
    SortedAlgebra h = homogenize(a).algebra;
    std::size_t n = h.carrier(0);
    auto inv = inv_enumerate(a, 2);
    std::set<Relation> expected;
    for (auto const& m : msalg::test::subuniverse_oracle(direct_product({h, h}))) {
      std::vector<std::vector<Elem>> t;
      for (Elem x = 0; x < n * n; ++x) {
        if (m[0][x]) t.push_back({x / static_cast<Elem>(n), x % static_cast<Elem>(n)});
      }
      expected.insert(make_relation(2, t));
    }
    CHECK(std::set<Relation>(inv.begin(), inv.end()) == expected);
    Relation empty = make_relation(2, {});
    std::vector<std::vector<Elem>> all;
    for (Elem x = 0; x < n; ++x) {
      for (Elem y = 0; y < n; ++y) all.push_back({x, y});
    }
    // the empty relation is closed unless H(A) has a constant
    bool constants = std::any_of(h.ops().begin(), h.ops().end(),
                                 [](OpTable const& op) { return op.arity() == 0; });
    CHECK(std::count(inv.begin(), inv.end(), empty) == (constants ? 0 : 1));
    CHECK(std::count(inv.begin(), inv.end(), make_relation(2, all)) == 1);
  }
  SortedAlgebra tiny = corpus("A_tiny");
  HomogenizedAlgebra h = homogenize(tiny);
  for (auto const& r : inv_enumerate(tiny, 2)) CHECK(invariant_oracle(h.algebra, r));
  auto sorted = inv_enumerate_sorted(tiny, 2);
  CHECK(sorted.size() == inv_enumerate(tiny, 2).size());
  std::set<Relation> reshaped;
  for (auto const& r : sorted) reshaped.insert(reshape(h, r));
  auto inv = inv_enumerate(tiny, 2);
  CHECK(reshaped == std::set<Relation>(inv.begin(), inv.end()));
}

TEST_CASE("pp evaluation") {
  std::size_t n = 3;
  Relation less = make_relation(2, {{0, 1}, {0, 2}, {1, 2}});
  Relation odd = make_relation(1, {{1}});
  std::vector<Relation> rels{less, odd};

  PPFormula same;
  same.free = 2;
  same.conjuncts = {{0, {0, 1}}};
  CHECK(pp_evaluate(rels, same, n) == less);

  PPFormula chain;
  chain.free = 2;
  chain.exist = 1;
  chain.conjuncts = {{0, {0, 2}}, {0, {2, 1}}};
  CHECK(pp_evaluate(rels, chain, n) == make_relation(2, {{0, 2}}));
  CHECK(to_string(chain) == "exists y0: R0(x0,y0) & R0(y0,x1)");

  for (auto const& phi : pp_formulas({2, 1}, 3, 2)) {
    CHECK(pp_evaluate(rels, phi, n) == pp_oracle(rels, phi, n));
  }
  PPFormula bad;
  bad.free = 1;
  bad.conjuncts = {{1, {0, 0}}};
  CHECK_THROWS(pp_evaluate(rels, bad, n));
}

TEST_CASE("pp definitions preserve invariance") {
  SortedAlgebra a = corpus("A_tiny");
  HomogenizedAlgebra h = homogenize(a);
  std::vector<Relation> rels;
  for (auto& r : inv_enumerate(a, 1)) rels.push_back(r);
  auto two = inv_enumerate(a, 2);
  for (std::size_t i = 0; i < two.size(); i += 9) rels.push_back(two[i]);
  std::vector<std::size_t> arities;
  for (auto const& r : rels) arities.push_back(r.arity);
  auto formulas = pp_formulas(arities, 3, 2);
  CHECK(!formulas.empty());
  for (std::size_t k = 0; k < formulas.size(); k += 7) {
    Relation r = pp_evaluate(rels, formulas[k], 6);
    CHECK(is_invariant(h.algebra, r));
    CHECK(invariant_oracle(h.algebra, r));
  }
}

TEST_CASE("invariant relations correspond") {
  SortedAlgebra a = corpus("A_tiny");
  VerificationReport r = verify_inv_iso(a, 2);
  for (auto const& c : r.checks) {
    INFO(c.name << ": " << c.witness);
    CHECK(c.passed);
  }
  CHECK(verify_inv_iso(corpus("G_z3"), 2).passed());
  CHECK_THROWS_AS(verify_inv_iso(corpus("NonPure"), 1), PreconditionError);
}
