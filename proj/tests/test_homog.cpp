#include "doctest.h"
#include "msalg/clone.hpp"
#include "msalg/diagonal.hpp"
#include "msalg/homog.hpp"
#include "msalg/lattice.hpp"
#include "support.hpp"

using namespace msalg;
using msalg::test::corpus;

namespace {

std::vector<OpTable> projection_components(SortedAlgebra const& a, std::size_t lambda,
                                           std::size_t i0) {
  std::size_t ns = a.num_sorts();
  std::vector<OpTable> comps;
  for (SortId s = 0; s < ns; ++s) {
    comps.push_back(projection(a.carriers(), interleaved_profile(ns, lambda, s), i0 * ns + s));
  }
  return comps;
}

bool unary_homomorphism(SortedAlgebra const& a, OpTable const& h) {
  for (auto const& op : a.ops()) {
    bool ok = true;
    msalg::test::for_each_tuple(msalg::test::input_sizes(a, op.profile()), [&](auto const& x) {
      std::vector<Elem> hx;
      for (Elem v : x) hx.push_back(h.at_row(v));
      if (h.at_row(op.at(x)) != op.at(hx)) ok = false;
    });
    if (!ok) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("one sort: D is the identity and the lifts are the operations") {
  SortedAlgebra a = corpus("G_z3");
  HomogenizedAlgebra h = homogenize(a);
  CHECK(h.algebra.carrier(0) == 3);
  CHECK(h.algebra.op(HomogenizedAlgebra::diagonal_symbol) ==
        projection(a.carriers(), uniform_profile(1, 0), 0));
  for (std::size_t k = 0; k < a.num_ops(); ++k) {
    CHECK(std::vector<Elem>(h.algebra.op(k + 1).values().begin(),
                            h.algebra.op(k + 1).values().end()) ==
          std::vector<Elem>(a.op(k).values().begin(), a.op(k).values().end()));
  }
}

TEST_CASE("H(A_tiny) has six elements and D picks the diagonal") {
  SortedAlgebra a = corpus("A_tiny");
  HomogenizedAlgebra h = homogenize(a);
  REQUIRE(h.algebra.carrier(0) == 6);
  OpTable const& d = h.algebra.op(HomogenizedAlgebra::diagonal_symbol);
  for (Elem a0 = 0; a0 < 2; ++a0) {
    for (Elem x = 0; x < 3; ++x) {
      for (Elem b = 0; b < 2; ++b) {
        for (Elem y = 0; y < 3; ++y) {
          std::vector<Elem> l{a0, x};
          std::vector<Elem> r{b, y};
          std::vector<Elem> out{a0, y};
          std::vector<Elem> args{h.encode(l), h.encode(r)};
          CHECK(d.at(args) == h.encode(out));
        }
      }
    }
  }
  CHECK(satisfies_diagonal_identity(d));
}

TEST_CASE("D satisfies the diagonal identity on every corpus algebra") {
  for (auto const& name : msalg::test::corpus_names()) {
    HomogenizedAlgebra h = homogenize(corpus(name));
    CHECK(satisfies_diagonal_identity(h.algebra.op(HomogenizedAlgebra::diagonal_symbol)));
  }
}

TEST_CASE("homog_op of projections") {
  for (auto const& name : {"A_tiny", "A_malcev", "G_z3"}) {
    SortedAlgebra a = corpus(name);
    HomogenizedAlgebra h = homogenize(a);
    std::vector<std::size_t> hc{h.algebra.carrier(0)};
    for (std::size_t lambda = 1; lambda <= 2; ++lambda) {
      for (std::size_t i = 0; i < lambda; ++i) {
        CHECK(homog_op(a, projection_components(a, lambda, i)) ==
              projection(hc, uniform_profile(lambda, 0), i));
      }
    }
    std::size_t ns = a.num_sorts();
    std::vector<OpTable> diag;
    for (SortId s = 0; s < ns; ++s) {
      diag.push_back(projection(a.carriers(), interleaved_profile(ns, ns, s), s * ns + s));
    }
    CHECK(homog_op(a, diag) == h.algebra.op(HomogenizedAlgebra::diagonal_symbol));
  }
}

TEST_CASE("homog_op commutes with composition") {
  for (auto const& name : {"A_tiny", "A_semilat"}) {
    SortedAlgebra a = corpus(name);
    std::size_t ns = a.num_sorts();
    std::vector<Profile> outer;
    std::vector<Profile> inner;
    for (SortId s = 0; s < ns; ++s) {
      outer.push_back(interleaved_profile(ns, 2, s));
      inner.push_back(interleaved_profile(ns, 1, s));
    }
    CloneFragment fo = generate_fragment(a, outer);
    CloneFragment fi = generate_fragment(a, inner);
    // f: binary, g_0, g_1: unary, all as component tuples, sampled by index
    auto pick = [&](CloneFragment const& f, std::vector<Profile> const& ps, std::size_t seed) {
      std::vector<OpTable> comps;
      for (SortId s = 0; s < ns; ++s) {
        comps.push_back(f.table(ps[s], (seed * 7 + s * 3) % f.size(ps[s])));
      }
      return comps;
    };
    for (std::size_t seed = 0; seed < 25; ++seed) {
      auto f = pick(fo, outer, seed);
      auto g0 = pick(fi, inner, seed + 1);
      auto g1 = pick(fi, inner, seed * 5 + 2);
      std::vector<OpTable> composed;
      for (SortId s = 0; s < ns; ++s) {
        std::vector<OpTable> args;
        for (std::size_t i = 0; i < 2; ++i) {
          for (SortId t = 0; t < ns; ++t) args.push_back(i == 0 ? g0[t] : g1[t]);
        }
        composed.push_back(compose(f[s], args));
      }
      std::vector<OpTable> hs{homog_op(a, g0), homog_op(a, g1)};
      CHECK(homog_op(a, composed) == compose(homog_op(a, f), hs));
    }
  }
}

TEST_CASE("homogenization adequacy at arity up to two") {
  for (auto const& name : msalg::test::corpus_names()) {
    SortedAlgebra a = corpus(name);
    if (a.product_size() > 8) continue;
    HomogenizedAlgebra h = homogenize(a);
    for (std::size_t lambda = 0; lambda <= 2; ++lambda) {
      std::vector<Profile> ps;
      for (SortId s = 0; s < a.num_sorts(); ++s) {
        ps.push_back(interleaved_profile(a.num_sorts(), lambda, s));
      }
      CloneFragment frag = generate_fragment(a, ps);
      auto oracle = homog_fragment_oracle(frag, lambda);
      Profile hp = uniform_profile(lambda, 0);
      CloneFragment direct = generate_fragment(h.algebra, {hp});
      INFO(name << " lambda " << lambda);
      CHECK(canonical_set(direct.tables(hp)) == oracle);
      // independent naive closure of H(A)
      CHECK(msalg::test::clone_oracle(h.algebra, hp)[0] == msalg::test::values_of(oracle));
    }
    CHECK(verify_homogenization(a, 2).passed());
  }
}

TEST_CASE("oracle degenerate cases") {
  SortedAlgebra tiny = corpus("A_tiny");
  std::vector<Profile> ps{interleaved_profile(2, 0, 0), interleaved_profile(2, 0, 1)};
  CHECK(homog_fragment_oracle(generate_fragment(tiny, ps), 0).empty());

  SortedAlgebra g = corpus("G_z3");
  Profile p = uniform_profile(1, 0);
  CloneFragment f = generate_fragment(g, {p});
  CHECK(msalg::test::values_of(homog_fragment_oracle(f, 1)) == msalg::test::values_of(f.tables(p)));
}

TEST_CASE("term lifts evaluate to the assembled operation") {
  SortedAlgebra a = corpus("A_tiny");
  HomogenizedAlgebra h = homogenize(a);
  std::size_t ns = a.num_sorts();
  std::vector<Profile> ps;
  for (SortId s = 0; s < ns; ++s) ps.push_back(interleaved_profile(ns, 2, s));
  CloneFragment frag = generate_fragment(a, ps);
  for (std::size_t k = 0; k < 10; ++k) {
    std::vector<Term> terms;
    std::vector<OpTable> tables;
    for (SortId s = 0; s < ns; ++s) {
      std::size_t idx = (k * 5 + s) % frag.size(ps[s]);
      terms.push_back(frag.witness(ps[s], idx));
      tables.push_back(frag.table(ps[s], idx));
    }
    Term t = homog_term(h, terms, 2);
    CHECK(table_of_term(h.algebra, uniform_profile(2, 0), t) == homog_op(a, tables));
  }
}

TEST_CASE("homogenized morphisms") {
  SortedAlgebra a = corpus("A_malcev");
  SUBCASE("identity") {
    HomogMorphismReport r = homog_morphism(a, a, identity_map(a));
    CHECK(r.sorted_homomorphism);
    CHECK(r.homogenized_homomorphism);
    for (Elem x = 0; x < 6; ++x) CHECK(r.map.at_row(x) == x);
  }
  SUBCASE("constant maps onto the zero subalgebra") {
    SortedMap z;
    z.maps.emplace_back(Profile{{0}, 0}, std::vector<std::size_t>{2}, 2, std::vector<Elem>{0, 0});
    z.maps.emplace_back(Profile{{1}, 1}, std::vector<std::size_t>{3}, 3,
                        std::vector<Elem>{0, 0, 0});
    HomogMorphismReport r = homog_morphism(a, a, z);
    HomogenizedAlgebra h = homogenize(a);
    CHECK(r.sorted_homomorphism == is_homomorphism(a, a, z));
    CHECK(r.homogenized_homomorphism == unary_homomorphism(h.algebra, r.map));
    CHECK(r.homogenized_homomorphism);
  }
  SUBCASE("non-homomorphism") {
    SortedMap m;
    m.maps.emplace_back(Profile{{0}, 0}, std::vector<std::size_t>{2}, 2, std::vector<Elem>{1, 0});
    m.maps.push_back(projection(a.carriers(), Profile{{1}, 1}, 0));
    HomogMorphismReport r = homog_morphism(a, a, m);
    HomogenizedAlgebra h = homogenize(a);
    CHECK_FALSE(r.sorted_homomorphism);
    CHECK(r.homogenized_homomorphism == unary_homomorphism(h.algebra, r.map));
  }
}

TEST_CASE("quotient maps transfer to homogenizations functorially") {
  for (auto const& name : msalg::test::corpus_names()) {
    SortedAlgebra a = corpus(name);
    auto cons = enumerate_congruences(a);
    for (auto const& c : cons) {
      Morphism q = quotient_map(a, c.labels);
      HomogMorphismReport r = homog_morphism(a, q.target, q.map);
      CHECK(r.sorted_homomorphism);
      CHECK(r.homogenized_homomorphism);
      // second step: collapse everything that is left
      Morphism q2 = quotient_map(q.target, full_congruence(q.target).labels);
      HomogMorphismReport r2 = homog_morphism(q.target, q2.target, q2.map);
      HomogMorphismReport r12 =
          homog_morphism(a, q2.target, compose_maps(q.map, q2.map));
      for (Elem x = 0; x < r.map.rows(); ++x) {
        CHECK(r2.map.at_row(r.map.at_row(x)) == r12.map.at_row(x));
      }
    }
  }
}
