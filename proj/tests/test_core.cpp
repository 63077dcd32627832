#include "doctest.h"
#include "msalg/clone.hpp"
#include "msalg/error.hpp"
#include "msalg/term.hpp"
#include "support.hpp"

using namespace msalg;
using msalg::test::corpus;

namespace {

Profile prof(std::vector<SortId> in, SortId cod) { return Profile{std::move(in), cod}; }

std::vector<OpTable> projections(SortedAlgebra const& alg, Profile const& inputs) {
  std::vector<OpTable> out;
  for (std::size_t i = 0; i < inputs.arity(); ++i) {
    out.push_back(projection(alg.carriers(), prof(inputs.inputs, inputs.inputs[i]), i));
  }
  return out;
}

/// Tables of the fragment with the given inputs and output sort.
std::vector<OpTable> with(CloneFragment const& frag, std::vector<SortId> const& in, SortId cod) {
  return frag.tables(prof(in, cod));
}

}  // namespace

TEST_CASE("projection selects its argument") {
  std::vector<std::size_t> two{2};
  OpTable p = projection(two, prof({0, 0}, 0), 0);
  CHECK(std::vector<Elem>(p.values().begin(), p.values().end()) == std::vector<Elem>{0, 0, 1, 1});

  std::vector<std::size_t> uw{2, 3};
  OpTable q = projection(uw, prof({0, 1}, 1), 1);
  CHECK(std::vector<Elem>(q.values().begin(), q.values().end()) ==
        std::vector<Elem>{0, 1, 2, 0, 1, 2});
  CHECK_THROWS_AS(projection(uw, prof({0, 1}, 1), 0), SortError);
  CHECK_THROWS_AS(projection(uw, prof({0, 5}, 1), 1), SortError);
}

TEST_CASE("OpTable rejects malformed tables") {
  CHECK_THROWS_AS(OpTable(prof({0}, 0), {2}, 2, {0}), ShapeError);
  CHECK_THROWS_AS(OpTable(prof({0}, 0), {2}, 2, {0, 2}), RangeError);
}

TEST_CASE("compose agrees with pointwise evaluation on A_malcev") {
  SortedAlgebra a = corpus("A_malcev");
  OpTable const& pu = a.op(*a.signature().find_symbol("pu"));
  Profile in = prof({0, 0, 0}, 0);
  auto pi = projections(a, in);
  std::vector<OpTable> gs{pi[1], pi[0], pi[1]};
  OpTable c = compose(pu, gs);
  for (Elem x = 0; x < 2; ++x) {
    for (Elem y = 0; y < 2; ++y) {
      for (Elem z = 0; z < 2; ++z) {
        std::vector<Elem> args{x, y, z};
        std::vector<Elem> inner{y, x, y};
        CHECK(c.at(args) == pu.at(inner));
      }
    }
  }
}

TEST_CASE("outer and inner identity laws hold on every generated table") {
  for (auto const& name : msalg::test::corpus_names()) {
    SortedAlgebra a = corpus(name);
    std::size_t ns = a.num_sorts();
    std::vector<Profile> profiles;
    for (SortId s = 0; s < ns; ++s) {
      for (SortId t = 0; t < ns; ++t) {
        profiles.push_back(prof({s, t}, s));
        profiles.push_back(prof({s, t}, t));
      }
    }
    CloneFragment frag = generate_fragment(a, profiles);
    for (auto const& p : profiles) {
      auto pi = projections(a, p);
      for (auto const& f : frag.tables(p)) {
        CHECK(compose(f, pi) == f);
      }
      // pi_i(g_0, g_1) = g_i
      for (std::size_t i = 0; i < 2; ++i) {
        OpTable outer = projection(a.carriers(), prof(p.inputs, p.inputs[i]), i);
        auto g0 = frag.tables(prof(p.inputs, p.inputs[0]));
        auto g1 = frag.tables(prof(p.inputs, p.inputs[1]));
        for (std::size_t k = 0; k < std::min<std::size_t>(g0.size(), 4); ++k) {
          for (std::size_t l = 0; l < std::min<std::size_t>(g1.size(), 4); ++l) {
            std::vector<OpTable> gs{g0[k], g1[l]};
            CHECK(compose(outer, gs) == gs[i]);
          }
        }
      }
    }
  }
}

TEST_CASE("compose is associative on binary fragments") {
  for (auto const& name : msalg::test::corpus_names()) {
    SortedAlgebra a = corpus(name);
    std::size_t ns = a.num_sorts();
    std::vector<Profile> profiles;
    for (SortId s = 0; s < ns; ++s) {
      for (SortId t = 0; t < ns; ++t) {
        for (SortId c = 0; c < ns; ++c) profiles.push_back(prof({s, t}, c));
      }
    }
    CloneFragment frag = generate_fragment(a, profiles);
    std::size_t checked = 0;
    // f : (s,t) -> c, g : (p,q) -> s and (p,q) -> t, h : (p,q) -> p and (p,q) -> q
    for (auto const& pf : profiles) {
      for (SortId p = 0; p < ns; ++p) {
        for (SortId q = 0; q < ns; ++q) {
          auto g0 = with(frag, {p, q}, pf.inputs[0]);
          auto g1 = with(frag, {p, q}, pf.inputs[1]);
          auto h0 = with(frag, {p, q}, p);
          auto h1 = with(frag, {p, q}, q);
          auto fs = frag.tables(pf);
          auto cap = [](auto const& v) { return std::min<std::size_t>(v.size(), 3); };
          for (std::size_t i = 0; i < cap(fs); ++i) {
            for (std::size_t j = 0; j < cap(g0); ++j) {
              for (std::size_t k = 0; k < cap(g1); ++k) {
                for (std::size_t l = 0; l < cap(h0); ++l) {
                  for (std::size_t m = 0; m < cap(h1); ++m) {
                    std::vector<OpTable> hs{h0[l], h1[m]};
                    std::vector<OpTable> gs{g0[j], g1[k]};
                    std::vector<OpTable> ghs{compose(g0[j], hs), compose(g1[k], hs)};
                    CHECK(compose(compose(fs[i], gs), hs) == compose(fs[i], ghs));
                    ++checked;
                  }
                }
              }
            }
          }
        }
      }
    }
    CHECK(checked > 0);
  }
}

TEST_CASE("eval_term agrees with table_of_term") {
  SortedAlgebra a = corpus("A_tiny");
  auto const& sig = a.signature();
  std::size_t cu = *sig.find_symbol("cu");
  std::size_t cw = *sig.find_symbol("cw");
  std::size_t n = *sig.find_symbol("n");
  Profile p = prof({1, 0}, 1);
  Term x0 = Term::variable(0, 1);
  Term x1 = Term::variable(1, 0);
  // cu(n(cw(cu(n(x1)))))
  Term t = Term::apply(
      cu,
      {Term::apply(n, {Term::apply(cw, {Term::apply(cu, {Term::apply(n, {x1}, 0)}, 1)}, 0)}, 0)},
      1);
  check_term(sig, p, t);
  OpTable tab = table_of_term(a, p, t);
  std::vector<Elem> manual;
  for (Elem w = 0; w < 3; ++w) {
    for (Elem u = 0; u < 2; ++u) {
      std::vector<Elem> args{w, u};
      CHECK(eval_term(a, p, t, args) == tab.at(args));
      Elem v = 1 - u;          // n
      Elem vw = v;             // cu
      Elem back = std::min<Elem>(vw, 1);  // cw
      manual.push_back(1 - back);         // n then cu
    }
  }
  CHECK(std::vector<Elem>(tab.values().begin(), tab.values().end()) == manual);
  CHECK(table_of_term(a, p, x0) == projection(a.carriers(), p, 0));
  CHECK_THROWS_AS(check_term(sig, prof({0}, 0), Term::apply(cu, {Term::variable(0, 0)}, 1)),
                  SortError);
}

TEST_CASE("applying a symbol to its variables yields its table") {
  SortedAlgebra a = corpus("A_semilat");
  for (std::size_t k = 0; k < a.num_ops(); ++k) {
    Profile const& p = a.op(k).profile();
    std::vector<Term> vars;
    for (std::size_t i = 0; i < p.arity(); ++i) vars.push_back(Term::variable(i, p.inputs[i]));
    CHECK(table_of_term(a, p, Term::apply(k, vars, p.cod)) == a.op(k));
  }
}

TEST_CASE("meet of top with top is top") {
  SortedAlgebra a = msalg::test::single_sorted(2, {{"and", 2, {0, 0, 0, 1}}});
  Term t = Term::apply(0, {Term::variable(0, 0), Term::variable(1, 0)}, 0);
  std::vector<Elem> args{1, 1};
  CHECK(eval_term(a, uniform_profile(2, 0), t, args) == 1);
}

TEST_CASE("quotient maps are homomorphisms and compose") {
  SortedAlgebra a = corpus("A_malcev");
  std::vector<std::vector<Elem>> labels{{0, 0}, {0, 1, 2}};
  Morphism m = quotient_map(a, labels);
  CHECK(m.target.carrier(0) == 1);
  CHECK(m.target.carrier(1) == 3);
  CHECK(is_homomorphism(a, m.target, m.map));
  SortedMap id = identity_map(a);
  CHECK(is_homomorphism(a, a, id));
  SortedMap c = compose_maps(id, m.map);
  for (std::size_t s = 0; s < 2; ++s) CHECK(c.maps[s] == m.map.maps[s]);
  CHECK_THROWS_AS(quotient_map(a, {{0, 1}, {0, 0, 2}}), PreconditionError);
}
