#include "msalg/hetero.hpp"

#include <algorithm>
#include <set>

#include "msalg/error.hpp"

namespace msalg {

namespace {

std::string pair_problem(DiagonalReport const& r) {
  for (std::size_t s = 0; s < r.idempotent.size(); ++s) {
    if (!r.idempotent[s].holds) return "e_" + std::to_string(s) + " is not idempotent";
  }
  for (std::size_t s = 0; s < r.eq1.size(); ++s) {
    if (!r.eq1[s].holds) {
      return "equation (1) fails for index " + std::to_string(s) + " at " +
             to_string(r.eq1[s].counterexample);
    }
  }
  if (!r.eq2.holds) return "equation (2) fails at " + to_string(r.eq2.counterexample);
  if (!r.eq3[0].holds) return "equation (3) fails at " + to_string(r.eq3[0].counterexample);
  return {};
}

void require_valid(SortedAlgebra const& alg, DiagonalPair const& pair, char const* what) {
  DiagonalReport r = verify_diagonal_pair(alg, pair);
  if (!r.valid) {
    throw PreconditionError(std::string(what) + ": not a diagonal pair: " + pair_problem(r));
  }
}

// Visits every v : n -> S in lexicographic order.
template <class F>
void for_each_assignment(std::size_t n, std::size_t ns, F&& f) {
  std::vector<SortId> v(n, 0);
  while (true) {
    f(v);
    std::size_t i = n;
    while (i-- > 0) {
      if (++v[i] < ns) {
        break;
      }
      v[i] = 0;
    }
    if (i == static_cast<std::size_t>(-1)) {
      return;
    }
  }
}

std::size_t power(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

// Table of a unary map between two carriers.
OpTable unary_map(SortId s, std::size_t from, std::size_t to, std::vector<Elem> values) {
  return OpTable(Profile{{s}, s}, {from}, to, std::move(values));
}

}  // namespace

HeterogenizedAlgebra heterogenize(SortedAlgebra const& alg, DiagonalPair const& pair,
                                  std::vector<std::string> sort_names, Limits const& limits) {
  require_valid(alg, pair, "heterogenize");
  std::size_t ns = pair.num_sorts();
  std::size_t n = alg.carrier(0);
  if (sort_names.empty()) {
    for (std::size_t s = 0; s < ns; ++s) {
      sort_names.push_back("s" + std::to_string(s));
    }
  }
  if (sort_names.size() != ns) {
    throw ShapeError("heterogenize: one sort name per idempotent expected");
  }
  std::size_t symbols = 0;
  for (std::size_t g = 0; g < alg.num_ops(); ++g) {
    symbols += ns * power(ns, alg.op(g).arity());
    if (symbols > limits.symbol_budget) {
      throw ResourceError("heterogenized signature would exceed the symbol budget of " +
                          std::to_string(limits.symbol_budget));
    }
  }

  HeterogenizedAlgebra het;
  het.source = alg;
  het.pair = pair;
  std::vector<std::vector<Elem>> rank;
  std::vector<std::size_t> sizes;
  SortedSignature sig;
  for (std::size_t s = 0; s < ns; ++s) {
    het.carriers.push_back(fixed_points(pair.e[s]));
    rank.push_back(rank_of(het.carriers.back(), n));
    sizes.push_back(het.carriers.back().size());
    sig.add_sort(sort_names[s]);
  }
  std::vector<OpTable> ops;
  for (std::size_t g = 0; g < alg.num_ops(); ++g) {
    OpTable const& op = alg.op(g);
    std::size_t arity = op.arity();
    std::string const& gname = alg.signature().symbol(g).name;
    for (SortId t = 0; t < ns; ++t) {
      for_each_assignment(arity, ns, [&](std::vector<SortId> const& v) {
        std::string name = gname + ":" + sort_names[t] + ":";
        std::vector<std::size_t> in;
        for (std::size_t i = 0; i < arity; ++i) {
          name += (i ? "," : "") + sort_names[v[i]];
          in.push_back(sizes[v[i]]);
        }
        Profile p{v, t};
        MixedRadix shape(in);
        std::vector<Elem> values(shape.size());
        std::vector<Elem> args(arity);
        for (std::size_t r = 0; r < values.size(); ++r) {
          shape.decode(r, args);
          for (std::size_t i = 0; i < arity; ++i) {
            args[i] = het.carriers[v[i]][args[i]];
          }
          values[r] = rank[t][pair.e[t].at_row(op.at(args))];
        }
        sig.add_symbol(name, p);
        ops.emplace_back(p, std::move(in), sizes[t], std::move(values));
        het.origins.push_back({g, t, v});
      });
    }
  }
  het.algebra = SortedAlgebra(std::move(sig), std::move(sizes), std::move(ops));
  return het;
}

std::vector<OpTable> hetero_fragment_oracle(HeterogenizedAlgebra const& het,
                                            Profile const& profile, Limits const& limits) {
  check_profile(profile, het.carriers.size(), limits);
  std::size_t n = het.source.carrier(0);
  RowDomain dom;
  for (SortId s : profile.inputs) {
    dom.sorts.push_back(0);
    dom.allowed.push_back(het.carriers[s]);
  }
  auto rank = rank_of(het.carriers[profile.cod], n);
  OpTable const& e = het.pair.e[profile.cod];
  ColumnClosure c = close_columns(het.source, dom, limits);
  std::set<std::vector<Elem>> cols;
  for (std::size_t k = 0; k < c.count(0); ++k) {
    auto col = c.column(0, k);
    std::vector<Elem> v(col.size());
    for (std::size_t r = 0; r < v.size(); ++r) {
      v[r] = rank[e.at_row(col[r])];
    }
    cols.insert(std::move(v));
  }
  std::vector<OpTable> out;
  for (auto const& col : cols) {
    out.emplace_back(profile, het.algebra.input_sizes(profile), het.algebra.carrier(profile.cod),
                     col);
  }
  return canonical_set(std::move(out));
}

std::vector<Profile> all_profiles(std::size_t num_sorts, std::size_t lambda_max) {
  std::vector<Profile> out;
  for (std::size_t lambda = 0; lambda <= lambda_max; ++lambda) {
    for_each_assignment(lambda, num_sorts, [&](std::vector<SortId> const& v) {
      for (SortId t = 0; t < num_sorts; ++t) {
        out.push_back(Profile{v, t});
      }
    });
  }
  return out;
}

VerificationReport verify_hetero_fragments(HeterogenizedAlgebra const& het, std::size_t lambda_max,
                                           Limits const& limits) {
  VerificationReport rep;
  auto profiles = all_profiles(het.carriers.size(), lambda_max);
  CloneFragment frag = generate_fragment(het.algebra, profiles, limits);
  bool ok = true;
  std::string w;
  std::int64_t total = 0;
  for (auto const& p : profiles) {
    auto generated = canonical_set(frag.tables(p));
    auto oracle = hetero_fragment_oracle(het, p, limits);
    total += static_cast<std::int64_t>(oracle.size());
    if (generated != oracle && ok) {
      ok = false;
      w = "profile " + to_string(p, het.algebra.signature()) + ": " +
          std::to_string(generated.size()) + " generated vs " + std::to_string(oracle.size());
    }
  }
  rep.count("profiles", static_cast<std::int64_t>(profiles.size()));
  rep.count("operations", total);
  rep.check("fragments_match", ok, w);
  return rep;
}

DiagonalPair transfer_pair(DiagonalPair const& pair, SortedAlgebra const& target) {
  if (!pair.d_term || pair.e_terms.size() != pair.num_sorts()) {
    throw PreconditionError("transfer_pair: the pair carries no witness terms");
  }
  DiagonalPair out;
  std::size_t ns = pair.num_sorts();
  out.d = table_of_term(target, uniform_profile(ns, 0), *pair.d_term);
  out.d_term = pair.d_term;
  for (std::size_t s = 0; s < ns; ++s) {
    out.e.push_back(table_of_term(target, uniform_profile(1, 0), pair.e_terms[s]));
  }
  out.e_terms = pair.e_terms;
  return out;
}

// ---------------------------------------------------------------------------
// Single-sorted round trip
// ---------------------------------------------------------------------------

VerificationReport verify_nu_roundtrip(SortedAlgebra const& alg, DiagonalPair const& pair,
                                       std::size_t lambda_max, std::vector<Morphism> const& homs,
                                       Limits const& limits) {
  VerificationReport rep;
  DiagonalReport dr = verify_diagonal_pair(alg, pair);
  rep.check("diagonal_pair", dr.valid, pair_problem(dr));
  if (!dr.valid) {
    return rep;
  }
  std::size_t n = alg.carrier(0);
  std::size_t ns = pair.num_sorts();
  HeterogenizedAlgebra het = heterogenize(alg, pair, {}, limits);
  HomogenizedAlgebra hh = homogenize(het.algebra, limits);
  std::size_t m = hh.encoding.size();
  auto nu = split_elements(pair, het.carriers);
  rep.count("carrier", static_cast<std::int64_t>(n));
  rep.count("roundtrip_carrier", static_cast<std::int64_t>(m));

  // (i) element bijection with inverse (a_s) -> d(a_s)
  {
    bool ok = m == n;
    std::string w = ok ? "" : "carrier sizes differ";
    std::vector<Elem> comp(ns);
    for (Elem c = 0; c < m && ok; ++c) {
      hh.encoding.decode(c, comp);
      for (std::size_t s = 0; s < ns; ++s) {
        comp[s] = het.carriers[s][comp[s]];
      }
      Elem a = pair.d.at(comp);
      if (nu[a] != c) {
        ok = false;
        w = "nu(d(a_s)) differs at " + to_string(comp);
      }
    }
    std::vector<bool> hit(m, false);
    for (Elem a = 0; a < n && ok; ++a) {
      if (hit[nu[a]]) {
        ok = false;
        w = "nu is not injective at " + std::to_string(a);
      }
      hit[nu[a]] = true;
    }
    rep.check("element_bijection", ok, w);
    if (!ok) {
      return rep;
    }
  }

  // (ii) nu_lambda(f) lands in the clone of H(A_d), bijectively, and
  // transports f along the element map.
  std::vector<Profile> profiles;
  for (std::size_t lambda = 0; lambda <= lambda_max; ++lambda) {
    profiles.push_back(uniform_profile(lambda, 0));
  }
  CloneFragment frag = generate_fragment(alg, profiles, limits);
  CloneFragment hfrag = generate_fragment(hh.algebra, profiles, limits);
  std::vector<std::vector<OpTable>> clone;
  std::vector<std::vector<OpTable>> image;
  for (std::size_t lambda = 0; lambda <= lambda_max; ++lambda) {
    Profile p = uniform_profile(lambda, 0);
    std::string L = std::to_string(lambda);
    auto tables = frag.tables(p);
    std::vector<OpTable> imgs;
    for (auto const& f : tables) {
      imgs.push_back(decompose_op(pair, het.carriers, f));
    }
    auto distinct = canonical_set(imgs);
    auto target = canonical_set(hfrag.tables(p));
    rep.count("clone_" + L, static_cast<std::int64_t>(tables.size()));
    rep.count("roundtrip_clone_" + L, static_cast<std::int64_t>(target.size()));
    rep.check("injective_" + L, distinct.size() == tables.size(),
              std::to_string(tables.size() - distinct.size()) + " collisions");
    rep.check("onto_roundtrip_clone_" + L, distinct == target,
              std::to_string(distinct.size()) + " images vs " + std::to_string(target.size()) +
                  " operations of H(A_d)");

    bool transport = true;
    std::string tw;
    MixedRadix shape(std::vector<std::size_t>(lambda, n));
    std::vector<Elem> args(lambda);
    std::vector<Elem> nargs(lambda);
    for (std::size_t k = 0; k < tables.size() && transport; ++k) {
      for (std::size_t r = 0; r < shape.size(); ++r) {
        shape.decode(r, args);
        for (std::size_t i = 0; i < lambda; ++i) {
          nargs[i] = nu[args[i]];
        }
        if (imgs[k].at(nargs) != nu[tables[k].at_row(r)]) {
          transport = false;
          tw = "operation " + to_string(tables[k].values()) + " at " + to_string(args);
          break;
        }
      }
    }
    rep.check("transport_" + L, transport, tw);
    clone.push_back(std::move(tables));
    image.push_back(std::move(imgs));
  }
  // (iii) compatibility with composition
  rep.merge("", check_clone_map(clone, image, limits));

  // Naturality along supplied homomorphisms.
  std::size_t idx = 0;
  for (auto const& h : homs) {
    std::string H = "hom" + std::to_string(idx++) + "_";
    OpTable const& phi = h.map.maps.at(0);
    DiagonalPair pb = transfer_pair(pair, h.target);
    DiagonalReport br = verify_diagonal_pair(h.target, pb);
    rep.check(H + "pair_transfers", br.valid, pair_problem(br));
    if (!br.valid) {
      continue;
    }
    HeterogenizedAlgebra hb = heterogenize(h.target, pb, {}, limits);
    SortedMap phid;
    bool fixed = true;
    for (std::size_t s = 0; s < ns; ++s) {
      auto rank = rank_of(hb.carriers[s], h.target.carrier(0));
      std::vector<Elem> values;
      for (Elem a : het.carriers[s]) {
        Elem r = rank[phi.at_row(a)];
        if (r >= hb.carriers[s].size()) {
          fixed = false;
          r = 0;
        }
        values.push_back(r);
      }
      phid.maps.push_back(
          unary_map(s, het.carriers[s].size(), hb.carriers[s].size(), std::move(values)));
    }
    rep.check(H + "restricts_to_retracts", fixed);
    if (!fixed) {
      continue;
    }
    rep.check(H + "heterogenized_homomorphism", is_homomorphism(het.algebra, hb.algebra, phid));
    auto nub = split_elements(pb, hb.carriers);
    OpTable hphid = product_map(het.algebra.carriers(), hb.algebra.carriers(), phid);
    bool square = true;
    std::string sw;
    for (Elem a = 0; a < n; ++a) {
      if (nub[phi.at_row(a)] != hphid.at_row(nu[a])) {
        square = false;
        sw = "square fails at " + std::to_string(a);
        break;
      }
    }
    rep.check(H + "naturality", square, sw);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Many-sorted round trip
// ---------------------------------------------------------------------------

CrossSortFamily cross_family(SortedAlgebra const& alg, PurityReport const& purity) {
  if (!purity.pure) {
    throw PreconditionError(
        "the algebra is not pure: some ordered pair of sorts has no unary term between them");
  }
  CrossSortFamily c;
  std::size_t ns = alg.num_sorts();
  c.terms.resize(ns);
  for (SortId s = 0; s < ns; ++s) {
    for (SortId t = 0; t < ns; ++t) {
      c.terms[s].push_back(s == t ? Term::variable(0, s) : *purity.witnesses[s][t]);
    }
  }
  return c;
}

DiagonalPair canonical_pair(HomogenizedAlgebra const& h, CrossSortFamily const& cross) {
  std::size_t ns = h.num_sorts();
  SortedAlgebra const& src = h.source;
  DiagonalPair p;
  p.d = h.algebra.op(HomogenizedAlgebra::diagonal_symbol);
  std::vector<Term> vars;
  for (std::size_t s = 0; s < ns; ++s) {
    vars.push_back(Term::variable(s, 0));
  }
  p.d_term = Term::apply(HomogenizedAlgebra::diagonal_symbol, vars, 0);
  for (SortId s = 0; s < ns; ++s) {
    std::vector<OpTable> comps;
    std::vector<Term> terms;
    std::vector<Term> repl{Term::variable(s, s)};
    for (SortId t = 0; t < ns; ++t) {
      Term ct = substitute(cross.terms.at(s).at(t), repl);
      comps.push_back(table_of_term(src, interleaved_profile(ns, 1, t), ct));
      terms.push_back(ct);
    }
    p.e.push_back(homog_op(src, comps));
    p.e_terms.push_back(homog_term(h, terms, 1));
  }
  return p;
}

namespace {

// mu_s : A_s -> fixed points of e_s in H(A), as ranks.
std::vector<std::vector<Elem>> mu_maps(HomogenizedAlgebra const& h, CrossSortFamily const& cross,
                                       HeterogenizedAlgebra const& het) {
  std::size_t ns = h.num_sorts();
  SortedAlgebra const& src = h.source;
  std::vector<std::vector<Elem>> mu(ns);
  for (SortId s = 0; s < ns; ++s) {
    std::vector<OpTable> e;
    for (SortId t = 0; t < ns; ++t) {
      e.push_back(table_of_term(src, Profile{{s}, t}, cross.terms[s][t]));
    }
    auto rank = rank_of(het.carriers[s], h.encoding.size());
    std::vector<Elem> comp(ns);
    for (Elem a = 0; a < src.carrier(s); ++a) {
      for (SortId t = 0; t < ns; ++t) {
        comp[t] = e[t].at_row(a);
      }
      mu[s].push_back(rank[h.encode(comp)]);
    }
  }
  return mu;
}

}  // namespace

VerificationReport verify_mu_roundtrip(SortedAlgebra const& alg, CrossSortFamily const& cross,
                                       std::size_t lambda_max, std::vector<Morphism> const& homs,
                                       Limits const& limits) {
  VerificationReport rep;
  std::size_t ns = alg.num_sorts();
  if (cross.terms.size() != ns) {
    throw ShapeError("cross family has the wrong number of sorts");
  }
  for (SortId s = 0; s < ns; ++s) {
    for (SortId t = 0; t < ns; ++t) {
      check_term(alg.signature(), Profile{{s}, t}, cross.terms[s].at(t));
    }
    if (!(cross.terms[s][s] == Term::variable(0, s))) {
      throw PreconditionError("cross family: e_{s,s} must be the variable");
    }
  }
  HomogenizedAlgebra h = homogenize(alg, limits);
  DiagonalPair pair = canonical_pair(h, cross);
  DiagonalReport dr = verify_diagonal_pair(h.algebra, pair);
  rep.check("canonical_pair", dr.valid, pair_problem(dr));
  rep.check("canonical_pair_diagonal_identity", satisfies_diagonal_identity(pair.d));
  {
    bool terms_ok = table_of_term(h.algebra, uniform_profile(ns, 0), *pair.d_term) == pair.d;
    for (SortId s = 0; s < ns; ++s) {
      terms_ok &= table_of_term(h.algebra, uniform_profile(1, 0), pair.e_terms[s]) == pair.e[s];
    }
    rep.check("canonical_pair_terms", terms_ok);
  }
  if (!dr.valid) {
    return rep;
  }
  std::vector<std::string> names(alg.signature().sort_names().begin(),
                                 alg.signature().sort_names().end());
  HeterogenizedAlgebra het = heterogenize(h.algebra, pair, names, limits);
  auto mu = mu_maps(h, cross, het);

  bool bij = true;
  std::string bw;
  for (SortId s = 0; s < ns && bij; ++s) {
    std::vector<bool> hit(het.carriers[s].size(), false);
    if (het.carriers[s].size() != alg.carrier(s)) {
      bij = false;
      bw = "sort " + names[s] + ": " + std::to_string(alg.carrier(s)) + " elements vs " +
           std::to_string(het.carriers[s].size()) + " fixed points";
      break;
    }
    for (Elem a = 0; a < alg.carrier(s); ++a) {
      if (mu[s][a] >= het.carriers[s].size() || hit[mu[s][a]]) {
        bij = false;
        bw = "sort " + names[s] + " at " + std::to_string(a);
        break;
      }
      hit[mu[s][a]] = true;
    }
  }
  rep.check("element_bijection", bij, bw);
  if (!bij) {
    return rep;
  }
  std::vector<std::vector<Elem>> inv(ns);
  for (SortId s = 0; s < ns; ++s) {
    inv[s].resize(alg.carrier(s));
    for (Elem a = 0; a < alg.carrier(s); ++a) {
      inv[s][mu[s][a]] = a;
    }
  }

  // Conjugating every term operation by mu gives exactly the term
  // operations of H(A)_d.
  auto profiles = all_profiles(ns, lambda_max);
  CloneFragment frag = generate_fragment(alg, profiles, limits);
  CloneFragment hfrag = generate_fragment(het.algebra, profiles, limits);
  bool match = true;
  bool inj = true;
  std::string mw;
  std::int64_t total = 0;
  for (auto const& p : profiles) {
    auto tables = frag.tables(p);
    std::vector<OpTable> conj;
    auto sizes = het.algebra.input_sizes(p);
    MixedRadix shape(sizes);
    std::vector<Elem> args(p.arity());
    for (auto const& f : tables) {
      std::vector<Elem> values(shape.size());
      for (std::size_t r = 0; r < values.size(); ++r) {
        shape.decode(r, args);
        for (std::size_t i = 0; i < args.size(); ++i) {
          args[i] = inv[p.inputs[i]][args[i]];
        }
        values[r] = mu[p.cod][f.at(args)];
      }
      conj.emplace_back(p, sizes, het.algebra.carrier(p.cod), std::move(values));
    }
    auto distinct = canonical_set(conj);
    auto target = canonical_set(hfrag.tables(p));
    total += static_cast<std::int64_t>(tables.size());
    if (distinct.size() != tables.size() && inj) {
      inj = false;
      mw = "collision at profile " + to_string(p, alg.signature());
    }
    if (distinct != target && match) {
      match = false;
      mw = "profile " + to_string(p, alg.signature()) + ": " + std::to_string(distinct.size()) +
           " conjugates vs " + std::to_string(target.size()) + " operations of H(A)_d";
    }
  }
  rep.count("profiles", static_cast<std::int64_t>(profiles.size()));
  rep.count("operations", total);
  rep.check("clone_injective", inj, mw);
  rep.check("clone_isomorphism", match, mw);

  // nu for H(A) agrees with H(mu): the round trip returns to the start.
  {
    SortedMap mumap;
    for (SortId s = 0; s < ns; ++s) {
      mumap.maps.push_back(unary_map(s, alg.carrier(s), het.carriers[s].size(), mu[s]));
    }
    OpTable hmu = product_map(alg.carriers(), het.algebra.carriers(), mumap);
    auto nu = split_elements(pair, het.carriers);
    bool tri = std::equal(nu.begin(), nu.end(), hmu.values().begin(), hmu.values().end());
    rep.check("triangle", tri);
  }

  std::size_t idx = 0;
  for (auto const& hom : homs) {
    std::string H = "hom" + std::to_string(idx++) + "_";
    SortedAlgebra const& b = hom.target;
    rep.check(H + "sorted_homomorphism", is_homomorphism(alg, b, hom.map));
    HomogenizedAlgebra hb = homogenize(b, limits);
    OpTable hphi = product_map(alg.carriers(), b.carriers(), hom.map);
    rep.check(H + "homogenized_homomorphism",
              is_homomorphism(h.algebra, hb.algebra, SortedMap{{hphi}}));
    DiagonalPair pb = canonical_pair(hb, cross);
    DiagonalReport br = verify_diagonal_pair(hb.algebra, pb);
    rep.check(H + "pair_valid", br.valid, pair_problem(br));
    if (!br.valid) {
      continue;
    }
    HeterogenizedAlgebra hetb = heterogenize(hb.algebra, pb, names, limits);
    auto mub = mu_maps(hb, cross, hetb);
    SortedMap phid;
    bool fixed = true;
    for (SortId s = 0; s < ns; ++s) {
      auto rank = rank_of(hetb.carriers[s], hb.encoding.size());
      std::vector<Elem> values;
      for (Elem x : het.carriers[s]) {
        Elem r = rank[hphi.at_row(x)];
        if (r >= hetb.carriers[s].size()) {
          fixed = false;
          r = 0;
        }
        values.push_back(r);
      }
      phid.maps.push_back(
          unary_map(s, het.carriers[s].size(), hetb.carriers[s].size(), std::move(values)));
    }
    rep.check(H + "restricts_to_retracts", fixed);
    if (!fixed) {
      continue;
    }
    rep.check(H + "heterogenized_homomorphism", is_homomorphism(het.algebra, hetb.algebra, phid));
    bool square = true;
    std::string sw;
    for (SortId s = 0; s < ns && square; ++s) {
      for (Elem a = 0; a < alg.carrier(s); ++a) {
        if (mub[s][hom.map.maps[s].at_row(a)] != phid.maps[s].at_row(mu[s][a])) {
          square = false;
          sw = "sort " + names[s] + " at " + std::to_string(a);
          break;
        }
      }
    }
    rep.check(H + "naturality", square, sw);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Independence of the idempotents
// ---------------------------------------------------------------------------

VerificationReport verify_pair_independence(SortedAlgebra const& alg, DiagonalPair const& p1,
                                            DiagonalPair const& p2, std::size_t lambda_max,
                                            Limits const& limits) {
  if (!(p1.d == p2.d)) {
    throw PreconditionError("verify_pair_independence: the pairs have different d");
  }
  if (p1.num_sorts() != p2.num_sorts()) {
    throw PreconditionError("verify_pair_independence: the pairs have different sort counts");
  }
  require_valid(alg, p1, "verify_pair_independence");
  require_valid(alg, p2, "verify_pair_independence");
  VerificationReport rep;
  std::size_t ns = p1.num_sorts();
  std::size_t n = alg.carrier(0);

  bool lemma = true;
  std::string lw;
  for (std::size_t s = 0; s < ns && lemma; ++s) {
    for (Elem a = 0; a < n; ++a) {
      if (p1.e[s].at_row(p2.e[s].at_row(a)) != p1.e[s].at_row(a) ||
          p2.e[s].at_row(p1.e[s].at_row(a)) != p2.e[s].at_row(a)) {
        lemma = false;
        lw = "index " + std::to_string(s) + " at " + std::to_string(a);
        break;
      }
    }
  }
  rep.check("absorption", lemma, lw);

  HeterogenizedAlgebra h1 = heterogenize(alg, p1, {}, limits);
  HeterogenizedAlgebra h2 = heterogenize(alg, p2, {}, limits);
  SortedMap psi;
  std::vector<std::vector<Elem>> psi_inv(ns);
  bool bij = true;
  std::string bw;
  for (std::size_t s = 0; s < ns; ++s) {
    auto r1 = rank_of(h1.carriers[s], n);
    auto r2 = rank_of(h2.carriers[s], n);
    std::vector<Elem> values;
    for (Elem a : h1.carriers[s]) {
      Elem b = p2.e[s].at_row(a);
      if (p1.e[s].at_row(b) != a && bij) {
        bij = false;
        bw = "index " + std::to_string(s) + ": e(e'(a)) differs from a = " + std::to_string(a);
      }
      values.push_back(r2[b]);
    }
    for (Elem b : h2.carriers[s]) {
      Elem a = p1.e[s].at_row(b);
      if (p2.e[s].at_row(a) != b && bij) {
        bij = false;
        bw = "index " + std::to_string(s) + ": e'(e(b)) differs from b = " + std::to_string(b);
      }
      psi_inv[s].push_back(r1[a]);
    }
    if (h1.carriers[s].size() != h2.carriers[s].size() && bij) {
      bij = false;
      bw = "retract sizes differ at index " + std::to_string(s);
    }
    psi.maps.push_back(
        unary_map(s, h1.carriers[s].size(), h2.carriers[s].size(), std::move(values)));
  }
  rep.check("retract_bijection", bij, bw);
  if (!bij) {
    return rep;
  }
  // psi carries each basic operation e_t g(x) of the first algebra to the
  // translated operation e'_t g(e_v(x)) of the second, which need not be the
  // second algebra's own symbol e'_t g(x).
  rep.count("same_symbol_homomorphism", is_homomorphism(h1.algebra, h2.algebra, psi) ? 1 : 0);
  bool transported = true;
  std::string tw;
  std::vector<Elem> in1;
  std::vector<Elem> in2;
  for (std::size_t k = 0; k < h1.origins.size() && transported; ++k) {
    auto const& origin = h1.origins[k];
    OpTable const& op1 = h1.algebra.op(k);
    OpTable const& g = alg.op(origin.symbol);
    MixedRadix shape(h2.algebra.input_sizes(op1.profile()));
    auto cod_rank = rank_of(h2.carriers[origin.cod], n);
    std::vector<Elem> args(op1.arity());
    in1.resize(op1.arity());
    in2.resize(op1.arity());
    for (std::size_t r = 0; r < shape.size(); ++r) {
      shape.decode(r, args);
      for (std::size_t i = 0; i < args.size(); ++i) {
        SortId v = origin.assignment[i];
        in1[i] = psi_inv[v][args[i]];
        in2[i] = p1.e[v].at_row(h2.carriers[v][args[i]]);
      }
      Elem lhs = psi.maps[origin.cod].at_row(op1.at(in1));
      Elem rhs = cod_rank[p2.e[origin.cod].at_row(g.at(in2))];
      if (lhs != rhs) {
        transported = false;
        tw = "symbol " + h1.algebra.signature().symbol(k).name + " at row " + std::to_string(r);
        break;
      }
    }
  }
  rep.check("transported_operations", transported, tw);

  bool iso = true;
  std::string iw;
  for (auto const& p : all_profiles(ns, lambda_max)) {
    auto o1 = hetero_fragment_oracle(h1, p, limits);
    auto o2 = hetero_fragment_oracle(h2, p, limits);
    auto sizes = h2.algebra.input_sizes(p);
    MixedRadix shape(sizes);
    std::vector<Elem> args(p.arity());
    std::vector<OpTable> mapped;
    for (auto const& f : o1) {
      std::vector<Elem> values(shape.size());
      for (std::size_t r = 0; r < values.size(); ++r) {
        shape.decode(r, args);
        for (std::size_t i = 0; i < args.size(); ++i) {
          args[i] = psi_inv[p.inputs[i]][args[i]];
        }
        values[r] = psi.maps[p.cod].at_row(f.at(args));
      }
      mapped.emplace_back(p, sizes, h2.algebra.carrier(p.cod), std::move(values));
    }
    if (canonical_set(mapped) != o2) {
      iso = false;
      iw = "profile " + to_string(p, h1.algebra.signature());
      break;
    }
  }
  rep.check("clone_isomorphism", iso, iw);
  return rep;
}

}  // namespace msalg
