#include "msalg/diagonal.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "msalg/error.hpp"

namespace msalg {

namespace {

void require_single_sorted(SortedAlgebra const& alg, char const* what) {
  if (!alg.single_sorted()) {
    throw PreconditionError(std::string(what) + " needs a single-sorted algebra");
  }
}

void check_pair_shape(SortedAlgebra const& alg, DiagonalPair const& pair) {
  std::size_t n = alg.carrier(0);
  std::size_t ns = pair.num_sorts();
  if (ns == 0) {
    throw ShapeError("a diagonal pair needs at least one idempotent");
  }
  if (pair.d.arity() != ns) {
    throw ShapeError("d has arity " + std::to_string(pair.d.arity()) + " but " +
                     std::to_string(ns) + " idempotents are given");
  }
  for (std::size_t i = 0; i < ns; ++i) {
    if (pair.d.input_sizes()[i] != n) {
      throw ShapeError("d does not act on the algebra's carrier");
    }
  }
  if (pair.d.cod_size() != n) {
    throw ShapeError("d does not act on the algebra's carrier");
  }
  for (auto const& e : pair.e) {
    if (e.arity() != 1 || e.input_sizes()[0] != n || e.cod_size() != n) {
      throw ShapeError("idempotents must be unary operations on the algebra's carrier");
    }
  }
}

}  // namespace

std::vector<Elem> fixed_points(OpTable const& e) {
  std::vector<Elem> out;
  for (std::size_t a = 0; a < e.rows(); ++a) {
    if (e.at_row(a) == a) {
      out.push_back(static_cast<Elem>(a));
    }
  }
  return out;
}

std::vector<Elem> rank_of(std::vector<Elem> const& points, std::size_t carrier) {
  std::vector<Elem> rank(carrier, static_cast<Elem>(points.size()));
  for (std::size_t k = 0; k < points.size(); ++k) {
    rank[points[k]] = static_cast<Elem>(k);
  }
  return rank;
}

// ---------------------------------------------------------------------------
// Pair verification
// ---------------------------------------------------------------------------

DiagonalReport verify_diagonal_pair(SortedAlgebra const& alg, DiagonalPair const& pair) {
  require_single_sorted(alg, "verify_diagonal_pair");
  check_pair_shape(alg, pair);
  std::size_t n = alg.carrier(0);
  std::size_t ns = pair.num_sorts();
  DiagonalReport rep;
  rep.idempotent.resize(ns);
  rep.eq1.resize(ns);
  rep.eq1_strict.resize(ns);
  rep.eq3.resize(ns);

  for (std::size_t s = 0; s < ns; ++s) {
    for (Elem a = 0; a < n; ++a) {
      Elem ea = pair.e[s].at_row(a);
      if (pair.e[s].at_row(ea) != ea && rep.idempotent[s].holds) {
        rep.idempotent[s] = {false, {a}};
      }
    }
  }

  MixedRadix shape(std::vector<std::size_t>(ns, n));
  std::vector<Elem> x(ns);
  std::vector<Elem> ex(ns);
  for (std::size_t r = 0; r < shape.size(); ++r) {
    shape.decode(r, x);
    Elem dx = pair.d.at_row(r);
    for (std::size_t s = 0; s < ns; ++s) {
      Elem lhs = pair.e[s].at_row(dx);
      if (lhs != pair.e[s].at_row(x[s]) && rep.eq1[s].holds) {
        rep.eq1[s] = {false, x};
      }
      if (lhs != x[s] && rep.eq1_strict[s].holds) {
        rep.eq1_strict[s] = {false, x};
      }
      ex[s] = pair.e[s].at_row(x[s]);
    }
    if (pair.d.at(ex) != dx && rep.eq2.holds) {
      rep.eq2 = {false, x};
    }
  }

  for (std::size_t j = 0; j < ns; ++j) {
    for (std::size_t r = 0; r < shape.size(); ++r) {
      shape.decode(r, x);
      std::vector<Elem> diag(ns, x[j]);
      if (pair.d.at(diag) != x[j]) {
        rep.eq3[j] = {false, x};
        break;
      }
    }
  }

  auto all = [](std::vector<EquationCheck> const& v) {
    return std::all_of(v.begin(), v.end(), [](EquationCheck const& c) { return c.holds; });
  };
  for (auto const& c : rep.eq3) {
    rep.eq3_index_independent &= c.holds == rep.eq3[0].holds;
  }
  rep.strict_eq1 = all(rep.eq1_strict);
  rep.valid = all(rep.idempotent) && all(rep.eq1) && rep.eq2.holds && rep.eq3[0].holds;
  return rep;
}

bool satisfies_diagonal_identity(OpTable const& d) {
  std::size_t ns = d.arity();
  if (ns == 0) {
    return true;
  }
  std::size_t n = d.cod_size();
  MixedRadix grid(std::vector<std::size_t>(ns * ns, n));
  std::vector<Elem> x(ns * ns);
  std::vector<Elem> inner(ns);
  std::vector<Elem> row(ns);
  std::vector<Elem> diag(ns);
  for (std::size_t r = 0; r < grid.size(); ++r) {
    grid.decode(r, x);
    for (std::size_t s = 0; s < ns; ++s) {
      for (std::size_t t = 0; t < ns; ++t) {
        row[t] = x[s * ns + t];
      }
      inner[s] = d.at(row);
      diag[s] = x[s * ns + s];
    }
    if (d.at(inner) != d.at(diag)) {
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Search
// ---------------------------------------------------------------------------

std::vector<DiagonalPair> find_diagonal_pairs(SortedAlgebra const& alg, std::size_t num_sorts,
                                              Limits const& limits) {
  require_single_sorted(alg, "find_diagonal_pairs");
  if (num_sorts == 0) {
    throw PreconditionError("find_diagonal_pairs needs at least one sort");
  }
  std::size_t n = alg.carrier(0);
  Profile dp = uniform_profile(num_sorts, 0);
  Profile ep = uniform_profile(1, 0);
  CloneFragment frag = generate_fragment(alg, {dp, ep}, limits);
  auto ds = canonical_set(frag.tables(dp));
  auto es = canonical_set(frag.tables(ep));
  std::vector<OpTable> idem;
  for (auto const& e : es) {
    bool ok = true;
    for (Elem a = 0; a < n && ok; ++a) {
      ok = e.at_row(e.at_row(a)) == e.at_row(a);
    }
    if (ok) {
      idem.push_back(e);
    }
  }

  std::vector<DiagonalPair> out;
  std::size_t visited = 0;
  MixedRadix shape(std::vector<std::size_t>(num_sorts, n));
  std::vector<Elem> x(num_sorts);
  for (auto const& d : ds) {
    bool eq3 = true;
    for (Elem a = 0; a < n && eq3; ++a) {
      std::vector<Elem> diag(num_sorts, a);
      eq3 = d.at(diag) == a;
    }
    if (!eq3) {
      continue;
    }
    std::vector<std::vector<std::size_t>> cand(num_sorts);
    bool any_empty = false;
    for (std::size_t s = 0; s < num_sorts; ++s) {
      for (std::size_t k = 0; k < idem.size(); ++k) {
        OpTable const& e = idem[k];
        bool ok = true;
        for (std::size_t r = 0; r < shape.size() && ok; ++r) {
          shape.decode(r, x);
          ok = e.at_row(d.at_row(r)) == e.at_row(x[s]);
        }
        if (ok) {
          cand[s].push_back(k);
        }
      }
      any_empty |= cand[s].empty();
    }
    if (any_empty) {
      continue;
    }
    std::vector<std::size_t> pick(num_sorts, 0);
    std::vector<Elem> ex(num_sorts);
    while (true) {
      if (++visited > limits.enumeration_budget) {
        throw ResourceError("diagonal pair search exceeded the enumeration budget");
      }
      bool ok = true;
      for (std::size_t r = 0; r < shape.size() && ok; ++r) {
        shape.decode(r, x);
        for (std::size_t s = 0; s < num_sorts; ++s) {
          ex[s] = idem[cand[s][pick[s]]].at_row(x[s]);
        }
        ok = d.at(ex) == d.at_row(r);
      }
      if (ok) {
        DiagonalPair p;
        p.d = d;
        p.d_term = frag.witness(dp, *frag.index_of(d));
        for (std::size_t s = 0; s < num_sorts; ++s) {
          OpTable const& e = idem[cand[s][pick[s]]];
          p.e.push_back(e);
          p.e_terms.push_back(frag.witness(ep, *frag.index_of(e)));
        }
        out.push_back(std::move(p));
      }
      std::size_t s = num_sorts;
      while (s-- > 0) {
        if (++pick[s] < cand[s].size()) {
          break;
        }
        pick[s] = 0;
      }
      if (s == static_cast<std::size_t>(-1)) {
        break;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Neighborhoods and matrix products
// ---------------------------------------------------------------------------

namespace {

// Columns e(f) over the rows of `domain`, one per lambda-ary term operation
// class, deduplicated and sorted.
std::vector<std::vector<Elem>> retract_columns(SortedAlgebra const& alg, RowDomain const& domain,
                                               OpTable const& e, Limits const& limits) {
  ColumnClosure c = close_columns(alg, domain, limits);
  std::set<std::vector<Elem>> cols;
  for (std::size_t k = 0; k < c.count(0); ++k) {
    auto col = c.column(0, k);
    std::vector<Elem> v(col.size());
    for (std::size_t r = 0; r < v.size(); ++r) {
      v[r] = e.at_row(col[r]);
    }
    cols.insert(std::move(v));
  }
  return {cols.begin(), cols.end()};
}

}  // namespace

Neighborhood neighborhood(SortedAlgebra const& alg, OpTable const& e, std::size_t lambda_max,
                          Limits const& limits) {
  require_single_sorted(alg, "neighborhood");
  std::size_t n = alg.carrier(0);
  if (e.arity() != 1 || e.input_sizes()[0] != n || e.cod_size() != n) {
    throw ShapeError("neighborhood needs a unary operation on the carrier");
  }
  for (Elem a = 0; a < n; ++a) {
    if (e.at_row(e.at_row(a)) != e.at_row(a)) {
      throw PreconditionError("neighborhood: e is not idempotent at " + std::to_string(a));
    }
  }
  Neighborhood nb;
  nb.e = e;
  nb.carrier = fixed_points(e);
  std::size_t k = nb.carrier.size();
  auto rank = rank_of(nb.carrier, n);

  SortedSignature sig;
  sig.add_sort(alg.signature().sort_name(0));
  std::vector<OpTable> ops;
  for (std::size_t g = 0; g < alg.num_ops(); ++g) {
    OpTable const& op = alg.op(g);
    std::size_t m = op.arity();
    sig.add_symbol(alg.signature().symbol(g).name, uniform_profile(m, 0));
    MixedRadix shape(std::vector<std::size_t>(m, k));
    std::vector<Elem> values(shape.size());
    std::vector<Elem> args(m);
    for (std::size_t r = 0; r < values.size(); ++r) {
      shape.decode(r, args);
      for (auto& a : args) {
        a = nb.carrier[a];
      }
      values[r] = rank[e.at_row(op.at(args))];
    }
    ops.emplace_back(uniform_profile(m, 0), std::vector<std::size_t>(m, k), k, std::move(values));
  }
  nb.algebra = SortedAlgebra(std::move(sig), {k}, std::move(ops));

  for (std::size_t lambda = 0; lambda <= lambda_max; ++lambda) {
    RowDomain dom{std::vector<SortId>(lambda, 0),
                  std::vector<std::vector<Elem>>(lambda, nb.carrier)};
    std::vector<OpTable> level;
    for (auto& col : retract_columns(alg, dom, e, limits)) {
      for (auto& v : col) {
        v = rank[v];
      }
      level.emplace_back(uniform_profile(lambda, 0), std::vector<std::size_t>(lambda, k), k,
                         std::move(col));
    }
    nb.fragment.push_back(canonical_set(std::move(level)));
  }
  return nb;
}

OpTable decompose_op(DiagonalPair const& pair, std::vector<std::vector<Elem>> const& factors,
                     OpTable const& f) {
  std::size_t ns = pair.num_sorts();
  std::size_t n = pair.d.cod_size();
  std::vector<std::size_t> radices;
  for (auto const& fac : factors) {
    radices.push_back(fac.size());
  }
  MixedRadix enc(radices);
  std::vector<std::vector<Elem>> rank;
  for (auto const& fac : factors) {
    rank.push_back(rank_of(fac, n));
  }
  std::size_t lambda = f.arity();
  std::size_t m = enc.size();
  MixedRadix shape(std::vector<std::size_t>(lambda, m));
  std::vector<Elem> values(shape.size());
  std::vector<Elem> args(lambda);
  std::vector<Elem> comp(ns);
  std::vector<Elem> b(lambda);
  std::vector<Elem> out(ns);
  for (std::size_t r = 0; r < values.size(); ++r) {
    shape.decode(r, args);
    for (std::size_t i = 0; i < lambda; ++i) {
      enc.decode(args[i], comp);
      for (std::size_t t = 0; t < ns; ++t) {
        comp[t] = factors[t][comp[t]];
      }
      b[i] = pair.d.at(comp);
    }
    Elem y = f.at(b);
    for (std::size_t s = 0; s < ns; ++s) {
      out[s] = rank[s][pair.e[s].at_row(y)];
    }
    values[r] = static_cast<Elem>(enc.encode(out));
  }
  return OpTable(uniform_profile(lambda, 0), std::vector<std::size_t>(lambda, m), m,
                 std::move(values));
}

std::vector<Elem> split_elements(DiagonalPair const& pair,
                                 std::vector<std::vector<Elem>> const& factors) {
  std::size_t ns = pair.num_sorts();
  std::size_t n = pair.d.cod_size();
  std::vector<std::size_t> radices;
  std::vector<std::vector<Elem>> rank;
  for (auto const& fac : factors) {
    radices.push_back(fac.size());
    rank.push_back(rank_of(fac, n));
  }
  MixedRadix enc(radices);
  std::vector<Elem> out(n);
  std::vector<Elem> comp(ns);
  for (Elem a = 0; a < n; ++a) {
    for (std::size_t s = 0; s < ns; ++s) {
      comp[s] = rank[s][pair.e[s].at_row(a)];
    }
    out[a] = static_cast<Elem>(enc.encode(comp));
  }
  return out;
}

MatrixProduct matrix_product_algebra(SortedAlgebra const& alg, DiagonalPair const& pair,
                                     std::size_t lambda_max, Limits const& limits) {
  require_single_sorted(alg, "matrix_product_algebra");
  check_pair_shape(alg, pair);
  std::size_t ns = pair.num_sorts();
  std::size_t n = alg.carrier(0);
  MatrixProduct mp;
  std::vector<std::size_t> radices;
  for (auto const& e : pair.e) {
    for (Elem a = 0; a < n; ++a) {
      if (e.at_row(e.at_row(a)) != e.at_row(a)) {
        throw PreconditionError("matrix product: an idempotent of the pair is not idempotent");
      }
    }
    mp.factors.push_back(fixed_points(e));
    radices.push_back(mp.factors.back().size());
  }
  mp.encoding = MixedRadix(radices);
  std::size_t m = mp.encoding.size();
  std::vector<std::vector<Elem>> rank;
  for (auto const& fac : mp.factors) {
    rank.push_back(rank_of(fac, n));
  }

  SortedSignature sig;
  sig.add_sort(alg.signature().sort_name(0));
  std::vector<OpTable> ops;
  for (std::size_t g = 0; g < alg.num_ops(); ++g) {
    sig.add_symbol(alg.signature().symbol(g).name, alg.op(g).profile());
    ops.push_back(decompose_op(pair, mp.factors, alg.op(g)));
  }
  mp.algebra = SortedAlgebra(std::move(sig), {m}, std::move(ops));

  for (std::size_t lambda = 0; lambda <= lambda_max; ++lambda) {
    RowDomain dom;
    for (std::size_t i = 0; i < lambda; ++i) {
      for (std::size_t t = 0; t < ns; ++t) {
        dom.sorts.push_back(0);
        dom.allowed.push_back(mp.factors[t]);
      }
    }
    std::vector<std::vector<std::vector<Elem>>> comps;
    std::size_t total = 1;
    for (std::size_t s = 0; s < ns; ++s) {
      comps.push_back(retract_columns(alg, dom, pair.e[s], limits));
      total *= comps.back().size();
      if (total > limits.enumeration_budget) {
        throw ResourceError("matrix product fragment exceeds the enumeration budget");
      }
    }
    std::size_t rows = dom.rows();
    std::vector<OpTable> level;
    level.reserve(total);
    std::vector<std::size_t> pick(ns);
    std::vector<Elem> out(ns);
    for (std::size_t k = 0; k < total; ++k) {
      std::size_t rest = k;
      for (std::size_t s = ns; s-- > 0;) {
        pick[s] = rest % comps[s].size();
        rest /= comps[s].size();
      }
      std::vector<Elem> values(rows);
      for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t s = 0; s < ns; ++s) {
          out[s] = rank[s][comps[s][pick[s]][r]];
        }
        values[r] = static_cast<Elem>(mp.encoding.encode(out));
      }
      level.emplace_back(uniform_profile(lambda, 0), std::vector<std::size_t>(lambda, m), m,
                         std::move(values));
    }
    mp.fragment.push_back(canonical_set(std::move(level)));
  }
  return mp;
}

DiagonalPair matrix_product_pair(MatrixProduct const& mp, DiagonalPair const& pair) {
  std::size_t ns = mp.factors.size();
  std::size_t m = mp.encoding.size();
  std::size_t n = pair.d.cod_size();
  std::vector<std::vector<Elem>> rank;
  for (auto const& fac : mp.factors) {
    rank.push_back(rank_of(fac, n));
  }
  DiagonalPair out;
  {
    MixedRadix shape(std::vector<std::size_t>(ns, m));
    std::vector<Elem> values(shape.size());
    std::vector<Elem> args(ns);
    std::vector<Elem> res(ns);
    for (std::size_t r = 0; r < values.size(); ++r) {
      shape.decode(r, args);
      for (std::size_t s = 0; s < ns; ++s) {
        res[s] = mp.encoding.decode(args[s])[s];
      }
      values[r] = static_cast<Elem>(mp.encoding.encode(res));
    }
    out.d = OpTable(uniform_profile(ns, 0), std::vector<std::size_t>(ns, m), m, std::move(values));
  }
  for (std::size_t s = 0; s < ns; ++s) {
    std::vector<Elem> values(m);
    std::vector<Elem> res(ns);
    for (std::size_t c = 0; c < m; ++c) {
      Elem as = mp.factors[s][mp.encoding.decode(c)[s]];
      for (std::size_t t = 0; t < ns; ++t) {
        res[t] = rank[t][pair.e[t].at_row(as)];
      }
      values[c] = static_cast<Elem>(mp.encoding.encode(res));
    }
    out.e.emplace_back(uniform_profile(1, 0), std::vector<std::size_t>{m}, m, std::move(values));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Clone maps
// ---------------------------------------------------------------------------

VerificationReport check_clone_map(std::vector<std::vector<OpTable>> const& clone,
                                   std::vector<std::vector<OpTable>> const& image,
                                   Limits const& limits) {
  VerificationReport rep;
  std::size_t max = clone.size() ? clone.size() - 1 : 0;
  std::vector<std::map<std::vector<Elem>, std::size_t>> index(clone.size());
  for (std::size_t k = 0; k < clone.size(); ++k) {
    for (std::size_t j = 0; j < clone[k].size(); ++j) {
      auto v = clone[k][j].values();
      index[k].emplace(std::vector<Elem>(v.begin(), v.end()), j);
    }
  }
  // Count the triples to choose a stride.
  std::size_t total = 0;
  for (std::size_t m = 1; m <= max; ++m) {
    for (std::size_t lambda = 0; lambda <= max; ++lambda) {
      std::size_t c = clone[m].size();
      for (std::size_t i = 0; i < m; ++i) {
        c *= clone[lambda].size();
      }
      total += c;
    }
  }
  std::size_t stride = 1;
  if (total > limits.composition_budget) {
    stride = (total + limits.composition_budget - 1) / limits.composition_budget;
  }
  rep.count("compositions", static_cast<std::int64_t>(total));
  rep.count("stride", static_cast<std::int64_t>(stride));

  bool closed = true;
  bool compatible = true;
  std::string closed_witness;
  std::string compat_witness;
  std::size_t seq = 0;
  std::size_t checked = 0;
  for (std::size_t m = 1; m <= max; ++m) {
    for (std::size_t lambda = 0; lambda <= max; ++lambda) {
      std::size_t per = clone[lambda].size();
      std::size_t combos = 1;
      for (std::size_t i = 0; i < m; ++i) {
        combos *= per;
      }
      if (per == 0) {
        continue;
      }
      Profile in = uniform_profile(lambda, 0);
      for (std::size_t fi = 0; fi < clone[m].size(); ++fi) {
        for (std::size_t c = 0; c < combos; ++c, ++seq) {
          if (seq % stride != 0) {
            continue;
          }
          ++checked;
          std::vector<OpTable> gs(m);
          std::vector<OpTable> igs(m);
          std::size_t rest = c;
          for (std::size_t i = m; i-- > 0;) {
            gs[i] = clone[lambda][rest % per];
            igs[i] = image[lambda][rest % per];
            rest /= per;
          }
          auto sizes_c = std::vector<std::size_t>(lambda, clone[m][fi].cod_size());
          auto sizes_i = std::vector<std::size_t>(lambda, image[m][fi].cod_size());
          OpTable h = compose(clone[m][fi], gs, in, sizes_c);
          auto hv = h.values();
          auto it = index[lambda].find(std::vector<Elem>(hv.begin(), hv.end()));
          if (it == index[lambda].end()) {
            if (closed) {
              closed = false;
              closed_witness = "composite of f#" + std::to_string(fi) + " (arity " +
                               std::to_string(m) + ") is missing from arity " +
                               std::to_string(lambda);
            }
            continue;
          }
          OpTable ih = compose(image[m][fi], igs, in, sizes_i);
          if (!(ih == image[lambda][it->second]) && compatible) {
            compatible = false;
            compat_witness = "f#" + std::to_string(fi) + " arity " + std::to_string(m) +
                             " with arguments of arity " + std::to_string(lambda) +
                             ": image of composite " + to_string(image[lambda][it->second].values()) +
                             " vs composite of images " + to_string(ih.values());
          }
        }
      }
    }
  }
  rep.count("compositions_checked", static_cast<std::int64_t>(checked));
  rep.check("composition_closed", closed, closed_witness);
  rep.check("composition_compatible", compatible, compat_witness);
  return rep;
}

// ---------------------------------------------------------------------------
// Decomposition
// ---------------------------------------------------------------------------

namespace {

std::string pair_failure(DiagonalReport const& r) {
  auto first = [](std::vector<EquationCheck> const& v, char const* name) -> std::string {
    for (std::size_t s = 0; s < v.size(); ++s) {
      if (!v[s].holds) {
        return std::string(name) + " fails for index " + std::to_string(s) + " at " +
               to_string(v[s].counterexample);
      }
    }
    return {};
  };
  std::string w = first(r.idempotent, "idempotence");
  if (w.empty()) w = first(r.eq1, "equation (1)");
  if (w.empty() && !r.eq2.holds) w = "equation (2) fails at " + to_string(r.eq2.counterexample);
  if (w.empty() && !r.eq3[0].holds) w = "equation (3) fails at " + to_string(r.eq3[0].counterexample);
  return w;
}

}  // namespace

VerificationReport verify_decomposition(SortedAlgebra const& alg, DiagonalPair const& pair,
                                        std::size_t lambda_max, Limits const& limits) {
  VerificationReport rep;
  require_single_sorted(alg, "verify_decomposition");
  DiagonalReport dr = verify_diagonal_pair(alg, pair);
  rep.check("diagonal_pair", dr.valid, pair_failure(dr));
  if (!dr.valid) {
    return rep;
  }
  std::size_t n = alg.carrier(0);
  std::size_t ns = pair.num_sorts();
  MatrixProduct mp = matrix_product_algebra(alg, pair, lambda_max, limits);
  std::size_t m = mp.encoding.size();
  rep.count("carrier", static_cast<std::int64_t>(n));
  rep.count("matrix_carrier", static_cast<std::int64_t>(m));

  // Element bijection a -> (e_s(a))_s with inverse (a_s) -> d(a_s).
  auto split = split_elements(pair, mp.factors);
  {
    bool ok = m == n;
    std::string w =
        ok ? "" : "carrier sizes differ: " + std::to_string(n) + " vs " + std::to_string(m);
    std::vector<Elem> comp(ns);
    for (Elem a = 0; a < n && ok; ++a) {
      mp.encoding.decode(split[a], comp);
      for (std::size_t s = 0; s < ns; ++s) {
        comp[s] = mp.factors[s][comp[s]];
      }
      if (pair.d.at(comp) != a) {
        ok = false;
        w = "d(e_s(a))_s differs from a = " + std::to_string(a);
      }
    }
    for (Elem c = 0; c < m && ok; ++c) {
      mp.encoding.decode(c, comp);
      for (std::size_t s = 0; s < ns; ++s) {
        comp[s] = mp.factors[s][comp[s]];
      }
      if (split[pair.d.at(comp)] != c) {
        ok = false;
        w = "e_s(d(a_t)_t) differs from a_s at " + to_string(comp);
      }
    }
    rep.check("element_bijection", ok, w);
    if (!ok) {
      return rep;
    }
  }

  std::vector<Profile> profiles;
  for (std::size_t lambda = 0; lambda <= lambda_max; ++lambda) {
    profiles.push_back(uniform_profile(lambda, 0));
  }
  CloneFragment frag = generate_fragment(alg, profiles, limits);
  CloneFragment mfrag = generate_fragment(mp.algebra, profiles, limits);
  std::vector<std::vector<OpTable>> clone;
  std::vector<std::vector<OpTable>> image;
  for (std::size_t lambda = 0; lambda <= lambda_max; ++lambda) {
    Profile p = uniform_profile(lambda, 0);
    auto tables = frag.tables(p);
    std::vector<OpTable> imgs;
    imgs.reserve(tables.size());
    for (auto const& f : tables) {
      imgs.push_back(decompose_op(pair, mp.factors, f));
    }
    auto distinct = canonical_set(imgs);
    std::string L = std::to_string(lambda);
    rep.count("clone_" + L, static_cast<std::int64_t>(tables.size()));
    rep.count("matrix_fragment_" + L, static_cast<std::int64_t>(mp.fragment[lambda].size()));
    rep.check("injective_" + L, distinct.size() == tables.size(),
              std::to_string(tables.size() - distinct.size()) + " collisions");
    std::string sw;
    if (distinct != mp.fragment[lambda]) {
      for (auto const& t : mp.fragment[lambda]) {
        if (!std::binary_search(distinct.begin(), distinct.end(), t)) {
          sw = "not hit: " + to_string(t.values());
          break;
        }
      }
      if (sw.empty()) {
        sw = "image leaves the matrix product fragment";
      }
    }
    rep.check("surjective_" + L, distinct == mp.fragment[lambda], sw);
    auto generated = canonical_set(mfrag.tables(p));
    rep.check("generated_matches_" + L, generated == mp.fragment[lambda],
              std::to_string(generated.size()) + " generated vs " +
                  std::to_string(mp.fragment[lambda].size()) + " in the matrix product");

    // phi(f) acts on split elements as f acts on elements.
    bool transport = true;
    std::string tw;
    MixedRadix shape(std::vector<std::size_t>(lambda, n));
    std::vector<Elem> args(lambda);
    std::vector<Elem> sargs(lambda);
    for (std::size_t k = 0; k < tables.size() && transport; ++k) {
      for (std::size_t r = 0; r < shape.size(); ++r) {
        shape.decode(r, args);
        for (std::size_t i = 0; i < lambda; ++i) {
          sargs[i] = split[args[i]];
        }
        if (imgs[k].at(sargs) != split[tables[k].at_row(r)]) {
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
  rep.merge("", check_clone_map(clone, image, limits));

  DiagonalPair mpair = matrix_product_pair(mp, pair);
  DiagonalReport mr = verify_diagonal_pair(mp.algebra, mpair);
  rep.check("matrix_pair_valid", mr.valid, pair_failure(mr));
  rep.check("matrix_pair_diagonal_identity", satisfies_diagonal_identity(mpair.d));
  return rep;
}

}  // namespace msalg
