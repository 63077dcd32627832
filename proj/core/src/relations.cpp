#include "msalg/relations.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "msalg/clone.hpp"
#include "msalg/error.hpp"
#include "msalg/lattice.hpp"

namespace msalg {

bool Relation::contains(std::span<const Elem> tuple) const {
  return std::binary_search(
      tuples.begin(), tuples.end(), tuple, [](auto const& a, auto const& b) {
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
      });
}

Relation make_relation(std::size_t arity, std::vector<std::vector<Elem>> tuples) {
  for (auto const& t : tuples) {
    if (t.size() != arity) {
      throw ShapeError("relation tuple of length " + std::to_string(t.size()) + ", expected " +
                       std::to_string(arity));
    }
  }
  std::sort(tuples.begin(), tuples.end());
  tuples.erase(std::unique(tuples.begin(), tuples.end()), tuples.end());
  return Relation{arity, std::move(tuples)};
}

namespace {

SortedAlgebra power_of(SortedAlgebra const& alg, std::size_t mu) {
  if (mu == 0) {
    throw ShapeError("relations of arity 0 are not supported");
  }
  return direct_product(std::vector<SortedAlgebra>(mu, alg));
}

Relation relation_of(std::vector<bool> const& member, std::size_t carrier, std::size_t mu) {
  MixedRadix enc(std::vector<std::size_t>(mu, carrier));
  std::vector<std::vector<Elem>> tuples;
  for (std::size_t c = 0; c < member.size(); ++c) {
    if (member[c]) tuples.push_back(enc.decode(c));
  }
  return Relation{mu, std::move(tuples)};
}

}  // namespace

std::vector<Relation> inv_enumerate(SortedAlgebra const& alg, std::size_t mu,
                                    Limits const& limits) {
  HomogenizedAlgebra h = homogenize(alg, limits);
  SortedAlgebra p = power_of(h.algebra, mu);
  std::vector<Relation> out;
  for (auto const& b : enumerate_subuniverses(p, limits)) {
    out.push_back(relation_of(b.member[0], h.encoding.size(), mu));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<SortedRelation> inv_enumerate_sorted(SortedAlgebra const& alg, std::size_t mu,
                                                 Limits const& limits) {
  SortedAlgebra p = power_of(alg, mu);
  std::vector<SortedRelation> out;
  for (auto const& b : enumerate_subuniverses(p, limits)) {
    SortedRelation r{mu, {}};
    for (SortId s = 0; s < alg.num_sorts(); ++s) {
      r.components.push_back(relation_of(b.member[s], alg.carrier(s), mu));
    }
    out.push_back(std::move(r));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::vector<Elem>> flatten(SortedRelation const& r) {
  std::size_t ns = r.components.size();
  std::size_t mu = r.arity;
  std::vector<std::vector<Elem>> out;
  std::vector<std::size_t> pick(ns, 0);
  for (auto const& c : r.components) {
    if (c.tuples.empty()) return out;
  }
  while (true) {
    std::vector<Elem> flat(ns * mu);
    for (SortId s = 0; s < ns; ++s) {
      for (std::size_t j = 0; j < mu; ++j) flat[s * mu + j] = r.components[s].tuples[pick[s]][j];
    }
    out.push_back(std::move(flat));
    std::size_t s = ns;
    while (s-- > 0) {
      if (++pick[s] < r.components[s].tuples.size()) break;
      pick[s] = 0;
    }
    if (s == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

Relation reshape(HomogenizedAlgebra const& h, SortedRelation const& r) {
  std::size_t ns = h.num_sorts();
  std::size_t mu = r.arity;
  if (r.components.size() != ns) {
    throw ShapeError("reshape: relation has the wrong number of sorts");
  }
  std::vector<std::vector<Elem>> tuples;
  std::vector<Elem> comp(ns);
  for (auto const& flat : flatten(r)) {
    std::vector<Elem> t(mu);
    for (std::size_t j = 0; j < mu; ++j) {
      for (SortId s = 0; s < ns; ++s) comp[s] = flat[s * mu + j];
      t[j] = h.encode(comp);
    }
    tuples.push_back(std::move(t));
  }
  return make_relation(mu, std::move(tuples));
}

bool is_invariant(SortedAlgebra const& alg, Relation const& r) {
  std::size_t mu = r.arity;
  for (auto const& op : alg.ops()) {
    std::size_t n = op.arity();
    if (n == 0) {
      std::vector<Elem> t(mu, op.rows() ? op.at_row(0) : 0);
      if (op.rows() && !r.contains(t)) return false;
      continue;
    }
    if (r.tuples.empty()) continue;
    std::vector<std::size_t> pick(n, 0);
    std::vector<Elem> args(n);
    std::vector<Elem> out(mu);
    while (true) {
      for (std::size_t j = 0; j < mu; ++j) {
        for (std::size_t i = 0; i < n; ++i) args[i] = r.tuples[pick[i]][j];
        out[j] = op.at(args);
      }
      if (!r.contains(out)) return false;
      std::size_t i = n;
      while (i-- > 0) {
        if (++pick[i] < r.tuples.size()) break;
        pick[i] = 0;
      }
      if (i == static_cast<std::size_t>(-1)) break;
    }
  }
  return true;
}

std::string to_string(PPFormula const& phi) {
  auto var = [&](std::size_t v) {
    return v < phi.free ? "x" + std::to_string(v) : "y" + std::to_string(v - phi.free);
  };
  std::string out;
  if (phi.exist) {
    out = "exists";
    for (std::size_t v = phi.free; v < phi.free + phi.exist; ++v) out += " " + var(v);
    out += ": ";
  }
  for (std::size_t k = 0; k < phi.conjuncts.size(); ++k) {
    auto const& c = phi.conjuncts[k];
    out += (k ? " & R" : "R") + std::to_string(c.relation) + "(";
    for (std::size_t i = 0; i < c.coords.size(); ++i) out += (i ? "," : "") + var(c.coords[i]);
    out += ")";
  }
  return out;
}

namespace {

void check_formula(std::vector<std::size_t> const& arities, PPFormula const& phi) {
  std::size_t vars = phi.free + phi.exist;
  for (auto const& c : phi.conjuncts) {
    if (c.relation >= arities.size()) {
      throw RangeError("pp formula refers to relation " + std::to_string(c.relation) + " of " +
                       std::to_string(arities.size()));
    }
    if (c.coords.size() != arities[c.relation]) {
      throw ShapeError("pp conjunct over R" + std::to_string(c.relation) + " has " +
                       std::to_string(c.coords.size()) + " coordinates, expected " +
                       std::to_string(arities[c.relation]));
    }
    for (auto v : c.coords) {
      if (v >= vars) {
        throw RangeError("pp conjunct refers to variable " + std::to_string(v) + " of " +
                         std::to_string(vars));
      }
    }
  }
}

}  // namespace

Relation pp_evaluate(std::vector<Relation> const& relations, PPFormula const& phi,
                     std::size_t carrier) {
  std::vector<std::size_t> arities;
  for (auto const& r : relations) arities.push_back(r.arity);
  check_formula(arities, phi);
  std::size_t vars = phi.free + phi.exist;
  // due[v]: conjuncts whose last variable is v.
  std::vector<std::vector<std::size_t>> due(vars);
  std::vector<std::size_t> always;
  for (std::size_t k = 0; k < phi.conjuncts.size(); ++k) {
    auto const& c = phi.conjuncts[k];
    if (c.coords.empty()) {
      always.push_back(k);
    } else {
      due[*std::max_element(c.coords.begin(), c.coords.end())].push_back(k);
    }
  }
  for (auto k : always) {
    if (relations[phi.conjuncts[k].relation].tuples.empty()) return Relation{phi.free, {}};
  }
  std::vector<Elem> value(vars, 0);
  std::vector<Elem> probe;
  auto holds = [&](std::size_t v) {
    for (auto k : due[v]) {
      auto const& c = phi.conjuncts[k];
      probe.resize(c.coords.size());
      for (std::size_t i = 0; i < c.coords.size(); ++i) probe[i] = value[c.coords[i]];
      if (!relations[c.relation].contains(probe)) return false;
    }
    return true;
  };
  std::function<bool(std::size_t)> witness = [&](std::size_t v) -> bool {
    if (v == vars) return true;
    for (Elem a = 0; a < carrier; ++a) {
      value[v] = a;
      if (holds(v) && witness(v + 1)) return true;
    }
    return false;
  };
  std::vector<std::vector<Elem>> out;
  std::function<void(std::size_t)> free = [&](std::size_t v) {
    if (v == phi.free) {
      if (witness(v)) out.emplace_back(value.begin(), value.begin() + phi.free);
      return;
    }
    for (Elem a = 0; a < carrier; ++a) {
      value[v] = a;
      if (holds(v)) free(v + 1);
    }
  };
  free(0);
  return Relation{phi.free, std::move(out)};
}

SortedRelation pp_evaluate(std::vector<SortedRelation> const& relations, PPFormula const& phi,
                           std::span<const std::size_t> carriers) {
  SortedRelation out{phi.free, {}};
  for (SortId s = 0; s < carriers.size(); ++s) {
    std::vector<Relation> component;
    for (auto const& r : relations) component.push_back(r.components.at(s));
    out.components.push_back(pp_evaluate(component, phi, carriers[s]));
  }
  return out;
}

std::vector<PPFormula> pp_formulas(std::vector<std::size_t> const& arities, std::size_t max_vars,
                                   std::size_t max_conjuncts) {
  std::vector<PPFormula> out;
  for (std::size_t vars = 1; vars <= max_vars; ++vars) {
    std::vector<PPFormula::Conjunct> atoms;
    for (std::size_t k = 0; k < arities.size(); ++k) {
      MixedRadix coords(std::vector<std::size_t>(arities[k], vars));
      for (std::size_t c = 0; c < coords.size(); ++c) {
        auto d = coords.decode(c);
        atoms.push_back({k, std::vector<std::size_t>(d.begin(), d.end())});
      }
    }
    for (std::size_t free = 1; free <= vars; ++free) {
      for (std::size_t m = 1; m <= max_conjuncts; ++m) {
        std::vector<std::size_t> pick(m, 0);
        if (atoms.empty()) break;
        while (true) {
          PPFormula phi{free, vars - free, {}};
          for (auto i : pick) phi.conjuncts.push_back(atoms[i]);
          out.push_back(std::move(phi));
          std::size_t i = m;
          while (i-- > 0) {
            if (++pick[i] < atoms.size()) break;
          }
          if (i == static_cast<std::size_t>(-1)) break;
          for (std::size_t j = i + 1; j < m; ++j) pick[j] = pick[i];
        }
      }
    }
  }
  return out;
}

namespace {

template <class T>
std::vector<T> spaced_sample(std::vector<T> const& from, std::size_t count) {
  if (from.size() <= count) return from;
  std::vector<T> out;
  for (std::size_t k = 0; k < count; ++k) {
    out.push_back(from[count == 1 ? 0 : k * (from.size() - 1) / (count - 1)]);
  }
  return out;
}

}  // namespace

VerificationReport verify_inv_iso(SortedAlgebra const& alg, std::size_t mu_max,
                                  Limits const& limits) {
  PurityReport purity = is_pure(alg, limits);
  if (!purity.pure) {
    throw PreconditionError(
        "verify_inv_iso: the algebra is not pure, so distinct families of subuniverses can have "
        "the same product; missing unary terms for " +
        std::to_string(purity.missing.size()) + " ordered sort pairs");
  }
  VerificationReport rep;
  HomogenizedAlgebra h = homogenize(alg, limits);
  std::vector<std::set<Relation>> hinv(mu_max + 1);
  std::vector<std::vector<SortedRelation>> sinv(mu_max + 1);
  for (std::size_t mu = 1; mu <= mu_max; ++mu) {
    std::string M = std::to_string(mu);
    sinv[mu] = inv_enumerate_sorted(alg, mu, limits);
    auto hs = inv_enumerate(alg, mu, limits);
    hinv[mu] = std::set<Relation>(hs.begin(), hs.end());
    std::set<Relation> images;
    for (auto const& r : sinv[mu]) images.insert(reshape(h, r));
    rep.count("inv_" + M, static_cast<std::int64_t>(sinv[mu].size()));
    rep.count("inv_homogenized_" + M, static_cast<std::int64_t>(hs.size()));
    rep.check("injective_" + M, images.size() == sinv[mu].size(),
              std::to_string(sinv[mu].size() - images.size()) + " collisions");
    rep.check("bijection_" + M, images == hinv[mu],
              std::to_string(images.size()) + " images vs " + std::to_string(hs.size()) +
                  " invariant relations of H(A)");
  }

  // Relational clone homomorphism on a sample of small relations.
  std::vector<SortedRelation> pool;
  if (mu_max >= 1) {
    for (auto& r : spaced_sample(sinv[1], 3)) pool.push_back(r);
  }
  if (mu_max >= 2) {
    for (auto& r : spaced_sample(sinv[2], 4)) pool.push_back(r);
  }
  std::vector<Relation> hpool;
  std::vector<std::size_t> arities;
  for (auto const& r : pool) {
    hpool.push_back(reshape(h, r));
    arities.push_back(r.arity);
  }
  auto formulas = pp_formulas(arities, 4, 2);
  bool commutes = true;
  bool invariant = true;
  std::string cw;
  std::string iw;
  std::int64_t looked_up = 0;
  for (auto const& phi : formulas) {
    SortedRelation ms = pp_evaluate(pool, phi, alg.carriers());
    Relation hr = pp_evaluate(hpool, phi, h.encoding.size());
    if (commutes && !(reshape(h, ms) == hr)) {
      commutes = false;
      cw = to_string(phi);
    }
    if (phi.free <= mu_max) {
      ++looked_up;
      if (invariant && !hinv[phi.free].count(hr)) {
        invariant = false;
        iw = to_string(phi);
      }
    }
  }
  rep.count("pp_pool", static_cast<std::int64_t>(pool.size()));
  rep.count("pp_formulas", static_cast<std::int64_t>(formulas.size()));
  rep.count("pp_invariance_checked", looked_up);
  rep.check("pp_commutes", commutes, cw);
  rep.check("pp_invariant", invariant, iw);
  return rep;
}

}  // namespace msalg
