#include "msalg/cli/run.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "msalg/cli/format.hpp"
#include "msalg/clone.hpp"
#include "msalg/diagonal.hpp"
#include "msalg/error.hpp"
#include "msalg/hetero.hpp"
#include "msalg/homog.hpp"
#include "msalg/lattice.hpp"
#include "msalg/malcev.hpp"
#include "msalg/relations.hpp"

#ifndef MSALG_CORPUS_DIR
#define MSALG_CORPUS_DIR "corpus"
#endif

namespace msalg::cli {

namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

struct Options {
  std::vector<std::string> files;
  std::string output;
  std::string pair_file;
  std::string formula;
  std::size_t lambda = 2;
  std::size_t sorts = 2;
  std::size_t pair_index = 0;
  std::size_t congruence = 0;
  std::size_t mu = 1;
  std::size_t max_arity = Limits{}.max_arity;
  std::size_t table_budget = Limits{}.table_budget;
  std::size_t jonsson_max = 4;
  std::size_t mu_max = 2;
  bool deterministic = false;
  bool tables = false;

  Limits limits() const {
    Limits l;
    l.max_arity = max_arity;
    l.table_budget = table_budget;
    return l;
  }
};

class UsageError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// JSON helpers
// ---------------------------------------------------------------------------

Json values_json(std::span<const Elem> v) { return Json(std::vector<Elem>(v.begin(), v.end())); }

Json table_json(OpTable const& t, SortedSignature const& sig) {
  return Json{{"profile", to_string(t.profile(), sig)}, {"values", values_json(t.values())}};
}

Json table_json(OpTable const& t, SortedSignature const& sig, Term const& term) {
  Json j = table_json(t, sig);
  j["term"] = to_string(term, sig);
  return j;
}

Json report_json(VerificationReport const& r) {
  Json checks = Json::array();
  for (auto const& c : r.checks) {
    Json j{{"name", c.name}, {"passed", c.passed}};
    if (!c.passed && !c.witness.empty()) j["witness"] = c.witness;
    checks.push_back(std::move(j));
  }
  Json counts = Json::object();
  for (auto const& [k, v] : r.counts) counts[k] = v;
  return Json{{"checks", checks}, {"counts", counts}, {"passed", r.passed()}};
}

Json pair_json(DiagonalPair const& p, SortedSignature const& sig) {
  Json j;
  j["d"] = p.d_term ? table_json(p.d, sig, *p.d_term) : table_json(p.d, sig);
  Json e = Json::array();
  for (std::size_t s = 0; s < p.num_sorts(); ++s) {
    e.push_back(s < p.e_terms.size() ? table_json(p.e[s], sig, p.e_terms[s])
                                     : table_json(p.e[s], sig));
  }
  j["e"] = e;
  return j;
}

Json equation_json(EquationCheck const& c) {
  Json j{{"holds", c.holds}};
  if (!c.holds) j["counterexample"] = values_json(c.counterexample);
  return j;
}

Json relation_json(Relation const& r) {
  Json tuples = Json::array();
  for (auto const& t : r.tuples) tuples.push_back(values_json(t));
  return Json{{"arity", r.arity}, {"size", r.tuples.size()}, {"tuples", tuples}};
}

// ---------------------------------------------------------------------------
// Inputs
// ---------------------------------------------------------------------------

SortedAlgebra single_input(Options const& o) {
  if (o.files.size() != 1) throw UsageError("expected exactly one algebra file");
  return load_algebra(o.files[0]);
}

void require_single_sorted(SortedAlgebra const& alg) {
  if (!alg.single_sorted()) throw UsageError("this command needs a single-sorted algebra");
}

// Finds witness terms for a pair given only by tables.
void attach_terms(SortedAlgebra const& alg, DiagonalPair& p, Limits const& limits) {
  std::size_t ns = p.num_sorts();
  CloneFragment frag =
      generate_fragment(alg, {uniform_profile(1, 0), uniform_profile(ns, 0)}, limits);
  p.d_term = fragment_contains(frag, p.d);
  p.e_terms.clear();
  for (auto const& e : p.e) {
    auto t = fragment_contains(frag, e);
    if (!t) {
      p.e_terms.clear();
      return;
    }
    p.e_terms.push_back(*t);
  }
  if (!p.d_term) p.e_terms.clear();
}

DiagonalPair load_pair(SortedAlgebra const& alg, std::string const& path, Limits const& limits) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (Json::exception const& e) {
    throw UsageError(path + ": " + e.what());
  }
  auto read = [&](Json const& t, std::size_t arity) {
    std::vector<Elem> v;
    for (auto const& x : t.at("values")) v.push_back(x.get<Elem>());
    std::size_t n = alg.carrier(0);
    return OpTable(uniform_profile(arity, 0), std::vector<std::size_t>(arity, n), n, v);
  };
  DiagonalPair p;
  try {
    auto const& e = j.at("e");
    p.d = read(j.at("d"), e.size());
    for (auto const& t : e) p.e.push_back(read(t, 1));
  } catch (Json::exception const& ex) {
    throw UsageError(path + ": " + ex.what());
  }
  attach_terms(alg, p, limits);
  return p;
}

DiagonalPair select_pair(SortedAlgebra const& alg, Options const& o) {
  require_single_sorted(alg);
  if (!o.pair_file.empty()) return load_pair(alg, o.pair_file, o.limits());
  auto pairs = find_diagonal_pairs(alg, o.sorts, o.limits());
  if (o.pair_index >= pairs.size()) {
    throw UsageError("the algebra has " + std::to_string(pairs.size()) +
                     " diagonal pairs with " + std::to_string(o.sorts) + " idempotents; index " +
                     std::to_string(o.pair_index) + " requested");
  }
  return pairs[o.pair_index];
}

std::vector<Morphism> quotient_morphisms(SortedAlgebra const& alg, std::size_t count,
                                         Limits const& limits) {
  std::vector<Morphism> out;
  Congruence id = identity_congruence(alg);
  for (auto const& c : enumerate_congruences(alg, limits)) {
    if (out.size() == count) break;
    if (c != id) out.push_back(quotient_map(alg, c.labels));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Formula parsing
// ---------------------------------------------------------------------------

struct FormulaLexer {
  std::string const& text;
  std::size_t pos = 0;

  void skip() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  bool eat(char c) {
    skip();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  void need(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }
  std::string word() {
    skip();
    std::size_t start = pos;
    while (pos < text.size() && std::isalnum(static_cast<unsigned char>(text[pos]))) ++pos;
    return text.substr(start, pos - start);
  }
  [[noreturn]] void fail(std::string const& what) const {
    throw UsageError("formula, column " + std::to_string(pos + 1) + ": " + what);
  }
};

std::size_t index_after(FormulaLexer& lx, std::string const& w, char prefix) {
  if (w.size() < 2 || w[0] != prefix ||
      !std::all_of(w.begin() + 1, w.end(), [](char c) { return std::isdigit(c); })) {
    lx.fail("expected " + std::string(1, prefix) + "<index>, found '" + w + "'");
  }
  return std::stoul(w.substr(1));
}

}  // namespace

PPFormula parse_pp_formula(std::string const& text) {
  FormulaLexer lx{text};
  PPFormula phi;
  std::size_t save = lx.pos;
  std::string w = lx.word();
  if (w == "exists") {
    while (true) {
      std::string y = lx.word();
      if (y.empty()) break;
      if (index_after(lx, y, 'y') != phi.exist) lx.fail("bound variables must be y0, y1, ...");
      ++phi.exist;
    }
    lx.need(':');
  } else {
    lx.pos = save;
  }
  std::vector<std::pair<bool, std::size_t>> refs;
  do {
    PPFormula::Conjunct c;
    c.relation = index_after(lx, lx.word(), 'R');
    lx.need('(');
    if (!lx.eat(')')) {
      do {
        std::string v = lx.word();
        if (!v.empty() && v[0] == 'x') {
          refs.emplace_back(true, index_after(lx, v, 'x'));
        } else {
          std::size_t k = index_after(lx, v, 'y');
          if (k >= phi.exist) lx.fail("unbound variable " + v);
          refs.emplace_back(false, k);
        }
        c.coords.push_back(refs.size() - 1);
      } while (lx.eat(','));
      lx.need(')');
    }
    phi.conjuncts.push_back(std::move(c));
  } while (lx.eat('&'));
  lx.skip();
  if (lx.pos != text.size()) lx.fail("unexpected trailing text");
  for (auto const& [is_free, k] : refs) {
    if (is_free) phi.free = std::max(phi.free, k + 1);
  }
  for (auto& c : phi.conjuncts) {
    for (auto& v : c.coords) {
      auto [is_free, k] = refs[v];
      v = is_free ? k : phi.free + k;
    }
  }
  return phi;
}

namespace {

// ---------------------------------------------------------------------------
// Battery run by verify-all on one algebra
// ---------------------------------------------------------------------------

Json verify_algebra(SortedAlgebra const& alg, std::string const& name, Options const& o) {
  Limits limits = o.limits();
  VerificationReport rep;
  Json notes = Json::object();
  std::size_t ns = alg.num_sorts();

  PurityReport purity = is_pure(alg, limits);
  notes["pure"] = purity.pure;

  if (alg.product_size() <= 8) {
    rep.merge("homogenization.", verify_homogenization(alg, 2, limits));
  }
  rep.merge("sub_con.", verify_sub_con_transfer(alg, limits));

  HomogenizedAlgebra h = homogenize(alg, limits);
  if (purity.pure) {
    CrossSortFamily cross = cross_family(alg, purity);
    rep.merge("mu.", verify_mu_roundtrip(alg, cross, o.lambda,
                                         quotient_morphisms(alg, 4, limits), limits));
    DiagonalPair pair = canonical_pair(h, cross);
    rep.merge("nu.", verify_nu_roundtrip(h.algebra, pair, o.lambda,
                                         quotient_morphisms(h.algebra, 4, limits), limits));
    rep.merge("decompose.", verify_decomposition(h.algebra, pair, o.lambda, limits));
    HeterogenizedAlgebra het = heterogenize(h.algebra, pair, {}, limits);
    rep.merge("hetero.", verify_hetero_fragments(het, o.lambda, limits));

    std::size_t shared = 0;
    for (auto const& p : find_diagonal_pairs(h.algebra, ns, limits)) {
      if (!(p.d == pair.d) || p.e == pair.e) continue;
      if (shared < 3) {
        rep.merge("independence." + std::to_string(shared) + ".",
                  verify_pair_independence(h.algebra, pair, p, 1, limits));
      }
      ++shared;
    }
    rep.count("other_pairs_sharing_d", static_cast<std::int64_t>(shared));
    rep.merge("inv.", verify_inv_iso(alg, o.mu_max, limits));
  } else {
    rep.count("diagonal_pairs_of_homogenization",
              static_cast<std::int64_t>(find_diagonal_pairs(h.algebra, ns, limits).size()));
  }

  auto ps = find_malcev_per_sort(alg, limits);
  auto hs = find_malcev_homog(alg, limits);
  rep.check("malcev.searches_agree", ps.has_value() == hs.has_value(),
            ps ? "per-sort found, homogenized absent" : "homogenized found, per-sort absent");
  LatticeVerdict cp = check_cp_bruteforce(h.algebra, limits);
  notes["malcev"] = static_cast<bool>(ps);
  notes["permutable"] = cp.holds;
  if (ps) rep.check("malcev.permutable", cp.holds, cp.witness);

  auto js = find_jonsson(alg, o.jonsson_max, JonssonMode::per_sort, limits);
  auto jh = find_jonsson(alg, o.jonsson_max, JonssonMode::homogenized, limits);
  rep.check("jonsson.searches_agree", js.has_value() == jh.has_value(),
            js ? "per-sort found, homogenized absent" : "homogenized found, per-sort absent");
  LatticeVerdict cd = check_cd_bruteforce(h.algebra, limits);
  notes["jonsson"] = js ? Json(js->n) : Json("absent up to " + std::to_string(o.jonsson_max));
  notes["distributive"] = cd.holds;
  if (js || jh) rep.check("jonsson.distributive", cd.holds, cd.witness);

  Json j{{"name", name}};
  Json sorts = Json::array();
  for (SortId s = 0; s < ns; ++s) {
    sorts.push_back(Json{{"name", alg.signature().sort_name(s)}, {"size", alg.carrier(s)}});
  }
  j["sorts"] = sorts;
  j["observations"] = notes;
  Json body = report_json(rep);
  for (auto it = body.begin(); it != body.end(); ++it) j[it.key()] = it.value();
  return j;
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

struct Outcome {
  Outcome() = default;
  Outcome(Json r, bool p) : result(std::move(r)), passed(p) {}

  Json result;
  bool passed = true;
  /// Set for commands whose output is an algebra file.
  std::optional<std::string> algebra_text;
};

Outcome algebra_outcome(SortedAlgebra const& alg) {
  Outcome o;
  o.algebra_text = emit_algebra(alg);
  return o;
}

Outcome report_outcome(VerificationReport const& r) { return Outcome{report_json(r), r.passed()}; }

using Command = std::function<Outcome(Options const&)>;

std::map<std::string, std::pair<std::string, Command>> commands() {
  std::map<std::string, std::pair<std::string, Command>> c;

  c["homogenize"] = {"emit the homogenization H(A)", [](Options const& o) {
                       return algebra_outcome(homogenize(single_input(o), o.limits()).algebra);
                     }};

  c["heterogenize"] = {"emit A_d for a diagonal pair of a single-sorted algebra",
                       [](Options const& o) {
                         SortedAlgebra alg = single_input(o);
                         DiagonalPair p = select_pair(alg, o);
                         return algebra_outcome(heterogenize(alg, p, {}, o.limits()).algebra);
                       }};

  c["pure"] = {"test for unary terms between all sorts", [](Options const& o) {
                 SortedAlgebra alg = single_input(o);
                 PurityReport r = is_pure(alg, o.limits());
                 SortedSignature const& sig = alg.signature();
                 Json w = Json::array();
                 Json missing = Json::array();
                 for (SortId a = 0; a < alg.num_sorts(); ++a) {
                   for (SortId b = 0; b < alg.num_sorts(); ++b) {
                     if (r.witnesses[a][b]) {
                       w.push_back(Json{{"from", sig.sort_name(a)},
                                        {"to", sig.sort_name(b)},
                                        {"term", to_string(*r.witnesses[a][b], sig)}});
                     }
                   }
                 }
                 for (auto [a, b] : r.missing) {
                   missing.push_back(Json::array({sig.sort_name(a), sig.sort_name(b)}));
                 }
                 return Outcome{Json{{"pure", r.pure}, {"witnesses", w}, {"missing", missing}},
                                r.pure};
               }};

  c["clone"] = {"term operations at every profile of arity <= --lambda", [](Options const& o) {
                  SortedAlgebra alg = single_input(o);
                  auto profiles = all_profiles(alg.num_sorts(), o.lambda);
                  CloneFragment frag = generate_fragment(alg, profiles, o.limits());
                  Json out = Json::array();
                  for (auto const& p : profiles) {
                    Json j{{"profile", to_string(p, alg.signature())}, {"size", frag.size(p)}};
                    if (o.tables) {
                      Json ops = Json::array();
                      for (std::size_t k = 0; k < frag.size(p); ++k) {
                        ops.push_back(
                            table_json(frag.table(p, k), alg.signature(), frag.witness(p, k)));
                      }
                      j["operations"] = ops;
                    }
                    out.push_back(std::move(j));
                  }
                  return Outcome{Json{{"profiles", out}}, true};
                }};

  c["diag-find"] = {"list the diagonal pairs with --sorts idempotents", [](Options const& o) {
                      SortedAlgebra alg = single_input(o);
                      require_single_sorted(alg);
                      Json out = Json::array();
                      for (auto const& p : find_diagonal_pairs(alg, o.sorts, o.limits())) {
                        out.push_back(pair_json(p, alg.signature()));
                      }
                      return Outcome{Json{{"count", out.size()}, {"pairs", out}}, true};
                    }};

  c["diag-verify"] = {"check the diagonal pair equations", [](Options const& o) {
                        SortedAlgebra alg = single_input(o);
                        DiagonalPair p = select_pair(alg, o);
                        DiagonalReport r = verify_diagonal_pair(alg, p);
                        Json eq1 = Json::array();
                        Json strict = Json::array();
                        Json idem = Json::array();
                        Json eq3 = Json::array();
                        for (auto const& e : r.eq1) eq1.push_back(equation_json(e));
                        for (auto const& e : r.eq1_strict) strict.push_back(equation_json(e));
                        for (auto const& e : r.idempotent) idem.push_back(equation_json(e));
                        for (auto const& e : r.eq3) eq3.push_back(equation_json(e));
                        Json j{{"pair", pair_json(p, alg.signature())},
                               {"idempotent", idem},
                               {"eq1", eq1},
                               {"eq1_strict", strict},
                               {"eq2", equation_json(r.eq2)},
                               {"eq3", eq3},
                               {"strict_eq1", r.strict_eq1},
                               {"diagonal_identity", satisfies_diagonal_identity(p.d)},
                               {"valid", r.valid}};
                        return Outcome{j, r.valid};
                      }};

  c["matrix"] = {"matrix product of the retracts of a diagonal pair", [](Options const& o) {
                   SortedAlgebra alg = single_input(o);
                   DiagonalPair p = select_pair(alg, o);
                   MatrixProduct mp = matrix_product_algebra(alg, p, o.lambda, o.limits());
                   Json factors = Json::array();
                   for (auto const& f : mp.factors) factors.push_back(values_json(f));
                   Json sizes = Json::array();
                   for (auto const& f : mp.fragment) sizes.push_back(f.size());
                   Json j{{"factors", factors},
                          {"carrier", mp.encoding.size()},
                          {"fragment_sizes", sizes},
                          {"algebra", emit_algebra(mp.algebra)}};
                   return Outcome{j, true};
                 }};

  c["decompose"] = {"verify the clone decomposition along a diagonal pair", [](Options const& o) {
                      SortedAlgebra alg = single_input(o);
                      DiagonalPair p = select_pair(alg, o);
                      return report_outcome(verify_decomposition(alg, p, o.lambda, o.limits()));
                    }};

  c["roundtrip-nu"] = {"verify H(A_d) against A", [](Options const& o) {
                         SortedAlgebra alg = single_input(o);
                         DiagonalPair p = select_pair(alg, o);
                         return report_outcome(verify_nu_roundtrip(
                             alg, p, o.lambda, quotient_morphisms(alg, 4, o.limits()),
                             o.limits()));
                       }};

  c["roundtrip-mu"] = {"verify H(A)_d against A", [](Options const& o) {
                         SortedAlgebra alg = single_input(o);
                         CrossSortFamily cross = cross_family(alg, is_pure(alg, o.limits()));
                         return report_outcome(verify_mu_roundtrip(
                             alg, cross, o.lambda, quotient_morphisms(alg, 4, o.limits()),
                             o.limits()));
                       }};

  c["sub"] = {"list the subuniverses", [](Options const& o) {
                SortedAlgebra alg = single_input(o);
                Json out = Json::array();
                for (auto const& b : enumerate_subuniverses(alg, o.limits())) {
                  Json j = Json::object();
                  for (SortId s = 0; s < alg.num_sorts(); ++s) {
                    j[alg.signature().sort_name(s)] = values_json(b.elements(s));
                  }
                  out.push_back(std::move(j));
                }
                return Outcome{Json{{"count", out.size()}, {"subuniverses", out}}, true};
              }};

  c["con"] = {"list the congruences as block labels", [](Options const& o) {
                SortedAlgebra alg = single_input(o);
                Json out = Json::array();
                for (auto const& t : enumerate_congruences(alg, o.limits())) {
                  Json j = Json::object();
                  for (SortId s = 0; s < alg.num_sorts(); ++s) {
                    j[alg.signature().sort_name(s)] = values_json(t.labels[s]);
                  }
                  out.push_back(std::move(j));
                }
                return Outcome{Json{{"count", out.size()}, {"congruences", out}}, true};
              }};

  c["quotient"] = {"emit A modulo the --congruence'th congruence", [](Options const& o) {
                     SortedAlgebra alg = single_input(o);
                     auto cons = enumerate_congruences(alg, o.limits());
                     if (o.congruence >= cons.size()) {
                       throw UsageError("congruence index " + std::to_string(o.congruence) +
                                        " of " + std::to_string(cons.size()));
                     }
                     return algebra_outcome(quotient(alg, cons[o.congruence]));
                   }};

  c["product"] = {"emit the direct product of the given algebras", [](Options const& o) {
                    if (o.files.empty()) throw UsageError("expected at least one algebra file");
                    std::vector<SortedAlgebra> algs;
                    for (auto const& f : o.files) algs.push_back(load_algebra(f));
                    return algebra_outcome(direct_product(algs));
                  }};

  c["transfer"] = {"compare Sub and Con of A and H(A)", [](Options const& o) {
                     return report_outcome(verify_sub_con_transfer(single_input(o), o.limits()));
                   }};

  c["inv"] = {"list the --mu-ary invariant relations of H(A)", [](Options const& o) {
                SortedAlgebra alg = single_input(o);
                Json out = Json::array();
                for (auto const& r : inv_enumerate(alg, o.mu, o.limits())) {
                  out.push_back(relation_json(r));
                }
                return Outcome{Json{{"arity", o.mu}, {"count", out.size()}, {"relations", out}},
                               true};
              }};

  c["pp"] = {"evaluate --formula over the invariant relations of H(A) of arity <= --mu-max",
             [](Options const& o) {
               SortedAlgebra alg = single_input(o);
               if (o.formula.empty()) throw UsageError("--formula is required");
               PPFormula phi = parse_pp_formula(o.formula);
               std::vector<Relation> rels;
               for (std::size_t mu = 1; mu <= o.mu_max; ++mu) {
                 for (auto& r : inv_enumerate(alg, mu, o.limits())) rels.push_back(std::move(r));
               }
               HomogenizedAlgebra h = homogenize(alg, o.limits());
               Relation r = pp_evaluate(rels, phi, h.encoding.size());
               bool inv = is_invariant(h.algebra, r);
               Json j{{"formula", to_string(phi)},
                      {"relations_available", rels.size()},
                      {"relation", relation_json(r)},
                      {"invariant", inv}};
               return Outcome{j, inv};
             }};

  c["inv-iso"] = {"verify Inv(A) against Inv(H(A)) up to --mu-max", [](Options const& o) {
                    return report_outcome(verify_inv_iso(single_input(o), o.mu_max, o.limits()));
                  }};

  c["malcev"] = {"search Mal'cev terms sort by sort and on H(A)", [](Options const& o) {
                   SortedAlgebra alg = single_input(o);
                   Limits limits = o.limits();
                   HomogenizedAlgebra h = homogenize(alg, limits);
                   auto ps = find_malcev_per_sort(alg, limits);
                   auto hs = find_malcev_homog(alg, limits);
                   VerificationReport rep;
                   rep.check("searches_agree", ps.has_value() == hs.has_value());
                   LatticeVerdict cp = check_cp_bruteforce(h.algebra, limits);
                   if (ps) rep.check("permutable", cp.holds, cp.witness);
                   Json j = report_json(rep);
                   auto witness = [&](std::optional<MalcevWitness> const& w) {
                     if (!w) return Json(nullptr);
                     Json comps = Json::array();
                     for (std::size_t s = 0; s < w->components.size(); ++s) {
                       comps.push_back(
                           table_json(w->components[s], alg.signature(), w->terms[s]));
                     }
                     Json out{{"components", comps}};
                     if (w->homogenized) {
                       out["homogenized"] = table_json(*w->homogenized, h.algebra.signature(),
                                                       *w->homogenized_term);
                     }
                     return out;
                   };
                   j["per_sort"] = witness(ps);
                   j["homogenized"] = witness(hs);
                   j["congruences"] = cp.congruences;
                   j["permutable"] = cp.holds;
                   if (!cp.holds) j["non_permuting"] = cp.witness;
                   return Outcome{j, rep.passed()};
                 }};

  c["jonsson"] = {"search Jonsson chains of length <= --jonsson-max", [](Options const& o) {
                    SortedAlgebra alg = single_input(o);
                    Limits limits = o.limits();
                    HomogenizedAlgebra h = homogenize(alg, limits);
                    auto js = find_jonsson(alg, o.jonsson_max, JonssonMode::per_sort, limits);
                    auto jh = find_jonsson(alg, o.jonsson_max, JonssonMode::homogenized, limits);
                    VerificationReport rep;
                    rep.check("searches_agree", js.has_value() == jh.has_value());
                    LatticeVerdict cd = check_cd_bruteforce(h.algebra, limits);
                    if (js || jh) rep.check("distributive", cd.holds, cd.witness);
                    Json j = report_json(rep);
                    auto chain = [&](std::optional<JonssonChain> const& c) {
                      if (!c) return Json("absent up to " + std::to_string(o.jonsson_max));
                      Json sorts = Json::array();
                      for (std::size_t s = 0; s < c->chains.size(); ++s) {
                        Json d = Json::array();
                        for (std::size_t i = 0; i < c->chains[s].size(); ++i) {
                          d.push_back(
                              table_json(c->chains[s][i], alg.signature(), c->terms[s][i]));
                        }
                        sorts.push_back(std::move(d));
                      }
                      Json out{{"n", c->n}, {"chains", sorts}};
                      if (!c->homogenized.empty()) {
                        Json d = Json::array();
                        for (std::size_t i = 0; i < c->homogenized.size(); ++i) {
                          d.push_back(table_json(c->homogenized[i], h.algebra.signature(),
                                                 c->homogenized_terms[i]));
                        }
                        out["homogenized"] = d;
                      }
                      return out;
                    };
                    j["per_sort"] = chain(js);
                    j["homogenized"] = chain(jh);
                    j["congruences"] = cd.congruences;
                    j["distributive"] = cd.holds;
                    return Outcome{j, rep.passed()};
                  }};

  c["cp"] = {"check that all congruences permute", [](Options const& o) {
               LatticeVerdict v = check_cp_bruteforce(single_input(o), o.limits());
               Json j{{"congruences", v.congruences}, {"permutable", v.holds}};
               if (!v.holds) j["witness"] = v.witness;
               return Outcome{j, v.holds};
             }};

  c["cd"] = {"check that the congruence lattice is distributive", [](Options const& o) {
               LatticeVerdict v = check_cd_bruteforce(single_input(o), o.limits());
               Json j{{"congruences", v.congruences}, {"distributive", v.holds}};
               if (!v.holds) j["witness"] = v.witness;
               return Outcome{j, v.holds};
             }};

  c["verify-all"] = {"run every check on the given algebras or the shipped corpus",
                     [](Options const& o) {
                       std::vector<fs::path> paths(o.files.begin(), o.files.end());
                       if (paths.empty()) {
                         for (auto const& e : fs::directory_iterator(MSALG_CORPUS_DIR)) {
                           if (e.path().extension() == ".alg") paths.push_back(e.path());
                         }
                         std::sort(paths.begin(), paths.end());
                       }
                       Json out = Json::array();
                       bool ok = true;
                       for (auto const& p : paths) {
                         Json j = verify_algebra(load_algebra(p), p.stem().string(), o);
                         ok &= j["passed"].get<bool>();
                         out.push_back(std::move(j));
                       }
                       return Outcome{Json{{"algebras", out}}, ok};
                     }};
  return c;
}

}  // namespace

RunResult run(std::vector<std::string> const& args) {
  auto start = std::chrono::steady_clock::now();
  RunResult res;
  Options o;
  CLI::App app{"Finite many-sorted algebras, their homogenizations and diagonal pairs", "msalg"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--max-arity", o.max_arity, "largest arity of any generated table")
      ->capture_default_str();
  app.add_option("--table-budget", o.table_budget, "largest number of tables per closure")
      ->capture_default_str();
  app.add_option("--jonsson-max", o.jonsson_max, "largest Jonsson chain length searched")
      ->capture_default_str();
  app.add_option("--mu-max", o.mu_max, "largest relation arity compared")->capture_default_str();
  app.add_flag("--deterministic-timing", o.deterministic, "report zero timings");
  app.add_option("--lambda", o.lambda, "largest operation arity checked")->capture_default_str();
  app.add_option("--sorts", o.sorts, "number of idempotents in a diagonal pair")
      ->capture_default_str();
  app.add_option("--pair-index", o.pair_index, "which found diagonal pair to use")
      ->capture_default_str();
  app.add_option("--pair", o.pair_file, "JSON file with tables d and e as printed by diag-find");
  app.add_option("--congruence", o.congruence, "index into the congruence listing")
      ->capture_default_str();
  app.add_option("--mu", o.mu, "relation arity")->capture_default_str();
  app.add_option("--formula", o.formula, "pp formula, e.g. \"exists y0: R0(x0,y0)\"");
  app.add_option("-o,--output", o.output, "write the emitted algebra to this file");
  app.add_flag("--tables", o.tables, "list every table");

  auto table = commands();
  for (auto const& [name, entry] : table) {
    app.add_subcommand(name, entry.first)->add_option("files", o.files, "algebra files");
  }

  std::ostringstream out;
  std::ostringstream err;
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (CLI::ParseError const& e) {
    int code = app.exit(e, out, err);
    res.status = code == 0 ? 0 : 2;
    res.out = out.str();
    res.err = err.str();
    return res;
  }
  std::string name = app.get_subcommands().front()->get_name();

  Outcome outcome;
  try {
    outcome = table.at(name).second(o);
  } catch (Error const& e) {
    res.status = 2;
    res.err = "msalg " + name + ": " + e.what() + "\n";
    return res;
  }

  if (outcome.algebra_text) {
    if (o.output.empty()) {
      res.out = *outcome.algebra_text;
    } else {
      std::ofstream f(o.output);
      if (!f) {
        res.status = 2;
        res.err = "msalg " + name + ": cannot write " + o.output + "\n";
        return res;
      }
      f << *outcome.algebra_text;
    }
    return res;
  }

  Json report;
  report["command"] = name;
  report["inputs"] = o.files;
  report["config"] = Json{{"max_arity", o.max_arity},  {"table_budget", o.table_budget},
                          {"jonsson_max", o.jonsson_max}, {"mu_max", o.mu_max},
                          {"lambda", o.lambda},          {"seed", 0}};
  report["result"] = outcome.result;
  report["passed"] = outcome.passed;
  auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - start);
  report["timing_ms"] = o.deterministic ? 0 : elapsed.count();
  res.out = report.dump(2) + "\n";
  res.status = outcome.passed ? 0 : 1;
  return res;
}

}  // namespace msalg::cli
