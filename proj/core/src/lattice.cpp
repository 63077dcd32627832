#include "msalg/lattice.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <set>

#include "msalg/clone.hpp"
#include "msalg/diagonal.hpp"
#include "msalg/error.hpp"

namespace msalg {

std::size_t SubUniverse::size(SortId s) const {
  auto const& m = member.at(s);
  return static_cast<std::size_t>(std::count(m.begin(), m.end(), true));
}

std::vector<Elem> SubUniverse::elements(SortId s) const {
  std::vector<Elem> out;
  for (Elem a = 0; a < member.at(s).size(); ++a) {
    if (member[s][a]) out.push_back(a);
  }
  return out;
}

std::size_t Congruence::blocks(SortId s) const {
  std::size_t k = 0;
  for (Elem a = 0; a < labels.at(s).size(); ++a) {
    if (labels[s][a] == a) ++k;
  }
  return k;
}

namespace {

// Semi-naive closure: every tuple is evaluated once, when its latest
// element is processed.
class Closer {
 public:
  explicit Closer(SortedAlgebra const& alg) : alg_(alg) {}

  std::vector<std::vector<bool>> extend(std::vector<std::vector<bool>> member,
                                        std::vector<std::pair<SortId, Elem>> const& fresh) {
    std::size_t ns = alg_.num_sorts();
    order_.clear();
    by_sort_.assign(ns, {});
    for (SortId s = 0; s < ns; ++s) {
      for (Elem a = 0; a < member[s].size(); ++a) {
        if (member[s][a]) push(s, a);
      }
    }
    std::size_t done = order_.size();
    member_ = std::move(member);
    for (auto const& op : alg_.ops()) {
      if (op.arity() == 0 && op.rows() == 1) add(op.cod(), op.at_row(0));
    }
    for (auto [s, a] : fresh) add(s, a);
    for (std::size_t i = done; i < order_.size(); ++i) {
      process(i);
    }
    return std::move(member_);
  }

 private:
  void push(SortId s, Elem a) {
    order_.emplace_back(s, a);
    by_sort_[s].push_back(a);
  }
  void add(SortId s, Elem a) {
    if (!member_[s][a]) {
      member_[s][a] = true;
      push(s, a);
    }
  }

  void process(std::size_t i) {
    auto [s, item] = order_[i];
    std::size_t ns = alg_.num_sorts();
    std::vector<std::size_t> before(ns, 0);
    for (std::size_t j = 0; j < i; ++j) ++before[order_[j].first];
    for (auto const& op : alg_.ops()) {
      std::size_t n = op.arity();
      auto const& in = op.profile().inputs;
      for (std::size_t p = 0; p < n; ++p) {
        if (in[p] != s) continue;
        std::vector<std::size_t> range(n);
        bool empty = false;
        for (std::size_t q = 0; q < n; ++q) {
          range[q] = q == p ? 1 : before[in[q]] + (q > p && in[q] == s ? 1 : 0);
          empty |= range[q] == 0;
        }
        if (empty) continue;
        std::vector<std::size_t> idx(n, 0);
        std::vector<Elem> args(n);
        while (true) {
          for (std::size_t q = 0; q < n; ++q) {
            args[q] = q == p ? item : by_sort_[in[q]][idx[q]];
          }
          add(op.cod(), op.at(args));
          std::size_t q = n;
          while (q-- > 0) {
            if (++idx[q] < range[q]) break;
            idx[q] = 0;
          }
          if (q == static_cast<std::size_t>(-1)) break;
        }
      }
    }
  }

  SortedAlgebra const& alg_;
  std::vector<std::pair<SortId, Elem>> order_;
  std::vector<std::vector<Elem>> by_sort_;
  std::vector<std::vector<bool>> member_;
};

std::vector<std::vector<bool>> empty_family(SortedAlgebra const& alg) {
  std::vector<std::vector<bool>> m;
  for (auto n : alg.carriers()) m.emplace_back(n, false);
  return m;
}

struct UnionFind {
  std::vector<Elem> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  Elem find(Elem a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  }
  bool unite(Elem a, Elem b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (a < b) std::swap(a, b);
    parent[a] = b;
    return true;
  }
};

void require_same_shape(SortedAlgebra const& alg, Congruence const& theta) {
  if (theta.labels.size() != alg.num_sorts()) {
    throw ShapeError("congruence has the wrong number of sorts");
  }
  for (SortId s = 0; s < alg.num_sorts(); ++s) {
    if (theta.labels[s].size() != alg.carrier(s)) {
      throw ShapeError("congruence does not match the carrier of sort " + std::to_string(s));
    }
  }
}

}  // namespace

bool is_subuniverse(SortedAlgebra const& alg, std::vector<std::vector<bool>> const& member) {
  for (auto const& op : alg.ops()) {
    std::vector<Elem> args(op.arity());
    for (std::size_t r = 0; r < op.rows(); ++r) {
      op.shape().decode(r, args);
      bool inside = true;
      for (std::size_t i = 0; i < args.size() && inside; ++i) {
        inside = member[op.profile().inputs[i]][args[i]];
      }
      if (inside && !member[op.cod()][op.at_row(r)]) return false;
    }
  }
  return true;
}

SubUniverse subalgebra_generate(SortedAlgebra const& alg,
                                std::vector<std::vector<Elem>> const& gens) {
  if (gens.size() != alg.num_sorts()) {
    throw ShapeError("subalgebra_generate: one generator set per sort expected");
  }
  std::vector<std::pair<SortId, Elem>> fresh;
  for (SortId s = 0; s < gens.size(); ++s) {
    for (Elem a : gens[s]) {
      if (a >= alg.carrier(s)) {
        throw RangeError("subalgebra_generate: generator " + std::to_string(a) +
                         " outside sort " + alg.signature().sort_name(s));
      }
      fresh.emplace_back(s, a);
    }
  }
  Closer c(alg);
  return SubUniverse{c.extend(empty_family(alg), fresh)};
}

std::vector<SubUniverse> enumerate_subuniverses(SortedAlgebra const& alg, Limits const& limits) {
  Closer c(alg);
  std::set<SubUniverse> seen;
  std::deque<SubUniverse> queue;
  SubUniverse bottom{c.extend(empty_family(alg), {})};
  seen.insert(bottom);
  queue.push_back(bottom);
  std::size_t visited = 0;
  while (!queue.empty()) {
    SubUniverse b = std::move(queue.front());
    queue.pop_front();
    for (SortId s = 0; s < alg.num_sorts(); ++s) {
      for (Elem a = 0; a < alg.carrier(s); ++a) {
        if (b.member[s][a]) continue;
        if (++visited > limits.enumeration_budget) {
          throw ResourceError("subuniverse enumeration exceeded the enumeration budget of " +
                              std::to_string(limits.enumeration_budget));
        }
        SubUniverse next{c.extend(b.member, {{s, a}})};
        if (seen.insert(next).second) queue.push_back(std::move(next));
      }
    }
  }
  return {seen.begin(), seen.end()};
}

Congruence canonical_congruence(std::vector<std::vector<Elem>> const& representative) {
  Congruence c;
  for (auto const& rep : representative) {
    std::map<Elem, Elem> least;
    std::vector<Elem> labels(rep.size());
    for (Elem a = 0; a < rep.size(); ++a) {
      labels[a] = least.try_emplace(rep[a], a).first->second;
    }
    c.labels.push_back(std::move(labels));
  }
  return c;
}

bool is_congruence(SortedAlgebra const& alg, Congruence const& theta) {
  require_same_shape(alg, theta);
  for (SortId s = 0; s < alg.num_sorts(); ++s) {
    for (Elem a = 0; a < alg.carrier(s); ++a) {
      Elem l = theta.labels[s][a];
      if (l > a || theta.labels[s][l] != l) return false;
    }
  }
  for (auto const& op : alg.ops()) {
    std::vector<Elem> args(op.arity());
    for (std::size_t r = 0; r < op.rows(); ++r) {
      op.shape().decode(r, args);
      Elem out = op.at_row(r);
      for (std::size_t i = 0; i < args.size(); ++i) {
        Elem keep = args[i];
        args[i] = theta.labels[op.profile().inputs[i]][keep];
        if (!theta.related(op.cod(), out, op.at(args))) return false;
        args[i] = keep;
      }
    }
  }
  return true;
}

Congruence identity_congruence(SortedAlgebra const& alg) {
  Congruence c;
  for (auto n : alg.carriers()) {
    std::vector<Elem> l(n);
    std::iota(l.begin(), l.end(), 0);
    c.labels.push_back(std::move(l));
  }
  return c;
}

Congruence full_congruence(SortedAlgebra const& alg) {
  Congruence c;
  for (auto n : alg.carriers()) c.labels.emplace_back(n, 0);
  return c;
}

Congruence meet(Congruence const& a, Congruence const& b) {
  std::vector<std::vector<Elem>> rep;
  for (SortId s = 0; s < a.labels.size(); ++s) {
    std::size_t n = a.labels[s].size();
    std::vector<Elem> r(n);
    for (Elem x = 0; x < n; ++x) r[x] = static_cast<Elem>(a.labels[s][x] * n + b.labels[s][x]);
    rep.push_back(std::move(r));
  }
  return canonical_congruence(rep);
}

Congruence join(Congruence const& a, Congruence const& b) {
  std::vector<std::vector<Elem>> rep;
  for (SortId s = 0; s < a.labels.size(); ++s) {
    UnionFind uf(a.labels[s].size());
    for (Elem x = 0; x < a.labels[s].size(); ++x) {
      uf.unite(x, a.labels[s][x]);
      uf.unite(x, b.labels[s][x]);
    }
    std::vector<Elem> r(a.labels[s].size());
    for (Elem x = 0; x < r.size(); ++x) r[x] = uf.find(x);
    rep.push_back(std::move(r));
  }
  return canonical_congruence(rep);
}

Congruence congruence_generate(SortedAlgebra const& alg, PairSet const& pairs) {
  std::size_t ns = alg.num_sorts();
  if (pairs.size() != ns) {
    throw ShapeError("congruence_generate: one pair set per sort expected");
  }
  std::vector<UnionFind> uf;
  for (auto n : alg.carriers()) uf.emplace_back(n);
  std::deque<std::tuple<SortId, Elem, Elem>> work;
  auto merge = [&](SortId s, Elem a, Elem b) {
    if (uf[s].unite(a, b)) work.emplace_back(s, a, b);
  };
  for (SortId s = 0; s < ns; ++s) {
    for (auto [a, b] : pairs[s]) {
      if (a >= alg.carrier(s) || b >= alg.carrier(s)) {
        throw RangeError("congruence_generate: pair outside sort " + alg.signature().sort_name(s));
      }
      merge(s, a, b);
    }
  }
  // Each merged pair is pushed through every unary polynomial.
  while (!work.empty()) {
    auto [s, a, b] = work.front();
    work.pop_front();
    for (auto const& op : alg.ops()) {
      std::size_t n = op.arity();
      auto const& in = op.profile().inputs;
      for (std::size_t p = 0; p < n; ++p) {
        if (in[p] != s) continue;
        std::vector<std::size_t> radix(n);
        for (std::size_t q = 0; q < n; ++q) radix[q] = q == p ? 1 : alg.carrier(in[q]);
        MixedRadix others(radix);
        std::vector<Elem> args(n);
        for (std::size_t r = 0; r < others.size(); ++r) {
          others.decode(r, args);
          args[p] = a;
          Elem x = op.at(args);
          args[p] = b;
          Elem y = op.at(args);
          merge(op.cod(), x, y);
        }
      }
    }
  }
  std::vector<std::vector<Elem>> rep;
  for (SortId s = 0; s < ns; ++s) {
    std::vector<Elem> r(alg.carrier(s));
    for (Elem x = 0; x < r.size(); ++x) r[x] = uf[s].find(x);
    rep.push_back(std::move(r));
  }
  return canonical_congruence(rep);
}

std::vector<Congruence> enumerate_congruences(SortedAlgebra const& alg, Limits const& limits) {
  std::size_t ns = alg.num_sorts();
  std::set<Congruence> principal;
  for (SortId s = 0; s < ns; ++s) {
    for (Elem a = 0; a < alg.carrier(s); ++a) {
      for (Elem b = a + 1; b < alg.carrier(s); ++b) {
        PairSet ps(ns);
        ps[s].emplace_back(a, b);
        principal.insert(congruence_generate(alg, ps));
      }
    }
  }
  std::set<Congruence> seen;
  std::deque<Congruence> queue;
  Congruence bottom = identity_congruence(alg);
  seen.insert(bottom);
  queue.push_back(bottom);
  std::size_t visited = 0;
  while (!queue.empty()) {
    Congruence c = std::move(queue.front());
    queue.pop_front();
    for (auto const& p : principal) {
      if (++visited > limits.enumeration_budget) {
        throw ResourceError("congruence enumeration exceeded the enumeration budget of " +
                            std::to_string(limits.enumeration_budget));
      }
      Congruence next = join(c, p);
      if (seen.insert(next).second) queue.push_back(std::move(next));
    }
  }
  return {seen.begin(), seen.end()};
}

SortedAlgebra quotient(SortedAlgebra const& alg, Congruence const& theta) {
  require_same_shape(alg, theta);
  return quotient_map(alg, theta.labels).target;
}

SortedAlgebra subalgebra(SortedAlgebra const& alg, SubUniverse const& b) {
  if (!is_subuniverse(alg, b.member)) {
    throw PreconditionError("subalgebra: the family is not closed under the operations");
  }
  std::size_t ns = alg.num_sorts();
  std::vector<std::vector<Elem>> elems(ns);
  std::vector<std::size_t> carriers;
  for (SortId s = 0; s < ns; ++s) {
    elems[s] = b.elements(s);
    carriers.push_back(elems[s].size());
  }
  std::vector<OpTable> ops;
  for (auto const& op : alg.ops()) {
    Profile const& p = op.profile();
    std::vector<std::size_t> sizes;
    for (SortId t : p.inputs) sizes.push_back(carriers[t]);
    MixedRadix shape(sizes);
    auto rank = rank_of(elems[p.cod], alg.carrier(p.cod));
    std::vector<Elem> values(shape.size());
    std::vector<Elem> args(p.arity());
    for (std::size_t r = 0; r < values.size(); ++r) {
      shape.decode(r, args);
      for (std::size_t i = 0; i < args.size(); ++i) args[i] = elems[p.inputs[i]][args[i]];
      values[r] = rank[op.at(args)];
    }
    ops.emplace_back(p, std::move(sizes), carriers[p.cod], std::move(values));
  }
  return SortedAlgebra(alg.signature(), std::move(carriers), std::move(ops));
}

SortedAlgebra direct_product(std::vector<SortedAlgebra> const& algs) {
  if (algs.empty()) {
    throw ShapeError("direct_product: at least one factor expected");
  }
  SortedAlgebra const& first = algs.front();
  for (auto const& a : algs) {
    if (!(a.signature() == first.signature())) {
      throw SortError("direct_product: factors have different signatures");
    }
  }
  std::size_t ns = first.num_sorts();
  std::vector<MixedRadix> enc;
  std::vector<std::size_t> carriers;
  for (SortId s = 0; s < ns; ++s) {
    std::vector<std::size_t> r;
    for (auto const& a : algs) r.push_back(a.carrier(s));
    enc.emplace_back(r);
    carriers.push_back(enc.back().size());
  }
  std::vector<OpTable> ops;
  std::size_t k = algs.size();
  for (std::size_t g = 0; g < first.num_ops(); ++g) {
    Profile const& p = first.op(g).profile();
    auto sizes = [&] {
      std::vector<std::size_t> v;
      for (SortId t : p.inputs) v.push_back(carriers[t]);
      return v;
    }();
    MixedRadix shape(sizes);
    std::vector<Elem> values(shape.size());
    std::vector<Elem> args(p.arity());
    std::vector<std::vector<Elem>> split(p.arity(), std::vector<Elem>(k));
    std::vector<Elem> factor_args(p.arity());
    std::vector<Elem> out(k);
    for (std::size_t r = 0; r < values.size(); ++r) {
      shape.decode(r, args);
      for (std::size_t i = 0; i < args.size(); ++i) enc[p.inputs[i]].decode(args[i], split[i]);
      for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t i = 0; i < args.size(); ++i) factor_args[i] = split[i][j];
        out[j] = algs[j].op(g).at(factor_args);
      }
      values[r] = static_cast<Elem>(enc[p.cod].encode(out));
    }
    ops.emplace_back(p, std::move(sizes), carriers[p.cod], std::move(values));
  }
  return SortedAlgebra(first.signature(), std::move(carriers), std::move(ops));
}

std::vector<bool> homog_subset(HomogenizedAlgebra const& h, SubUniverse const& b) {
  std::size_t ns = h.num_sorts();
  std::vector<bool> out(h.encoding.size(), false);
  std::vector<Elem> comp(ns);
  for (std::size_t c = 0; c < out.size(); ++c) {
    h.encoding.decode(c, comp);
    bool in = true;
    for (SortId s = 0; s < ns && in; ++s) in = b.member[s][comp[s]];
    out[c] = in;
  }
  return out;
}

Congruence homog_congruence(HomogenizedAlgebra const& h, Congruence const& theta) {
  std::size_t ns = h.num_sorts();
  std::vector<Elem> labels(h.encoding.size());
  std::vector<Elem> comp(ns);
  for (std::size_t c = 0; c < labels.size(); ++c) {
    h.encoding.decode(c, comp);
    for (SortId s = 0; s < ns; ++s) comp[s] = theta.labels[s][comp[s]];
    labels[c] = h.encode(comp);
  }
  return Congruence{{std::move(labels)}};
}

namespace {

std::string family_text(SortedAlgebra const& alg, SubUniverse const& b) {
  std::string out = "(";
  for (SortId s = 0; s < alg.num_sorts(); ++s) {
    out += (s ? ", " : "") + to_string(b.elements(s));
  }
  return out + ")";
}

// Checks that `map` is a bijective homomorphism.
bool is_isomorphism(SortedAlgebra const& src, SortedAlgebra const& dst, SortedMap const& map) {
  for (SortId s = 0; s < src.num_sorts(); ++s) {
    auto v = map.maps[s].values();
    std::vector<Elem> sorted(v.begin(), v.end());
    std::sort(sorted.begin(), sorted.end());
    if (src.carrier(s) != dst.carrier(s) ||
        std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      return false;
    }
  }
  return is_homomorphism(src, dst, map);
}

}  // namespace

VerificationReport verify_sub_con_transfer(SortedAlgebra const& alg, Limits const& limits) {
  VerificationReport rep;
  std::size_t ns = alg.num_sorts();
  HomogenizedAlgebra h = homogenize(alg, limits);

  auto sub = enumerate_subuniverses(alg, limits);
  auto hsub = enumerate_subuniverses(h.algebra, limits);
  std::map<std::vector<bool>, std::size_t> images;
  std::string collapse;
  for (std::size_t i = 0; i < sub.size(); ++i) {
    auto [it, fresh] = images.try_emplace(homog_subset(h, sub[i]), i);
    if (!fresh && collapse.empty()) {
      collapse = family_text(alg, sub[it->second]) + " and " + family_text(alg, sub[i]) +
                 " have the same product";
    }
  }
  std::set<std::vector<bool>> hset;
  for (auto const& b : hsub) hset.insert(b.member[0]);
  std::set<std::vector<bool>> iset;
  for (auto const& [k, v] : images) iset.insert(k);
  rep.count("sub", static_cast<std::int64_t>(sub.size()));
  rep.count("sub_homogenized", static_cast<std::int64_t>(hsub.size()));
  rep.count("sub_products", static_cast<std::int64_t>(images.size()));
  rep.check("sub_products_match", iset == hset,
            std::to_string(iset.size()) + " products vs " + std::to_string(hset.size()) +
                " subuniverses of H(A)");
  bool injective = images.size() == sub.size();
  bool pure = is_pure(alg, limits).pure;
  rep.check("sub_injective_iff_pure", injective == pure,
            injective ? "injective on a non-pure algebra" : "collapse on a pure algebra: " +
                                                                collapse);
  if (!injective) {
    rep.count("sub_collapsed", static_cast<std::int64_t>(sub.size() - images.size()));
  }

  auto con = enumerate_congruences(alg, limits);
  auto hcon = enumerate_congruences(h.algebra, limits);
  std::set<Congruence> cimages;
  for (auto const& c : con) cimages.insert(homog_congruence(h, c));
  std::set<Congruence> hcset(hcon.begin(), hcon.end());
  rep.count("con", static_cast<std::int64_t>(con.size()));
  rep.count("con_homogenized", static_cast<std::int64_t>(hcon.size()));
  rep.check("con_products_match", cimages == hcset,
            std::to_string(cimages.size()) + " products vs " + std::to_string(hcset.size()) +
                " congruences of H(A)");

  // H(A/theta) is H(A)/H(theta) via the blockwise map.
  bool quot = true;
  std::string qw;
  for (std::size_t i = 0; i < con.size() && quot; ++i) {
    Morphism q = quotient_map(alg, con[i].labels);
    HomogenizedAlgebra hq = homogenize(q.target, limits);
    Congruence ht = homog_congruence(h, con[i]);
    Morphism hquot = quotient_map(h.algebra, ht.labels);
    std::vector<Elem> values(hquot.target.carrier(0));
    std::vector<Elem> comp(ns);
    for (std::size_t c = 0; c < h.encoding.size(); ++c) {
      if (ht.labels[0][c] != c) continue;
      h.encoding.decode(c, comp);
      for (SortId s = 0; s < ns; ++s) comp[s] = q.map.maps[s].at_row(comp[s]);
      values[hquot.map.maps[0].at_row(c)] = hq.encode(comp);
    }
    SortedMap m{{OpTable(uniform_profile(1, 0), {values.size()}, hq.encoding.size(), values)}};
    if (!is_isomorphism(hquot.target, hq.algebra, m)) {
      quot = false;
      qw = "congruence " + std::to_string(i);
    }
  }
  rep.check("quotient_commutes", quot, qw);

  // H(A x A) is H(A) x H(A) via regrouping components.
  {
    SortedAlgebra sq = direct_product({alg, alg});
    HomogenizedAlgebra hsq = homogenize(sq, limits);
    SortedAlgebra hh = direct_product({h.algebra, h.algebra});
    std::size_t m = h.encoding.size();
    std::vector<Elem> values(hsq.encoding.size());
    std::vector<Elem> comp(ns);
    std::vector<Elem> left(ns);
    std::vector<Elem> right(ns);
    for (std::size_t c = 0; c < values.size(); ++c) {
      hsq.encoding.decode(c, comp);
      for (SortId s = 0; s < ns; ++s) {
        left[s] = static_cast<Elem>(comp[s] / alg.carrier(s));
        right[s] = static_cast<Elem>(comp[s] % alg.carrier(s));
      }
      values[c] = static_cast<Elem>(h.encode(left) * m + h.encode(right));
    }
    SortedMap map{{OpTable(uniform_profile(1, 0), {values.size()}, hh.carrier(0), values)}};
    rep.check("product_commutes", is_isomorphism(hsq.algebra, hh, map));
  }
  return rep;
}

}  // namespace msalg
