#pragma once

// Corpus access, small hand-built algebras and brute-force oracles that
// share no code with the library's closure, lattice and search engines.

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "msalg/cli/format.hpp"
#include "msalg/core.hpp"

namespace msalg::test {

using Table = std::vector<Elem>;

inline SortedAlgebra corpus(std::string const& name) {
  return cli::load_algebra(std::string(MSALG_CORPUS_DIR) + "/" + name + ".alg");
}

inline std::vector<std::string> corpus_names() {
  return {"A_lattice", "A_malcev", "A_semilat", "A_tiny", "G_z3", "NonPure"};
}

/// Single-sorted algebra on n elements from (name, arity, values) triples.
struct OpSpec {
  std::string name;
  std::size_t arity;
  std::vector<Elem> values;
};

inline SortedAlgebra single_sorted(std::size_t n, std::vector<OpSpec> const& ops) {
  SortedSignature sig;
  sig.add_sort("a");
  std::vector<OpTable> tables;
  for (auto const& o : ops) {
    Profile p = uniform_profile(o.arity, 0);
    sig.add_symbol(o.name, p);
    tables.emplace_back(p, std::vector<std::size_t>(o.arity, n), n, o.values);
  }
  return SortedAlgebra(sig, {n}, std::move(tables));
}

/// Tuples of a mixed-radix product, last coordinate fastest.
inline void for_each_tuple(std::vector<std::size_t> const& radices,
                           std::function<void(std::vector<Elem> const&)> const& f) {
  for (auto r : radices) {
    if (r == 0) return;
  }
  std::vector<Elem> t(radices.size(), 0);
  while (true) {
    f(t);
    std::size_t i = t.size();
    while (i-- > 0) {
      if (++t[i] < radices[i]) break;
      t[i] = 0;
    }
    if (i == static_cast<std::size_t>(-1)) return;
  }
}

inline std::vector<std::size_t> input_sizes(SortedAlgebra const& alg, Profile const& p) {
  std::vector<std::size_t> v;
  for (SortId s : p.inputs) v.push_back(alg.carrier(s));
  return v;
}

/// Naive fixed point: per output sort, every table reachable from the
/// projections by applying basic operations to already reached tables.
inline std::vector<std::set<Table>> clone_oracle(SortedAlgebra const& alg, Profile const& p) {
  std::vector<std::vector<Elem>> rows;
  for_each_tuple(input_sizes(alg, p), [&](auto const& t) { rows.push_back(t); });
  std::vector<std::set<Table>> reached(alg.num_sorts());
  for (std::size_t i = 0; i < p.arity(); ++i) {
    Table t;
    for (auto const& r : rows) t.push_back(r[i]);
    reached[p.inputs[i]].insert(t);
  }
  bool grew = true;
  while (grew) {
    grew = false;
    for (auto const& op : alg.ops()) {
      std::vector<std::vector<Table>> pools;
      for (SortId s : op.profile().inputs) {
        pools.emplace_back(reached[s].begin(), reached[s].end());
      }
      std::vector<std::size_t> sizes;
      for (auto const& pool : pools) sizes.push_back(pool.size());
      std::vector<Table> fresh;
      for_each_tuple(sizes, [&](auto const& pick) {
        Table t(rows.size());
        std::vector<Elem> args(pick.size());
        for (std::size_t r = 0; r < rows.size(); ++r) {
          for (std::size_t i = 0; i < pick.size(); ++i) args[i] = pools[i][pick[i]][r];
          t[r] = op.at(args);
        }
        if (!reached[op.cod()].count(t)) fresh.push_back(std::move(t));
      });
      for (auto& t : fresh) grew |= reached[op.cod()].insert(std::move(t)).second;
    }
  }
  return reached;
}

inline std::set<Table> values_of(std::vector<OpTable> const& tables) {
  std::set<Table> out;
  for (auto const& t : tables) out.emplace(t.values().begin(), t.values().end());
  return out;
}

/// Every per-sort family of subsets that is closed, as membership masks.
inline std::vector<std::vector<std::vector<bool>>> subuniverse_oracle(SortedAlgebra const& alg) {
  std::size_t total = 0;
  for (auto c : alg.carriers()) total += c;
  std::vector<std::vector<std::vector<bool>>> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << total); ++mask) {
    std::vector<std::vector<bool>> m;
    std::size_t bit = 0;
    for (auto c : alg.carriers()) {
      std::vector<bool> row;
      for (std::size_t a = 0; a < c; ++a) row.push_back((mask >> bit++) & 1);
      m.push_back(row);
    }
    bool closed = true;
    for (auto const& op : alg.ops()) {
      for_each_tuple(input_sizes(alg, op.profile()), [&](auto const& args) {
        if (!closed) return;
        for (std::size_t i = 0; i < args.size(); ++i) {
          if (!m[op.profile().inputs[i]][args[i]]) return;
        }
        if (!m[op.cod()][op.at(args)]) closed = false;
      });
    }
    if (closed) out.push_back(m);
  }
  return out;
}

/// Naive closure of generators under all operations.
inline std::vector<std::vector<bool>> generate_oracle(SortedAlgebra const& alg,
                                                      std::vector<std::vector<Elem>> const& gens) {
  std::vector<std::vector<bool>> m;
  for (auto c : alg.carriers()) m.emplace_back(c, false);
  for (SortId s = 0; s < gens.size(); ++s) {
    for (Elem a : gens[s]) m[s][a] = true;
  }
  bool grew = true;
  while (grew) {
    grew = false;
    for (auto const& op : alg.ops()) {
      for_each_tuple(input_sizes(alg, op.profile()), [&](auto const& args) {
        for (std::size_t i = 0; i < args.size(); ++i) {
          if (!m[op.profile().inputs[i]][args[i]]) return;
        }
        Elem v = op.at(args);
        if (!m[op.cod()][v]) {
          m[op.cod()][v] = true;
          grew = true;
        }
      });
    }
  }
  return m;
}

/// All set partitions of {0..n-1} as least-member labels.
inline std::vector<std::vector<Elem>> partitions(std::size_t n) {
  std::vector<std::vector<Elem>> out;
  std::vector<Elem> labels(n);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == n) {
      out.push_back(labels);
      return;
    }
    std::set<Elem> used(labels.begin(), labels.begin() + static_cast<long>(i));
    for (Elem l : used) {
      labels[i] = l;
      rec(i + 1);
    }
    labels[i] = static_cast<Elem>(i);
    rec(i + 1);
  };
  rec(0);
  return out;
}

inline bool compatible(SortedAlgebra const& alg, std::vector<std::vector<Elem>> const& labels) {
  for (auto const& op : alg.ops()) {
    auto sizes = input_sizes(alg, op.profile());
    bool ok = true;
    for_each_tuple(sizes, [&](auto const& a) {
      if (!ok) return;
      std::vector<Elem> b(a);
      for (std::size_t i = 0; i < a.size() && ok; ++i) {
        SortId s = op.profile().inputs[i];
        for (Elem x = 0; x < alg.carrier(s); ++x) {
          if (labels[s][x] != labels[s][a[i]]) continue;
          b[i] = x;
          if (labels[op.cod()][op.at(a)] != labels[op.cod()][op.at(b)]) ok = false;
        }
        b[i] = a[i];
      }
    });
    if (!ok) return false;
  }
  return true;
}

/// Every congruence by testing all products of per-sort partitions.
inline std::vector<std::vector<std::vector<Elem>>> congruence_oracle(SortedAlgebra const& alg) {
  std::vector<std::vector<std::vector<Elem>>> per_sort;
  for (auto c : alg.carriers()) per_sort.push_back(partitions(c));
  std::vector<std::size_t> sizes;
  for (auto const& p : per_sort) sizes.push_back(p.size());
  std::vector<std::vector<std::vector<Elem>>> out;
  for_each_tuple(sizes, [&](auto const& pick) {
    std::vector<std::vector<Elem>> labels;
    for (std::size_t s = 0; s < pick.size(); ++s) labels.push_back(per_sort[s][pick[s]]);
    if (compatible(alg, labels)) out.push_back(labels);
  });
  std::sort(out.begin(), out.end());
  return out;
}

/// Least congruence containing the pairs: repeatedly merge the images of
/// related arguments until the partition stops changing.
inline std::vector<std::vector<Elem>> principal_oracle(
    SortedAlgebra const& alg, std::vector<std::vector<std::pair<Elem, Elem>>> const& pairs) {
  std::vector<std::vector<Elem>> labels;
  for (auto c : alg.carriers()) {
    std::vector<Elem> l(c);
    std::iota(l.begin(), l.end(), Elem{0});
    labels.push_back(l);
  }
  auto merge = [&](SortId s, Elem a, Elem b) {
    Elem la = labels[s][a];
    Elem lb = labels[s][b];
    if (la == lb) return false;
    Elem keep = std::min(la, lb);
    Elem drop = std::max(la, lb);
    for (auto& x : labels[s]) {
      if (x == drop) x = keep;
    }
    return true;
  };
  for (SortId s = 0; s < pairs.size(); ++s) {
    for (auto [a, b] : pairs[s]) merge(s, a, b);
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto const& op : alg.ops()) {
      for_each_tuple(input_sizes(alg, op.profile()), [&](auto const& a) {
        std::vector<Elem> b(a);
        for (std::size_t i = 0; i < a.size(); ++i) {
          SortId s = op.profile().inputs[i];
          for (Elem x = 0; x < alg.carrier(s); ++x) {
            if (labels[s][x] != labels[s][a[i]]) continue;
            b[i] = x;
            changed |= merge(op.cod(), op.at(a), op.at(b));
          }
          b[i] = a[i];
        }
      });
    }
  }
  return labels;
}

/// Relational product theta o psi on one carrier, as an n x n matrix.
inline std::vector<std::vector<bool>> rel_product(std::vector<Elem> const& a,
                                                  std::vector<Elem> const& b) {
  std::size_t n = a.size();
  std::vector<std::vector<bool>> out(n, std::vector<bool>(n, false));
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      for (std::size_t z = 0; z < n; ++z) {
        if (a[x] == a[y] && b[y] == b[z]) out[x][z] = true;
      }
    }
  }
  return out;
}

}  // namespace msalg::test
