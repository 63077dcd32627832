#include "msalg/malcev.hpp"

#include <array>
#include <deque>
#include <map>

#include "msalg/clone.hpp"
#include "msalg/error.hpp"
#include "msalg/homog.hpp"
#include "msalg/lattice.hpp"

namespace msalg {

namespace {

// Ternary operations whose three arguments are blocks of inputs with the
// given carriers.  A minor substitutes x or y for each block; its values
// are listed over all (x, y) in row-major order.
class Blocks {
 public:
  explicit Blocks(std::vector<std::size_t> carriers) : block_(carriers) {
    std::vector<std::size_t> all;
    for (int i = 0; i < 3; ++i) all.insert(all.end(), carriers.begin(), carriers.end());
    shape_ = MixedRadix(all);
    xyx_ = rows({0, 1, 0});
    xxy_ = rows({0, 0, 1});
    xyy_ = rows({0, 1, 1});
  }

  std::vector<Elem> minor(OpTable const& f, std::vector<std::size_t> const& rows) const {
    std::vector<Elem> v(rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) v[k] = f.at_row(rows[k]);
    return v;
  }
  std::vector<Elem> xyx(OpTable const& f) const { return minor(f, xyx_); }
  std::vector<Elem> xxy(OpTable const& f) const { return minor(f, xxy_); }
  std::vector<Elem> xyy(OpTable const& f) const { return minor(f, xyy_); }

 private:
  std::vector<std::size_t> rows(std::array<int, 3> pattern) const {
    std::size_t m = block_.size();
    std::size_t w = block_.digits();
    std::vector<std::size_t> out;
    std::vector<Elem> digits(3 * w);
    std::vector<Elem> xy[2] = {std::vector<Elem>(w), std::vector<Elem>(w)};
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = 0; b < m; ++b) {
        block_.decode(a, xy[0]);
        block_.decode(b, xy[1]);
        for (std::size_t i = 0; i < 3; ++i) {
          for (std::size_t t = 0; t < w; ++t) digits[i * w + t] = xy[pattern[i]][t];
        }
        out.push_back(shape_.encode(digits));
      }
    }
    return out;
  }

  MixedRadix block_;
  MixedRadix shape_;
  std::vector<std::size_t> xyx_;
  std::vector<std::size_t> xxy_;
  std::vector<std::size_t> xyy_;
};

// The ternary term operations of one output sort, viewed as operations on
// blocks, with the two distinguished projections.
struct Candidates {
  std::vector<OpTable> tables;
  std::vector<Term> terms;
  std::size_t first = 0;
  std::size_t last = 0;
};

Candidates candidates(SortedAlgebra const& alg, Profile const& p, std::size_t first_position,
                      std::size_t last_position, Limits const& limits) {
  CloneFragment frag = generate_fragment(alg, {p}, limits);
  Candidates c;
  c.tables = frag.tables(p);
  for (std::size_t k = 0; k < c.tables.size(); ++k) c.terms.push_back(frag.witness(p, k));
  auto locate = [&](std::size_t pos) {
    OpTable pi = projection(alg.carriers(), p, pos, limits);
    for (std::size_t k = 0; k < c.tables.size(); ++k) {
      if (c.tables[k] == pi) return k;
    }
    throw Error("projection missing from a generated fragment");
  };
  c.first = locate(first_position);
  c.last = locate(last_position);
  return c;
}

std::optional<std::size_t> malcev_index(Candidates const& c, Blocks const& b) {
  auto want_xxy = b.xxy(c.tables[c.last]);
  auto want_xyy = b.xyy(c.tables[c.first]);
  for (std::size_t k = 0; k < c.tables.size(); ++k) {
    if (b.xxy(c.tables[k]) == want_xxy && b.xyy(c.tables[k]) == want_xyy) return k;
  }
  return std::nullopt;
}

// Breadth-first search over (operation, parity): even steps keep f(x,x,y),
// odd steps keep f(x,y,y), and every operation keeps f(x,y,x) = x.
std::optional<std::vector<std::size_t>> jonsson_path(Candidates const& c, Blocks const& b,
                                                     std::size_t nmax) {
  std::size_t m = c.tables.size();
  auto anchor = b.xyx(c.tables[c.first]);
  std::vector<bool> usable(m);
  std::map<std::vector<Elem>, std::vector<std::size_t>> by_xxy;
  std::map<std::vector<Elem>, std::vector<std::size_t>> by_xyy;
  std::vector<std::vector<Elem>> key_xxy(m);
  std::vector<std::vector<Elem>> key_xyy(m);
  for (std::size_t k = 0; k < m; ++k) {
    usable[k] = b.xyx(c.tables[k]) == anchor;
    if (!usable[k]) continue;
    key_xxy[k] = b.xxy(c.tables[k]);
    key_xyy[k] = b.xyy(c.tables[k]);
    by_xxy[key_xxy[k]].push_back(k);
    by_xyy[key_xyy[k]].push_back(k);
  }
  constexpr std::size_t none = static_cast<std::size_t>(-1);
  // state = 2 * index + parity (parity 1 after an odd number of steps)
  std::vector<std::size_t> parent(2 * m, none);
  std::vector<std::size_t> depth(2 * m, none);
  std::size_t start = 2 * c.first;
  depth[start] = 0;
  std::deque<std::size_t> queue{start};
  std::size_t goal = 2 * c.last;
  while (!queue.empty() && depth[goal] == none) {
    std::size_t st = queue.front();
    queue.pop_front();
    if (depth[st] >= 2 * nmax) continue;
    std::size_t k = st / 2;
    bool odd = st % 2;
    auto const& next = odd ? by_xyy[key_xyy[k]] : by_xxy[key_xxy[k]];
    for (std::size_t j : next) {
      std::size_t to = 2 * j + (odd ? 0 : 1);
      if (depth[to] != none) continue;
      depth[to] = depth[st] + 1;
      parent[to] = st;
      queue.push_back(to);
    }
  }
  if (depth[goal] == none) return std::nullopt;
  std::vector<std::size_t> path;
  for (std::size_t st = goal; st != none; st = parent[st]) path.insert(path.begin(), st / 2);
  return path;
}

std::vector<std::size_t> block_carriers(SortedAlgebra const& alg, SortId s, bool homogenized) {
  if (homogenized) return {alg.carriers().begin(), alg.carriers().end()};
  return {alg.carrier(s)};
}

Profile ternary_profile(SortedAlgebra const& alg, SortId s, bool homogenized) {
  return homogenized ? interleaved_profile(alg.num_sorts(), 3, s) : Profile{{s, s, s}, s};
}

}  // namespace

bool is_malcev(OpTable const& p) {
  if (p.arity() != 3) return false;
  Blocks b({p.cod_size()});
  std::size_t n = p.cod_size();
  auto xxy = b.xxy(p);
  auto xyy = b.xyy(p);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      if (xxy[x * n + y] != y || xyy[x * n + y] != x) return false;
    }
  }
  return true;
}

std::optional<MalcevWitness> find_malcev_per_sort(SortedAlgebra const& alg, Limits const& limits) {
  MalcevWitness w;
  for (SortId s = 0; s < alg.num_sorts(); ++s) {
    Candidates c = candidates(alg, ternary_profile(alg, s, false), 0, 2, limits);
    auto k = malcev_index(c, Blocks(block_carriers(alg, s, false)));
    if (!k) return std::nullopt;
    w.components.push_back(c.tables[*k]);
    w.terms.push_back(c.terms[*k]);
  }
  return w;
}

std::optional<MalcevWitness> find_malcev_homog(SortedAlgebra const& alg, Limits const& limits) {
  std::size_t ns = alg.num_sorts();
  HomogenizedAlgebra h = homogenize(alg, limits);
  MalcevWitness w;
  for (SortId s = 0; s < ns; ++s) {
    Candidates c = candidates(alg, ternary_profile(alg, s, true), s, 2 * ns + s, limits);
    auto k = malcev_index(c, Blocks(block_carriers(alg, s, true)));
    if (!k) return std::nullopt;
    w.components.push_back(c.tables[*k]);
    w.terms.push_back(c.terms[*k]);
  }
  w.homogenized = homog_op(alg, w.components);
  w.homogenized_term = homog_term(h, w.terms, 3);
  if (!is_malcev(*w.homogenized)) {
    throw Error("assembled ternary operation fails the Mal'cev identities");
  }
  return w;
}

bool is_jonsson_chain(std::span<const OpTable> d) {
  if (d.empty() || d.size() % 2 == 0) return false;
  std::size_t n = d.front().cod_size();
  Blocks b({n});
  for (auto const& f : d) {
    if (f.arity() != 3 || f.cod_size() != n) return false;
  }
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      for (std::size_t z = 0; z < n; ++z) {
        std::size_t r = (x * n + y) * n + z;
        if (d.front().at_row(r) != x || d.back().at_row(r) != z) return false;
      }
    }
  }
  for (std::size_t i = 1; i < d.size(); ++i) {
    if (b.xyx(d[i - 1]) != b.xyx(d[i])) return false;
    bool even_step = (i - 1) % 2 == 0;
    if (even_step ? b.xxy(d[i - 1]) != b.xxy(d[i]) : b.xyy(d[i - 1]) != b.xyy(d[i])) {
      return false;
    }
  }
  return true;
}

std::optional<JonssonChain> find_jonsson(SortedAlgebra const& alg, std::size_t nmax,
                                         JonssonMode mode, Limits const& limits) {
  std::size_t ns = alg.num_sorts();
  bool homog = mode == JonssonMode::homogenized;
  JonssonChain chain;
  chain.mode = mode;
  std::vector<Candidates> cands;
  std::vector<std::vector<std::size_t>> paths;
  for (SortId s = 0; s < ns; ++s) {
    std::size_t first = homog ? s : 0;
    std::size_t last = homog ? 2 * ns + s : 2;
    cands.push_back(candidates(alg, ternary_profile(alg, s, homog), first, last, limits));
    auto path = jonsson_path(cands.back(), Blocks(block_carriers(alg, s, homog)), nmax);
    if (!path) return std::nullopt;
    chain.n = std::max(chain.n, (path->size() - 1) / 2);
    paths.push_back(std::move(*path));
  }
  for (SortId s = 0; s < ns; ++s) {
    auto& path = paths[s];
    path.resize(2 * chain.n + 1, cands[s].last);
    std::vector<OpTable> tables;
    std::vector<Term> terms;
    for (auto k : path) {
      tables.push_back(cands[s].tables[k]);
      terms.push_back(cands[s].terms[k]);
    }
    chain.chains.push_back(std::move(tables));
    chain.terms.push_back(std::move(terms));
  }
  if (homog) {
    HomogenizedAlgebra h = homogenize(alg, limits);
    for (std::size_t i = 0; i <= 2 * chain.n; ++i) {
      std::vector<OpTable> comps;
      std::vector<Term> terms;
      for (SortId s = 0; s < ns; ++s) {
        comps.push_back(chain.chains[s][i]);
        terms.push_back(chain.terms[s][i]);
      }
      chain.homogenized.push_back(homog_op(alg, comps));
      chain.homogenized_terms.push_back(homog_term(h, terms, 3));
    }
    if (!is_jonsson_chain(chain.homogenized)) {
      throw Error("assembled chain fails the Jonsson identities");
    }
  }
  return chain;
}

namespace {

std::vector<bool> relational_product(Congruence const& a, Congruence const& b, SortId s) {
  std::size_t n = a.labels[s].size();
  std::vector<bool> out(n * n, false);
  for (Elem x = 0; x < n; ++x) {
    for (Elem y = 0; y < n; ++y) {
      if (!a.related(s, x, y)) continue;
      for (Elem z = 0; z < n; ++z) {
        if (b.related(s, y, z)) out[x * n + z] = true;
      }
    }
  }
  return out;
}

std::string labels_text(Congruence const& c) {
  std::string out;
  for (std::size_t s = 0; s < c.labels.size(); ++s) {
    out += (s ? " " : "") + to_string(c.labels[s]);
  }
  return out;
}

}  // namespace

LatticeVerdict check_cp_bruteforce(SortedAlgebra const& alg, Limits const& limits) {
  auto cons = enumerate_congruences(alg, limits);
  LatticeVerdict v;
  v.congruences = cons.size();
  for (std::size_t i = 0; i < cons.size(); ++i) {
    for (std::size_t j = i + 1; j < cons.size(); ++j) {
      for (SortId s = 0; s < alg.num_sorts(); ++s) {
        auto ab = relational_product(cons[i], cons[j], s);
        auto ba = relational_product(cons[j], cons[i], s);
        if (ab != ba) {
          std::size_t n = alg.carrier(s);
          std::size_t k = 0;
          while (ab[k] == ba[k]) ++k;
          v.holds = false;
          v.witness = "congruences " + labels_text(cons[i]) + " and " + labels_text(cons[j]) +
                      " do not permute in sort " + alg.signature().sort_name(s) + " at (" +
                      std::to_string(k / n) + ", " + std::to_string(k % n) + ")";
          return v;
        }
      }
    }
  }
  return v;
}

LatticeVerdict check_cd_bruteforce(SortedAlgebra const& alg, Limits const& limits) {
  auto cons = enumerate_congruences(alg, limits);
  LatticeVerdict v;
  v.congruences = cons.size();
  for (auto const& a : cons) {
    for (auto const& b : cons) {
      for (auto const& c : cons) {
        if (meet(a, join(b, c)) != join(meet(a, b), meet(a, c))) {
          v.holds = false;
          v.witness = "distributivity fails for " + labels_text(a) + ", " + labels_text(b) +
                      ", " + labels_text(c);
          return v;
        }
      }
    }
  }
  return v;
}

}  // namespace msalg
