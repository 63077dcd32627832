#include "msalg/clone.hpp"

#include <algorithm>

#include "msalg/error.hpp"

namespace msalg {

std::size_t RowDomain::rows() const {
  std::size_t n = 1;
  for (auto const& a : allowed) {
    n *= a.size();
  }
  return n;
}

std::vector<std::vector<Elem>> RowDomain::columns() const {
  std::size_t n = rows();
  std::vector<std::vector<Elem>> cols(allowed.size(), std::vector<Elem>(n));
  std::size_t period = n;
  for (std::size_t i = 0; i < allowed.size(); ++i) {
    std::size_t k = allowed[i].size();
    if (n == 0) {
      break;
    }
    period /= k;
    for (std::size_t r = 0; r < n; ++r) {
      cols[i][r] = allowed[i][(r / period) % k];
    }
  }
  return cols;
}

RowDomain full_domain(SortedAlgebra const& alg, std::vector<SortId> const& sorts) {
  RowDomain dom;
  dom.sorts = sorts;
  for (SortId s : sorts) {
    std::vector<Elem> all(alg.carrier(s));
    for (std::size_t a = 0; a < all.size(); ++a) {
      all[a] = static_cast<Elem>(a);
    }
    dom.allowed.push_back(std::move(all));
  }
  return dom;
}

// ---------------------------------------------------------------------------
// ColumnClosure
// ---------------------------------------------------------------------------

ColumnClosure::ColumnClosure(std::size_t num_sorts, std::size_t rows)
    : rows_(rows), stores_(num_sorts) {}

std::optional<std::size_t> ColumnClosure::find(SortId s, std::span<const Elem> column) const {
  Store const& st = stores_.at(s);
  auto [lo, hi] = st.index.equal_range(hash_values(column));
  for (auto it = lo; it != hi; ++it) {
    auto stored = this->column(s, it->second);
    if (std::equal(stored.begin(), stored.end(), column.begin(), column.end())) {
      return it->second;
    }
  }
  return std::nullopt;
}

std::pair<std::size_t, bool> ColumnClosure::insert(SortId s, std::span<const Elem> column,
                                                   Term const& witness, std::size_t level) {
  if (auto k = find(s, column)) {
    return {*k, false};
  }
  Store& st = stores_[s];
  std::size_t k = st.terms.size();
  st.cells.insert(st.cells.end(), column.begin(), column.end());
  st.terms.push_back(witness);
  st.levels.push_back(static_cast<std::uint32_t>(level));
  st.index.emplace(hash_values(column), static_cast<std::uint32_t>(k));
  return {k, true};
}

namespace {

class Saturator {
 public:
  Saturator(SortedAlgebra const& alg, RowDomain const& domain, Limits const& limits)
      : alg_(alg), limits_(limits), rows_(domain.rows()), out_(alg.num_sorts(), rows_) {
    for (SortId s : domain.sorts) {
      if (s >= alg.num_sorts()) {
        throw SortError("domain refers to sort " + std::to_string(s) + " which does not exist");
      }
    }
    if (domain.allowed.size() != domain.sorts.size()) {
      throw ShapeError("domain lists allowed values for " +
                       std::to_string(domain.allowed.size()) + " of " +
                       std::to_string(domain.sorts.size()) + " positions");
    }
    if (domain.sorts.size() > limits.max_arity) {
      throw ResourceError("arity " + std::to_string(domain.sorts.size()) +
                          " exceeds the configured bound " + std::to_string(limits.max_arity));
    }
    for (std::size_t i = 0; i < domain.sorts.size(); ++i) {
      for (Elem a : domain.allowed[i]) {
        if (a >= alg.carrier(domain.sorts[i])) {
          throw RangeError("domain value " + std::to_string(a) + " outside its carrier");
        }
      }
    }
    domain_cols_ = domain.columns();
    sorts_ = domain.sorts;
  }

  ColumnClosure run() {
    std::size_t ns = alg_.num_sorts();
    for (std::size_t i = 0; i < sorts_.size(); ++i) {
      add(sorts_[i], domain_cols_[i], Term::variable(i, sorts_[i]), 0);
    }
    std::vector<std::size_t> prev_start(ns, 0);
    for (std::size_t level = 1;; ++level) {
      std::vector<std::size_t> count(ns);
      for (SortId s = 0; s < ns; ++s) {
        count[s] = out_.count(s);
      }
      bool added = false;
      for (std::size_t g = 0; g < alg_.num_ops(); ++g) {
        OpTable const& op = alg_.op(g);
        if (op.arity() == 0) {
          if (level == 1) {
            std::vector<Elem> col(rows_, op.at_row(0));
            added |= add(op.cod(), col, Term::apply(g, {}, op.cod()), level);
          }
          continue;
        }
        added |= apply_symbol(g, count, prev_start, level);
      }
      prev_start = count;
      bool grew = false;
      for (SortId s = 0; s < ns; ++s) {
        grew |= out_.count(s) > count[s];
      }
      if (!added && !grew) {
        break;
      }
    }
    return std::move(out_);
  }

 private:
  bool add(SortId s, std::span<const Elem> col, Term const& t, std::size_t level) {
    auto before = out_.count(s);
    if (out_.find(s, col)) {
      return false;
    }
    if (before + 1 > limits_.table_budget) {
      throw ResourceError("closure exceeded the table budget of " +
                          std::to_string(limits_.table_budget) + " tables per sort");
    }
    cells_ += rows_;
    if (cells_ > limits_.cell_budget) {
      throw ResourceError("closure exceeded the cell budget of " +
                          std::to_string(limits_.cell_budget) + " stored cells");
    }
    out_.insert(s, col, t, level);
    return true;
  }

  // Visits argument tuples in lexicographic order of discovery index,
  // skipping tuples built only from tables older than the previous level.
  bool apply_symbol(std::size_t g, std::vector<std::size_t> const& count,
                    std::vector<std::size_t> const& prev_start, std::size_t level) {
    OpTable const& op = alg_.op(g);
    std::size_t n = op.arity();
    auto const& ins = op.profile().inputs;
    for (SortId s : ins) {
      if (count[s] == 0) {
        return false;
      }
    }
    auto strides = op.shape().strides();
    auto values = op.values();
    partial_.assign(n, std::vector<std::size_t>(rows_, 0));
    choice_.assign(n, 0);
    result_.resize(rows_);
    bool added = false;

    auto fill = [&](std::size_t pos, std::size_t k) {
      auto col = out_.column(ins[pos], k);
      auto& dst = partial_[pos];
      std::size_t stride = strides[pos];
      if (pos == 0) {
        for (std::size_t r = 0; r < rows_; ++r) {
          dst[r] = col[r] * stride;
        }
      } else {
        auto const& src = partial_[pos - 1];
        for (std::size_t r = 0; r < rows_; ++r) {
          dst[r] = src[r] + col[r] * stride;
        }
      }
    };

    auto recurse = [&](auto&& self, std::size_t pos, bool has_new) -> void {
      SortId s = ins[pos];
      bool last = pos + 1 == n;
      std::size_t begin = (last && !has_new) ? prev_start[s] : 0;
      for (std::size_t k = begin; k < count[s]; ++k) {
        choice_[pos] = k;
        fill(pos, k);
        bool now_new = has_new || k >= prev_start[s];
        if (!last) {
          self(self, pos + 1, now_new);
          continue;
        }
        auto const& idx = partial_[pos];
        for (std::size_t r = 0; r < rows_; ++r) {
          result_[r] = values[idx[r]];
        }
        if (out_.find(op.cod(), result_)) {
          continue;
        }
        std::vector<Term> args;
        args.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
          args.push_back(out_.witness(ins[i], choice_[i]));
        }
        added |= add(op.cod(), result_, Term::apply(g, std::move(args), op.cod()), level);
      }
    };
    recurse(recurse, 0, false);
    return added;
  }

  SortedAlgebra const& alg_;
  Limits const& limits_;
  std::size_t rows_;
  ColumnClosure out_;
  std::vector<std::vector<Elem>> domain_cols_;
  std::vector<SortId> sorts_;
  std::size_t cells_ = 0;
  std::vector<std::vector<std::size_t>> partial_;
  std::vector<std::size_t> choice_;
  std::vector<Elem> result_;
};

}  // namespace

ColumnClosure close_columns(SortedAlgebra const& alg, RowDomain const& domain,
                            Limits const& limits) {
  return Saturator(alg, domain, limits).run();
}

// ---------------------------------------------------------------------------
// CloneFragment
// ---------------------------------------------------------------------------

bool CloneFragment::has(Profile const& profile) const {
  return std::find(requested_.begin(), requested_.end(), profile) != requested_.end();
}

std::vector<Profile> CloneFragment::profiles() const { return requested_; }

ColumnClosure const& CloneFragment::checked(Profile const& profile) const {
  if (!has(profile)) {
    throw PreconditionError("profile " + to_string(profile, alg_.signature()) +
                            " was not generated");
  }
  return closures_.at(profile.inputs);
}

std::size_t CloneFragment::size(Profile const& profile) const {
  return checked(profile).count(profile.cod);
}

OpTable CloneFragment::table(Profile const& profile, std::size_t k) const {
  auto col = checked(profile).column(profile.cod, k);
  return OpTable(profile, alg_.input_sizes(profile), alg_.carrier(profile.cod),
                 std::vector<Elem>(col.begin(), col.end()));
}

Term const& CloneFragment::witness(Profile const& profile, std::size_t k) const {
  return checked(profile).witness(profile.cod, k);
}

std::vector<OpTable> CloneFragment::tables(Profile const& profile) const {
  std::vector<OpTable> out;
  std::size_t n = size(profile);
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    out.push_back(table(profile, k));
  }
  return out;
}

std::optional<std::size_t> CloneFragment::index_of(OpTable const& t) const {
  ColumnClosure const& c = checked(t.profile());
  auto sizes = alg_.input_sizes(t.profile());
  if (!std::equal(sizes.begin(), sizes.end(), t.input_sizes().begin(), t.input_sizes().end()) ||
      t.cod_size() != alg_.carrier(t.cod())) {
    throw ShapeError("table does not match the fragment's carriers");
  }
  return c.find(t.cod(), t.values());
}

ColumnClosure const& CloneFragment::closure(std::vector<SortId> const& inputs) const {
  auto it = closures_.find(inputs);
  if (it == closures_.end()) {
    throw PreconditionError("no closure was generated for the requested input sorts");
  }
  return it->second;
}

void CloneFragment::add_closure(std::vector<SortId> inputs, ColumnClosure closure) {
  closures_[std::move(inputs)] = std::move(closure);
}

void CloneFragment::mark(Profile profile) {
  if (!has(profile)) {
    requested_.push_back(std::move(profile));
  }
}

CloneFragment generate_fragment(SortedAlgebra const& alg, std::vector<Profile> const& profiles,
                                Limits const& limits) {
  CloneFragment frag(alg);
  std::map<std::vector<SortId>, bool> done;
  for (Profile const& p : profiles) {
    check_profile(p, alg.num_sorts(), limits);
    if (!done[p.inputs]) {
      frag.add_closure(p.inputs, close_columns(alg, full_domain(alg, p.inputs), limits));
      done[p.inputs] = true;
    }
    frag.mark(p);
  }
  return frag;
}

std::optional<Term> fragment_contains(CloneFragment const& frag, OpTable const& table) {
  if (auto k = frag.index_of(table)) {
    return frag.witness(table.profile(), *k);
  }
  return std::nullopt;
}

PurityReport is_pure(SortedAlgebra const& alg, Limits const& limits) {
  std::size_t ns = alg.num_sorts();
  PurityReport rep;
  rep.witnesses.assign(ns, std::vector<std::optional<Term>>(ns));
  for (SortId s1 = 0; s1 < ns; ++s1) {
    ColumnClosure c = close_columns(alg, full_domain(alg, {s1}), limits);
    for (SortId s2 = 0; s2 < ns; ++s2) {
      if (c.count(s2) > 0) {
        rep.witnesses[s1][s2] = c.witness(s2, 0);
      } else {
        rep.missing.emplace_back(s1, s2);
      }
    }
  }
  rep.pure = rep.missing.empty();
  return rep;
}

}  // namespace msalg
