#pragma once

// Closure engine for term operations.
//
// All term operations of a fixed input profile are generated together: the
// stored tables of every output sort start with the projections and grow by
// applying one basic operation to already stored tables until nothing new
// appears.  A table is kept as a column of outputs over the rows of an input
// domain.  The full domain (every input tuple) yields the ordinary clone
// fragment; a restricted domain (a subset of values per input position)
// yields the term operations up to agreement on that subset, which is how
// retract-based constructions are handled without tabulating full products.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "msalg/core.hpp"
#include "msalg/term.hpp"

namespace msalg {

/// Input rows: every combination of the allowed values per input position,
/// enumerated in mixed-radix order over the allowed lists.
struct RowDomain {
  std::vector<SortId> sorts;
  std::vector<std::vector<Elem>> allowed;

  std::size_t rows() const;
  /// columns[i][r] is the value of input i at row r.
  std::vector<std::vector<Elem>> columns() const;
};

/// Domain of all input tuples of the given input sorts.
RowDomain full_domain(SortedAlgebra const& alg, std::vector<SortId> const& sorts);

/// Result of a closure: per output sort, the distinct columns in order of
/// discovery together with a minimal-depth witness term for each.
class ColumnClosure {
 public:
  ColumnClosure() = default;
  ColumnClosure(std::size_t num_sorts, std::size_t rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t num_sorts() const noexcept { return stores_.size(); }
  std::size_t count(SortId s) const { return stores_.at(s).terms.size(); }
  std::span<const Elem> column(SortId s, std::size_t k) const {
    return {stores_[s].cells.data() + k * rows_, rows_};
  }
  Term const& witness(SortId s, std::size_t k) const { return stores_.at(s).terms.at(k); }
  std::size_t level(SortId s, std::size_t k) const { return stores_.at(s).levels.at(k); }
  std::optional<std::size_t> find(SortId s, std::span<const Elem> column) const;

  /// Appends the column if new; returns its index and whether it was added.
  std::pair<std::size_t, bool> insert(SortId s, std::span<const Elem> column, Term const& witness,
                                      std::size_t level);

 private:
  struct Store {
    std::vector<Elem> cells;
    std::vector<Term> terms;
    std::vector<std::uint32_t> levels;
    std::unordered_multimap<std::uint64_t, std::uint32_t> index;
  };
  std::size_t rows_ = 0;
  std::vector<Store> stores_;
};

/// Saturates the columns of every output sort over `domain` under the basic
/// operations of `alg`.  Throws ResourceError when a budget is exceeded.
ColumnClosure close_columns(SortedAlgebra const& alg, RowDomain const& domain,
                            Limits const& limits = {});

/// Term operations of an algebra at a set of profiles.
class CloneFragment {
 public:
  CloneFragment() = default;
  explicit CloneFragment(SortedAlgebra alg) : alg_(std::move(alg)) {}

  SortedAlgebra const& algebra() const noexcept { return alg_; }
  bool has(Profile const& profile) const;
  std::vector<Profile> profiles() const;

  std::size_t size(Profile const& profile) const;
  OpTable table(Profile const& profile, std::size_t k) const;
  Term const& witness(Profile const& profile, std::size_t k) const;
  /// All tables of a profile in discovery order.
  std::vector<OpTable> tables(Profile const& profile) const;
  /// Index of a table in its profile, if present.
  std::optional<std::size_t> index_of(OpTable const& table) const;

  ColumnClosure const& closure(std::vector<SortId> const& inputs) const;
  void add_closure(std::vector<SortId> inputs, ColumnClosure closure);
  void mark(Profile profile);

 private:
  ColumnClosure const& checked(Profile const& profile) const;

  SortedAlgebra alg_;
  std::map<std::vector<SortId>, ColumnClosure> closures_;
  std::vector<Profile> requested_;
};

/// Complete fragment at each requested profile.  Profiles sharing input
/// sorts share one closure.
CloneFragment generate_fragment(SortedAlgebra const& alg, std::vector<Profile> const& profiles,
                                Limits const& limits = {});

/// Membership by table equality, with the stored witness.  Throws
/// PreconditionError if the table's profile was not generated.
std::optional<Term> fragment_contains(CloneFragment const& frag, OpTable const& table);

struct PurityReport {
  bool pure = false;
  /// witnesses[s1][s2]: a unary term from sort s1 to sort s2, if one exists.
  std::vector<std::vector<std::optional<Term>>> witnesses;
  std::vector<std::pair<SortId, SortId>> missing;
};

/// Searches every unary profile (s1) -> s2 for a term operation.
PurityReport is_pure(SortedAlgebra const& alg, Limits const& limits = {});

}  // namespace msalg
