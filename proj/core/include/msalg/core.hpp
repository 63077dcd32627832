#pragma once

// Finite many-sorted signatures, algebras and operation tables.
//
// Carrier elements of a sort with n elements are the integers 0..n-1.  An
// operation is stored as an explicit table: the output for every input tuple,
// in row-major order (the last argument varies fastest).  Two tables are equal
// exactly when their profiles, carrier shapes and output sequences coincide,
// which is how term operations are identified throughout the library.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace msalg {

using Elem = std::uint32_t;
using SortId = std::size_t;

/// Budgets shared by every exhaustive computation.
struct Limits {
  /// Largest arity of any table built from a profile.
  std::size_t max_arity = 6;
  /// Largest number of distinct tables per sort in one closure.
  std::size_t table_budget = 2'000'000;
  /// Largest number of stored table cells (rows times tables) in one closure.
  std::size_t cell_budget = std::size_t{1} << 27;
  /// Largest number of candidates an enumeration may visit.
  std::size_t enumeration_budget = 50'000'000;
  /// Largest number of composition triples checked exhaustively; above this
  /// a deterministic stride sample of the triples is checked instead.
  std::size_t composition_budget = 20'000'000;
  /// Largest number of symbols in a derived signature.
  std::size_t symbol_budget = 4096;
};

/// Input sorts of an operation together with its output sort.
struct Profile {
  std::vector<SortId> inputs;
  SortId cod = 0;

  std::size_t arity() const noexcept { return inputs.size(); }

  auto operator<=>(Profile const&) const = default;
  bool operator==(Profile const&) const = default;
};

/// Profile with `arity` inputs all of sort `sort`, output `sort`.
Profile uniform_profile(std::size_t arity, SortId sort);

/// Mixed-radix encoding of tuples; position 0 is the most significant digit.
class MixedRadix {
 public:
  MixedRadix() = default;
  explicit MixedRadix(std::vector<std::size_t> radices);

  std::size_t digits() const noexcept { return radices_.size(); }
  /// Number of encodable tuples (1 for zero digits, 0 if some radix is 0).
  std::size_t size() const noexcept { return size_; }
  std::span<const std::size_t> radices() const noexcept { return radices_; }
  std::span<const std::size_t> strides() const noexcept { return strides_; }

  std::size_t encode(std::span<const Elem> digits) const;
  void decode(std::size_t code, std::span<Elem> out) const;
  std::vector<Elem> decode(std::size_t code) const;

  bool operator==(MixedRadix const& other) const { return radices_ == other.radices_; }

 private:
  std::vector<std::size_t> radices_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 1;
};

/// One total finitary operation given by its full table.
class OpTable {
 public:
  OpTable() = default;
  /// `input_sizes[i]` is the carrier size of argument i and `cod_size` the
  /// size of the output carrier.  Throws ShapeError / RangeError when
  /// `values` is not a total table over those carriers.
  OpTable(Profile profile, std::vector<std::size_t> input_sizes, std::size_t cod_size,
          std::vector<Elem> values);

  Profile const& profile() const noexcept { return profile_; }
  std::size_t arity() const noexcept { return profile_.arity(); }
  SortId cod() const noexcept { return profile_.cod; }
  std::span<const std::size_t> input_sizes() const noexcept { return shape_.radices(); }
  std::size_t cod_size() const noexcept { return cod_size_; }
  MixedRadix const& shape() const noexcept { return shape_; }
  std::size_t rows() const noexcept { return values_.size(); }
  std::span<const Elem> values() const noexcept { return values_; }

  Elem at(std::span<const Elem> args) const;
  Elem at_row(std::size_t row) const { return values_[row]; }
  std::size_t row_of(std::span<const Elem> args) const { return shape_.encode(args); }

  /// Hash of the output sequence (fixed seed; identical across runs).
  std::uint64_t hash() const noexcept;

  bool operator==(OpTable const& other) const {
    return profile_ == other.profile_ && shape_ == other.shape_ &&
           cod_size_ == other.cod_size_ && values_ == other.values_;
  }
  /// Lexicographic order on (profile, values); used for canonical listings.
  bool operator<(OpTable const& other) const;

 private:
  Profile profile_;
  MixedRadix shape_;
  std::size_t cod_size_ = 0;
  std::vector<Elem> values_;
};

std::uint64_t hash_values(std::span<const Elem> values) noexcept;

/// Sorts and deduplicates a list of tables.
std::vector<OpTable> canonical_set(std::vector<OpTable> tables);

struct Symbol {
  std::string name;
  Profile profile;
};

/// Sorts and operation symbols with their profiles.
class SortedSignature {
 public:
  SortId add_sort(std::string name);
  std::size_t add_symbol(std::string name, Profile profile);

  std::size_t num_sorts() const noexcept { return sorts_.size(); }
  std::size_t num_symbols() const noexcept { return symbols_.size(); }
  std::string const& sort_name(SortId s) const { return sorts_.at(s); }
  Symbol const& symbol(std::size_t i) const { return symbols_.at(i); }
  std::span<const Symbol> symbols() const noexcept { return symbols_; }
  std::span<const std::string> sort_names() const noexcept { return sorts_; }

  std::optional<SortId> find_sort(std::string const& name) const;
  std::optional<std::size_t> find_symbol(std::string const& name) const;

  bool operator==(SortedSignature const&) const;

 private:
  std::vector<std::string> sorts_;
  std::vector<Symbol> symbols_;
};

bool operator==(Symbol const& a, Symbol const& b);

/// A finite algebra over a many-sorted signature.  Immutable after
/// construction.
class SortedAlgebra {
 public:
  SortedAlgebra() = default;
  /// Validates that every symbol is interpreted by a table of matching
  /// profile and carrier shape.
  SortedAlgebra(SortedSignature signature, std::vector<std::size_t> carriers,
                std::vector<OpTable> ops);

  SortedSignature const& signature() const noexcept { return signature_; }
  std::size_t num_sorts() const noexcept { return carriers_.size(); }
  std::span<const std::size_t> carriers() const noexcept { return carriers_; }
  std::size_t carrier(SortId s) const { return carriers_.at(s); }
  std::size_t num_ops() const noexcept { return ops_.size(); }
  OpTable const& op(std::size_t i) const { return ops_.at(i); }
  std::span<const OpTable> ops() const noexcept { return ops_; }
  bool single_sorted() const noexcept { return carriers_.size() == 1; }
  /// Size of the product of all carriers.
  std::size_t product_size() const noexcept;
  /// Carrier sizes of a profile's inputs.
  std::vector<std::size_t> input_sizes(Profile const& profile) const;

 private:
  SortedSignature signature_;
  std::vector<std::size_t> carriers_;
  std::vector<OpTable> ops_;
};

/// Throws SortError if the profile refers to an undeclared sort and
/// ResourceError if it exceeds the arity bound.
void check_profile(Profile const& profile, std::size_t num_sorts, Limits const& limits = {});

/// Projection onto argument `i`.  Requires `profile.cod == profile.inputs[i]`.
OpTable projection(std::span<const std::size_t> carriers, Profile const& profile, std::size_t i,
                   Limits const& limits = {});

/// Operation with constant output `value` (the input product may be empty).
OpTable constant_table(std::span<const std::size_t> carriers, Profile const& profile, Elem value);

/// Clone composition f(g_0, ..., g_{n-1}).  All `gs` must share one input
/// profile and shape, and `gs[i]` must output the sort of f's argument i.
OpTable compose(OpTable const& f, std::span<const OpTable> gs);

/// Compose with an explicit shared input profile; needed when `gs` is empty.
OpTable compose(OpTable const& f, std::span<const OpTable> gs, Profile const& input_profile,
                std::span<const std::size_t> input_sizes);

/// A sort-indexed family of maps between two algebras, each map stored as a
/// unary table of profile (s) -> s.
struct SortedMap {
  std::vector<OpTable> maps;
};

/// Identity map on an algebra's carriers.
SortedMap identity_map(SortedAlgebra const& alg);

/// True when `h` is a homomorphism from `src` to `dst` (same signature).
bool is_homomorphism(SortedAlgebra const& src, SortedAlgebra const& dst, SortedMap const& h);

/// Pointwise composition `second` after `first`.
SortedMap compose_maps(SortedMap const& first, SortedMap const& second);

/// A homomorphism out of some algebra, with its target.
struct Morphism {
  SortedAlgebra target;
  SortedMap map;
};

/// The quotient map onto A/theta, where `labels[s][a]` is the least member
/// of the block of a.  Blocks are numbered by ascending least member.
/// Throws PreconditionError if the partition is not compatible.
Morphism quotient_map(SortedAlgebra const& alg, std::vector<std::vector<Elem>> const& labels);

std::string to_string(Profile const& profile, SortedSignature const& sig);
std::string to_string(std::span<const Elem> tuple);

}  // namespace msalg
