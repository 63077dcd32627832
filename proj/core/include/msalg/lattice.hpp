#pragma once

// Subuniverses, congruences, quotients and direct products of finite
// many-sorted algebras, and their correspondence with the same notions on
// the homogenization.

#include <compare>
#include <utility>
#include <vector>

#include "msalg/check.hpp"
#include "msalg/core.hpp"
#include "msalg/homog.hpp"

namespace msalg {

/// A sort-indexed family of subsets closed under every operation.
struct SubUniverse {
  /// member[s][a]: whether element a of sort s belongs.
  std::vector<std::vector<bool>> member;

  bool contains(SortId s, Elem a) const { return member.at(s).at(a); }
  std::size_t size(SortId s) const;
  std::vector<Elem> elements(SortId s) const;

  auto operator<=>(SubUniverse const&) const = default;
  bool operator==(SubUniverse const&) const = default;
};

/// Per-sort equivalence relations stored as block labels: labels[s][a] is the
/// least member of the block of a.
struct Congruence {
  std::vector<std::vector<Elem>> labels;

  bool related(SortId s, Elem a, Elem b) const { return labels.at(s).at(a) == labels.at(s).at(b); }
  std::size_t blocks(SortId s) const;

  auto operator<=>(Congruence const&) const = default;
  bool operator==(Congruence const&) const = default;
};

using PairSet = std::vector<std::vector<std::pair<Elem, Elem>>>;

bool is_subuniverse(SortedAlgebra const& alg, std::vector<std::vector<bool>> const& member);

/// Least subuniverse containing gens[s] in every sort.
SubUniverse subalgebra_generate(SortedAlgebra const& alg,
                                std::vector<std::vector<Elem>> const& gens);

/// All subuniverses, ascending.
std::vector<SubUniverse> enumerate_subuniverses(SortedAlgebra const& alg,
                                                Limits const& limits = {});

/// Canonical labels of an arbitrary per-sort equivalence given by any block
/// representative function.
Congruence canonical_congruence(std::vector<std::vector<Elem>> const& representative);

bool is_congruence(SortedAlgebra const& alg, Congruence const& theta);

Congruence identity_congruence(SortedAlgebra const& alg);
Congruence full_congruence(SortedAlgebra const& alg);
Congruence meet(Congruence const& a, Congruence const& b);
/// Per-sort transitive closure of the union.
Congruence join(Congruence const& a, Congruence const& b);

/// Least congruence containing pairs[s] in every sort.
Congruence congruence_generate(SortedAlgebra const& alg, PairSet const& pairs);

/// All congruences, ascending.
std::vector<Congruence> enumerate_congruences(SortedAlgebra const& alg, Limits const& limits = {});

/// A/theta with blocks numbered by ascending least member.
SortedAlgebra quotient(SortedAlgebra const& alg, Congruence const& theta);

/// The algebra induced on a subuniverse, elements renumbered ascending.
SortedAlgebra subalgebra(SortedAlgebra const& alg, SubUniverse const& b);

/// Componentwise product of algebras with one signature.  Element
/// (a_0, ..., a_{k-1}) of sort s is encoded with factor 0 most significant.
SortedAlgebra direct_product(std::vector<SortedAlgebra> const& algs);

/// The subset prod_s B_s of the homogenized carrier.
std::vector<bool> homog_subset(HomogenizedAlgebra const& h, SubUniverse const& b);

/// The equivalence prod_s theta_s on the homogenized carrier.
Congruence homog_congruence(HomogenizedAlgebra const& h, Congruence const& theta);

/// Compares Sub and Con of A with those of H(A), checks that H commutes with
/// quotients and squares, and that B -> prod_s B_s is injective exactly when
/// A is pure.
VerificationReport verify_sub_con_transfer(SortedAlgebra const& alg, Limits const& limits = {});

}  // namespace msalg
