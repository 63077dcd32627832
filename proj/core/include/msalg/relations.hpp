#pragma once

// Invariant relations of finite many-sorted algebras and of their
// homogenizations, and primitive-positive definitions over them.

#include <compare>
#include <span>
#include <string>
#include <vector>

#include "msalg/check.hpp"
#include "msalg/core.hpp"
#include "msalg/homog.hpp"

namespace msalg {

/// A set of mu-tuples over one carrier, sorted and without repeats.
struct Relation {
  std::size_t arity = 0;
  std::vector<std::vector<Elem>> tuples;

  bool contains(std::span<const Elem> tuple) const;
  auto operator<=>(Relation const&) const = default;
  bool operator==(Relation const&) const = default;
};

/// Builds a relation from tuples in any order.
Relation make_relation(std::size_t arity, std::vector<std::vector<Elem>> tuples);

/// A many-sorted mu-ary relation: one mu-ary relation per sort.
struct SortedRelation {
  std::size_t arity = 0;
  std::vector<Relation> components;

  auto operator<=>(SortedRelation const&) const = default;
  bool operator==(SortedRelation const&) const = default;
};

/// Invariant mu-ary relations of H(alg): the subuniverses of H(alg)^mu,
/// ascending.
std::vector<Relation> inv_enumerate(SortedAlgebra const& alg, std::size_t mu,
                                    Limits const& limits = {});

/// Invariant mu-ary relations of alg itself: the subuniverses of alg^mu,
/// ascending.
std::vector<SortedRelation> inv_enumerate_sorted(SortedAlgebra const& alg, std::size_t mu,
                                                 Limits const& limits = {});

/// Tuples (a_{j,s}) of the relation as flat sequences, entry s*mu + j.
std::vector<std::vector<Elem>> flatten(SortedRelation const& r);

/// The relation {((a_{j,s})_s)_j : (a_{j,s}) in r} on the homogenized carrier.
Relation reshape(HomogenizedAlgebra const& h, SortedRelation const& r);

/// True when the relation is closed under the coordinatewise action of
/// every operation of a single-sorted algebra.
bool is_invariant(SortedAlgebra const& alg, Relation const& r);

/// exists y_0 .. y_{exist-1}: R_{k_0}(z..) & R_{k_1}(z..) & ..., where
/// variables 0..free-1 are free and free..free+exist-1 are bound.
struct PPFormula {
  struct Conjunct {
    std::size_t relation = 0;
    std::vector<std::size_t> coords;
  };
  std::size_t free = 0;
  std::size_t exist = 0;
  std::vector<Conjunct> conjuncts;
};

std::string to_string(PPFormula const& phi);

Relation pp_evaluate(std::vector<Relation> const& relations, PPFormula const& phi,
                     std::size_t carrier);

/// Evaluates the formula sort by sort.
SortedRelation pp_evaluate(std::vector<SortedRelation> const& relations, PPFormula const& phi,
                           std::span<const std::size_t> carriers);

/// Every formula with free >= 1, free + exist <= max_vars and between 1 and
/// max_conjuncts conjuncts (as a multiset) over relations of the given
/// arities.
std::vector<PPFormula> pp_formulas(std::vector<std::size_t> const& arities, std::size_t max_vars,
                                   std::size_t max_conjuncts);

/// Checks that reshape is a bijection from the invariant relations of alg to
/// those of H(alg) for every mu <= mu_max, and that it commutes with
/// pp_evaluate on the formulas over a sample of unary and binary invariant
/// relations.  Throws PreconditionError if alg is not pure.
VerificationReport verify_inv_iso(SortedAlgebra const& alg, std::size_t mu_max,
                                  Limits const& limits = {});

}  // namespace msalg
