#pragma once

// Mal'cev and Jonsson terms of finite many-sorted algebras, searched sort by
// sort and on the homogenization, and brute-force congruence lattice checks.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "msalg/core.hpp"
#include "msalg/term.hpp"

namespace msalg {

struct MalcevWitness {
  /// One ternary term operation per sort: of profile (s,s,s) -> s when
  /// searched sort by sort, of the interleaved profile with three
  /// arguments and output s when searched on the homogenization.
  std::vector<OpTable> components;
  std::vector<Term> terms;
  /// The assembled ternary operation of H(A) and its term, for the
  /// homogenized search.
  std::optional<OpTable> homogenized;
  std::optional<Term> homogenized_term;
};

/// p(x,x,y) = y and p(x,y,y) = x for a single-sorted ternary table.
bool is_malcev(OpTable const& p);

/// Least-discovered p_s in every sort, or nothing if some sort has none.
std::optional<MalcevWitness> find_malcev_per_sort(SortedAlgebra const& alg,
                                                  Limits const& limits = {});

/// Searches the ternary operations of H(A) through their components.
std::optional<MalcevWitness> find_malcev_homog(SortedAlgebra const& alg, Limits const& limits = {});

enum class JonssonMode { per_sort, homogenized };

struct JonssonChain {
  std::size_t n = 0;
  JonssonMode mode = JonssonMode::per_sort;
  /// chains[s][i] is d_{s,i}, 0 <= i <= 2n.
  std::vector<std::vector<OpTable>> chains;
  std::vector<std::vector<Term>> terms;
  /// d_0 .. d_{2n} on H(A) in homogenized mode.
  std::vector<OpTable> homogenized;
  std::vector<Term> homogenized_terms;
};

/// d_0 = x, d_{2n} = z, d_{i-1}(x,y,x) = d_i(x,y,x),
/// d_{2i}(x,x,z) = d_{2i+1}(x,x,z) and d_{2i-1}(x,z,z) = d_{2i}(x,z,z) for
/// single-sorted ternary tables.
bool is_jonsson_chain(std::span<const OpTable> d);

/// Least chain length n <= nmax, or nothing if no chain of length at most
/// nmax exists.
std::optional<JonssonChain> find_jonsson(SortedAlgebra const& alg, std::size_t nmax,
                                         JonssonMode mode, Limits const& limits = {});

struct LatticeVerdict {
  bool holds = true;
  std::size_t congruences = 0;
  std::string witness;
};

/// Whether every two congruences permute.
LatticeVerdict check_cp_bruteforce(SortedAlgebra const& alg, Limits const& limits = {});

/// Whether the congruence lattice is distributive.
LatticeVerdict check_cd_bruteforce(SortedAlgebra const& alg, Limits const& limits = {});

}  // namespace msalg
