#pragma once

// Heterogenization: the many-sorted algebra A_d recovered from a
// single-sorted algebra with a diagonal pair, and the round trips between
// many-sorted algebras and their homogenizations.
//
// Sort s of A_d has carrier e_s(A), element k being the k-th fixed point of
// e_s.  For every basic g of arity n, output sort t and assignment
// v : n -> S there is one symbol g:t:v interpreted as
// (a_i) -> e_t(g(a_0, ..., a_{n-1})) with a_i in e_{v(i)}(A).

#include <optional>
#include <string>
#include <vector>

#include "msalg/check.hpp"
#include "msalg/clone.hpp"
#include "msalg/core.hpp"
#include "msalg/diagonal.hpp"
#include "msalg/homog.hpp"
#include "msalg/term.hpp"

namespace msalg {

struct HeterogenizedAlgebra {
  SortedAlgebra algebra;
  SortedAlgebra source;
  DiagonalPair pair;
  /// carriers[s]: fixed points of e_s, ascending.
  std::vector<std::vector<Elem>> carriers;

  struct Origin {
    std::size_t symbol;
    SortId cod;
    std::vector<SortId> assignment;
  };
  std::vector<Origin> origins;
};

/// Sort names default to s0, s1, ...
HeterogenizedAlgebra heterogenize(SortedAlgebra const& alg, DiagonalPair const& pair,
                                  std::vector<std::string> sort_names = {},
                                  Limits const& limits = {});

/// The operations e_t(f(e_{v(0)}(x_0), ...)) for all lambda-ary term
/// operations f of the source, as tables on the carriers of A_d; canonical
/// order.  `profile` is a profile of A_d.
std::vector<OpTable> hetero_fragment_oracle(HeterogenizedAlgebra const& het,
                                            Profile const& profile, Limits const& limits = {});

/// Every profile (lambda, v, t) of an algebra with `num_sorts` sorts and
/// lambda <= lambda_max, in lexicographic order.
std::vector<Profile> all_profiles(std::size_t num_sorts, std::size_t lambda_max);

/// Compares the term operations of A_d with hetero_fragment_oracle at every
/// profile up to lambda_max.
VerificationReport verify_hetero_fragments(HeterogenizedAlgebra const& het, std::size_t lambda_max,
                                           Limits const& limits = {});

/// Evaluates the pair's witness terms in another algebra of the same
/// signature.  Throws PreconditionError if the pair carries no terms.
DiagonalPair transfer_pair(DiagonalPair const& pair, SortedAlgebra const& target);

VerificationReport verify_nu_roundtrip(SortedAlgebra const& alg, DiagonalPair const& pair,
                                       std::size_t lambda_max,
                                       std::vector<Morphism> const& homs = {},
                                       Limits const& limits = {});

/// Unary terms e_{s,t} from sort s to sort t with e_{s,s} the variable.
struct CrossSortFamily {
  std::vector<std::vector<Term>> terms;
};

/// Cross family from the witnesses of a purity report.  Throws
/// PreconditionError if the algebra is not pure.
CrossSortFamily cross_family(SortedAlgebra const& alg, PurityReport const& purity);

/// The pair (D, (e_s)) on H(A) with e_s(a) = (e_{s,t}(a_s))_t, carrying
/// witness terms over the signature of H(A).
DiagonalPair canonical_pair(HomogenizedAlgebra const& h, CrossSortFamily const& cross);

VerificationReport verify_mu_roundtrip(SortedAlgebra const& alg, CrossSortFamily const& cross,
                                       std::size_t lambda_max,
                                       std::vector<Morphism> const& homs = {},
                                       Limits const& limits = {});

VerificationReport verify_pair_independence(SortedAlgebra const& alg, DiagonalPair const& p1,
                                            DiagonalPair const& p2, std::size_t lambda_max = 1,
                                            Limits const& limits = {});

}  // namespace msalg
