#pragma once

// Homogenization: the single-sorted algebra on the product of all carriers.
//
// An element of H(A) is a tuple (a_s) with one entry per sort, encoded as a
// mixed-radix integer with sort 0 most significant.  A lambda-ary operation
// of H(A) is an S-tuple (f_s) of many-sorted operations, f_s taking the
// lambda*S inputs (i,t) -> a_{i,t} in interleaved order (position i*S + t
// has sort t) and returning sort s.  H(A) is presented by the S-ary
// operation D, which picks component s from argument s, and one lift per
// basic symbol.

#include <optional>
#include <span>
#include <vector>

#include "msalg/check.hpp"
#include "msalg/clone.hpp"
#include "msalg/core.hpp"
#include "msalg/term.hpp"

namespace msalg {

struct HomogenizedAlgebra {
  SortedAlgebra algebra;
  SortedAlgebra source;
  /// Radices are the source carriers in sort declaration order.
  MixedRadix encoding;
  /// Per source symbol: the lift received one unused argument because the
  /// symbol is nullary and some other sort has no closed term.
  std::vector<bool> dummy_argument;

  std::size_t num_sorts() const noexcept { return source.num_sorts(); }
  Elem encode(std::span<const Elem> components) const {
    return static_cast<Elem>(encoding.encode(components));
  }
  std::vector<Elem> decode(Elem code) const { return encoding.decode(code); }
  /// Symbol index of D in `algebra`; the lift of source symbol f is f + 1.
  static constexpr std::size_t diagonal_symbol = 0;
};

/// Profile (lambda x S, p2, s): lambda*S inputs, position i*S + t of sort t.
Profile interleaved_profile(std::size_t num_sorts, std::size_t lambda, SortId s);

HomogenizedAlgebra homogenize(SortedAlgebra const& alg, Limits const& limits = {});

/// The lambda-ary operation of H(alg) given by one component per sort.
OpTable homog_op(SortedAlgebra const& alg, std::span<const OpTable> components);

/// All tuples of components drawn from the fragment at the interleaved
/// profiles, assembled with homog_op; canonical order.
std::vector<OpTable> homog_fragment_oracle(CloneFragment const& frag, std::size_t lambda,
                                           Limits const& limits = {});

/// Compares the lambda-ary term operations of H(alg), generated directly,
/// with homog_fragment_oracle for every lambda <= lambda_max.
VerificationReport verify_homogenization(SortedAlgebra const& alg, std::size_t lambda_max,
                                         Limits const& limits = {});

/// Term of H(A) whose s-component is the many-sorted term `t`.  Variable
/// (k, sort) of `t` reads component `sort` of H-argument `argument_of(k)`.
Term lift_term(HomogenizedAlgebra const& h, Term const& t,
               std::span<const std::size_t> argument_of);

/// Term of H(A) whose component s is `components[s]`, each a term over the
/// interleaved profile with lambda arguments.
Term homog_term(HomogenizedAlgebra const& h, std::span<const Term> components, std::size_t lambda);

/// Product map (a_s) -> (maps_s(a_s)) between homogenizations.
OpTable product_map(std::span<const std::size_t> src_carriers,
                    std::span<const std::size_t> dst_carriers, SortedMap const& maps);

struct HomogMorphismReport {
  OpTable map;
  bool sorted_homomorphism = false;
  bool homogenized_homomorphism = false;
};

/// Builds the product map and checks both homomorphism properties.
HomogMorphismReport homog_morphism(SortedAlgebra const& src, SortedAlgebra const& dst,
                                   SortedMap const& maps, Limits const& limits = {});

}  // namespace msalg
