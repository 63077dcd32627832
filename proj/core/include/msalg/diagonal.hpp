#pragma once

// Diagonal pairs, idempotent retracts and matrix products of single-sorted
// algebras.
//
// A diagonal pair on an algebra A is an S-ary term operation d with unary
// term operations e_s such that
//   (1) e_s(d(x_0, ..., x_{S-1})) = e_s(x_s)
//   (2) d(e_0(x_0), ..., e_{S-1}(x_{S-1})) = d(x_0, ..., x_{S-1})
//   (3) d(x, ..., x) = x.
// The stricter reading of (1), e_s(d(x)) = x_s, only holds on carriers with
// at most one element; the verifier reports it separately.  Such a pair
// splits A into the product of the retracts e_s(A).

#include <optional>
#include <vector>

#include "msalg/check.hpp"
#include "msalg/clone.hpp"
#include "msalg/core.hpp"
#include "msalg/term.hpp"

namespace msalg {

struct DiagonalPair {
  OpTable d;
  std::vector<OpTable> e;
  /// Witness terms over the algebra's signature, when known.
  std::optional<Term> d_term;
  std::vector<Term> e_terms;

  std::size_t num_sorts() const noexcept { return e.size(); }
};

struct EquationCheck {
  bool holds = true;
  /// First failing input tuple.
  std::vector<Elem> counterexample;
};

struct DiagonalReport {
  std::vector<EquationCheck> idempotent;
  std::vector<EquationCheck> eq1;
  std::vector<EquationCheck> eq1_strict;
  EquationCheck eq2;
  /// Equation (3) with the distinguished argument taken at each index.
  std::vector<EquationCheck> eq3;
  bool valid = false;
  bool strict_eq1 = false;
  bool eq3_index_independent = true;
};

DiagonalReport verify_diagonal_pair(SortedAlgebra const& alg, DiagonalPair const& pair);

/// d(d(x_{0,t})_t, ..., d(x_{S-1,t})_t) = d(x_{0,0}, ..., x_{S-1,S-1}) for
/// every S x S grid of elements.
bool satisfies_diagonal_identity(OpTable const& d);

/// Every pair (d, e) of term operations passing verify_diagonal_pair,
/// ordered lexicographically by (d, e_0, ..., e_{S-1}).
std::vector<DiagonalPair> find_diagonal_pairs(SortedAlgebra const& alg, std::size_t num_sorts,
                                              Limits const& limits = {});

/// Fixed points of a unary table, ascending.
std::vector<Elem> fixed_points(OpTable const& e);

/// Index of each element within `points` (or `points.size()` if absent).
std::vector<Elem> rank_of(std::vector<Elem> const& points, std::size_t carrier);

/// Algebra induced on the image of an idempotent term e.
struct Neighborhood {
  OpTable e;
  /// Elements of e(A) ascending; element k of `algebra` is carrier[k].
  std::vector<Elem> carrier;
  /// Operations e(g(x_0, ..., x_{n-1})) for each basic g, on e(A).
  SortedAlgebra algebra;
  /// fragment[lambda]: the lambda-ary operations e(f(x)) restricted to e(A),
  /// f ranging over all lambda-ary term operations; canonical order.
  std::vector<std::vector<OpTable>> fragment;
};

Neighborhood neighborhood(SortedAlgebra const& alg, OpTable const& e, std::size_t lambda_max = 1,
                          Limits const& limits = {});

/// Product of the retracts e_s(A), with operations given by tuples of
/// (lambda*S)-ary term operations.
struct MatrixProduct {
  std::vector<std::vector<Elem>> factors;
  MixedRadix encoding;
  /// Carries the images of the basic operations; same symbol names.
  SortedAlgebra algebra;
  /// fragment[lambda]: every lambda-ary operation of the matrix product as a
  /// table on its carrier; canonical order.
  std::vector<std::vector<OpTable>> fragment;
};

MatrixProduct matrix_product_algebra(SortedAlgebra const& alg, DiagonalPair const& pair,
                                     std::size_t lambda_max, Limits const& limits = {});

/// phi(f) = (e_s(f(d(x_{0,t})_t, ..., d(x_{lambda-1,t})_t)))_s as a table on
/// the matrix product carrier.
OpTable decompose_op(DiagonalPair const& pair, std::vector<std::vector<Elem>> const& factors,
                     OpTable const& f);

/// Canonical pair of a matrix product: d~ picks component s of argument s,
/// e~_s sends (a_t) to (e_t(a_s))_t.
DiagonalPair matrix_product_pair(MatrixProduct const& mp, DiagonalPair const& pair);

/// Element map a -> (e_s(a))_s into the matrix product encoding.
std::vector<Elem> split_elements(DiagonalPair const& pair,
                                 std::vector<std::vector<Elem>> const& factors);

/// Checks map(f(g_0, ..., g_{m-1})) = map(f)(map(g_0), ..., map(g_{m-1})) for
/// all f of arity 1..max and g_i of a common arity 0..max, where
/// `clone[k]` lists the k-ary single-sorted operations and `image[k]` their
/// images.  Samples with a fixed stride above limits.composition_budget.
VerificationReport check_clone_map(std::vector<std::vector<OpTable>> const& clone,
                                   std::vector<std::vector<OpTable>> const& image,
                                   Limits const& limits = {});

VerificationReport verify_decomposition(SortedAlgebra const& alg, DiagonalPair const& pair,
                                        std::size_t lambda_max, Limits const& limits = {});

}  // namespace msalg
