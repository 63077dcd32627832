#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "msalg/core.hpp"

namespace msalg {

/// A well-sorted term: a variable (argument position) or a symbol applied to
/// argument terms.  Terms are immutable and share subterms.
class Term {
 public:
  static Term variable(std::size_t position, SortId sort);
  static Term apply(std::size_t symbol, std::vector<Term> args, SortId cod);

  bool is_variable() const noexcept { return node_->variable; }
  /// Argument position for a variable, symbol index for an application.
  std::size_t index() const noexcept { return node_->index; }
  SortId sort() const noexcept { return node_->sort; }
  std::span<const Term> args() const noexcept { return node_->args; }
  std::size_t depth() const noexcept { return node_->depth; }

  bool operator==(Term const& other) const;

 private:
  struct Node {
    bool variable = true;
    std::size_t index = 0;
    SortId sort = 0;
    std::size_t depth = 0;
    std::vector<Term> args;
  };
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

/// Throws SortError unless `t` is well-sorted over `sig` with variables
/// drawn from `profile.inputs` and output sort `profile.cod`.
void check_term(SortedSignature const& sig, Profile const& profile, Term const& t);

/// Value of `t` at the argument tuple `args` (one element per profile input).
Elem eval_term(SortedAlgebra const& alg, Profile const& profile, Term const& t,
               std::span<const Elem> args);

/// Full table of the term operation of `t`.
OpTable table_of_term(SortedAlgebra const& alg, Profile const& profile, Term const& t);

/// Replaces every variable x_i by `replacement[i]`; the result's variables
/// are those of the replacements.
Term substitute(Term const& t, std::span<const Term> replacement);

/// Prefix notation, variables printed as x0, x1, ...
std::string to_string(Term const& t, SortedSignature const& sig);

}  // namespace msalg
