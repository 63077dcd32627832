#include "msalg/term.hpp"

#include <algorithm>
#include <sstream>

#include "msalg/error.hpp"

namespace msalg {

Term Term::variable(std::size_t position, SortId sort) {
  auto node = std::make_shared<Node>();
  node->variable = true;
  node->index = position;
  node->sort = sort;
  node->depth = 0;
  return Term(std::move(node));
}

Term Term::apply(std::size_t symbol, std::vector<Term> args, SortId cod) {
  auto node = std::make_shared<Node>();
  node->variable = false;
  node->index = symbol;
  node->sort = cod;
  std::size_t depth = 0;
  for (auto const& a : args) {
    depth = std::max(depth, a.depth());
  }
  node->depth = depth + 1;
  node->args = std::move(args);
  return Term(std::move(node));
}

bool Term::operator==(Term const& other) const {
  if (node_ == other.node_) {
    return true;
  }
  if (is_variable() != other.is_variable() || index() != other.index() || sort() != other.sort() ||
      args().size() != other.args().size()) {
    return false;
  }
  return std::equal(args().begin(), args().end(), other.args().begin());
}

namespace {

void check_rec(SortedSignature const& sig, Profile const& profile, Term const& t) {
  if (t.is_variable()) {
    if (t.index() >= profile.arity()) {
      throw SortError("variable x" + std::to_string(t.index()) + " beyond arity " +
                      std::to_string(profile.arity()));
    }
    if (profile.inputs[t.index()] != t.sort()) {
      throw SortError("variable x" + std::to_string(t.index()) + " used at the wrong sort");
    }
    return;
  }
  if (t.index() >= sig.num_symbols()) {
    throw SortError("unknown symbol index " + std::to_string(t.index()));
  }
  Symbol const& sym = sig.symbol(t.index());
  if (sym.profile.cod != t.sort()) {
    throw SortError("application of '" + sym.name + "' carries the wrong sort");
  }
  if (sym.profile.arity() != t.args().size()) {
    throw SortError("'" + sym.name + "' applied to " + std::to_string(t.args().size()) +
                    " arguments, expects " + std::to_string(sym.profile.arity()));
  }
  for (std::size_t i = 0; i < t.args().size(); ++i) {
    if (t.args()[i].sort() != sym.profile.inputs[i]) {
      throw SortError("argument " + std::to_string(i) + " of '" + sym.name +
                      "' has the wrong sort");
    }
    check_rec(sig, profile, t.args()[i]);
  }
}

Elem eval_rec(SortedAlgebra const& alg, Term const& t, std::span<const Elem> args) {
  if (t.is_variable()) {
    return args[t.index()];
  }
  OpTable const& op = alg.op(t.index());
  std::size_t row = 0;
  auto strides = op.shape().strides();
  for (std::size_t i = 0; i < t.args().size(); ++i) {
    row += eval_rec(alg, t.args()[i], args) * strides[i];
  }
  return op.at_row(row);
}

void print_rec(std::ostringstream& out, Term const& t, SortedSignature const& sig) {
  if (t.is_variable()) {
    out << 'x' << t.index();
    return;
  }
  out << sig.symbol(t.index()).name;
  if (t.args().empty()) {
    return;
  }
  out << '(';
  for (std::size_t i = 0; i < t.args().size(); ++i) {
    if (i) {
      out << ',';
    }
    print_rec(out, t.args()[i], sig);
  }
  out << ')';
}

}  // namespace

void check_term(SortedSignature const& sig, Profile const& profile, Term const& t) {
  if (t.sort() != profile.cod) {
    throw SortError("term has sort " + std::to_string(t.sort()) + " but profile expects " +
                    std::to_string(profile.cod));
  }
  check_rec(sig, profile, t);
}

Elem eval_term(SortedAlgebra const& alg, Profile const& profile, Term const& t,
               std::span<const Elem> args) {
  check_term(alg.signature(), profile, t);
  if (args.size() != profile.arity()) {
    throw ShapeError("eval_term: " + std::to_string(args.size()) + " arguments for arity " +
                     std::to_string(profile.arity()));
  }
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] >= alg.carrier(profile.inputs[i])) {
      throw RangeError("eval_term: argument " + std::to_string(i) + " out of range");
    }
  }
  return eval_rec(alg, t, args);
}

OpTable table_of_term(SortedAlgebra const& alg, Profile const& profile, Term const& t) {
  check_term(alg.signature(), profile, t);
  auto sizes = alg.input_sizes(profile);
  MixedRadix shape(sizes);
  std::vector<Elem> values(shape.size());
  std::vector<Elem> row(profile.arity());
  for (std::size_t r = 0; r < values.size(); ++r) {
    shape.decode(r, row);
    values[r] = eval_rec(alg, t, row);
  }
  return OpTable(profile, std::move(sizes), alg.carrier(profile.cod), std::move(values));
}

Term substitute(Term const& t, std::span<const Term> replacement) {
  if (t.is_variable()) {
    if (t.index() >= replacement.size()) {
      throw SortError("substitution has no replacement for x" + std::to_string(t.index()));
    }
    Term const& r = replacement[t.index()];
    if (r.sort() != t.sort()) {
      throw SortError("substitution for x" + std::to_string(t.index()) + " has the wrong sort");
    }
    return r;
  }
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (auto const& a : t.args()) {
    args.push_back(substitute(a, replacement));
  }
  return Term::apply(t.index(), std::move(args), t.sort());
}

std::string to_string(Term const& t, SortedSignature const& sig) {
  std::ostringstream out;
  print_rec(out, t, sig);
  return out.str();
}

}  // namespace msalg
