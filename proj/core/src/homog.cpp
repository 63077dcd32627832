#include "msalg/homog.hpp"

#include <algorithm>

#include "msalg/error.hpp"

namespace msalg {

Profile interleaved_profile(std::size_t num_sorts, std::size_t lambda, SortId s) {
  Profile p;
  p.inputs.reserve(num_sorts * lambda);
  for (std::size_t i = 0; i < lambda; ++i) {
    for (SortId t = 0; t < num_sorts; ++t) {
      p.inputs.push_back(t);
    }
  }
  p.cod = s;
  return p;
}

namespace {

std::string fresh_name(SortedSignature const& sig, std::string base) {
  while (sig.find_symbol(base)) {
    base += '\'';
  }
  return base;
}

// Closed-term value of each sort, if any.
std::vector<std::optional<Elem>> closed_values(SortedAlgebra const& alg, Limits const& limits) {
  ColumnClosure c = close_columns(alg, RowDomain{}, limits);
  std::vector<std::optional<Elem>> out(alg.num_sorts());
  for (SortId s = 0; s < alg.num_sorts(); ++s) {
    if (c.count(s) > 0) {
      out[s] = c.column(s, 0)[0];
    }
  }
  return out;
}

}  // namespace

HomogenizedAlgebra homogenize(SortedAlgebra const& alg, Limits const& limits) {
  std::size_t ns = alg.num_sorts();
  if (ns == 0) {
    throw PreconditionError("homogenize needs at least one sort");
  }
  if (ns > limits.max_arity) {
    throw ResourceError("D would have arity " + std::to_string(ns) +
                        " which exceeds the configured bound");
  }
  HomogenizedAlgebra h;
  h.source = alg;
  h.encoding = MixedRadix(std::vector<std::size_t>(alg.carriers().begin(), alg.carriers().end()));
  std::size_t n = h.encoding.size();

  SortedSignature sig;
  sig.add_sort("H");
  std::vector<std::string> names;
  for (auto const& sym : alg.signature().symbols()) {
    names.push_back(sym.name);
  }
  SortedSignature probe;
  probe.add_sort("H");
  for (auto const& nm : names) {
    probe.add_symbol(nm, Profile{{}, 0});
  }
  sig.add_symbol(fresh_name(probe, "D"), uniform_profile(ns, 0));

  std::vector<OpTable> ops;
  // D((x_{s,t})_t)_s = (x_{s,s})_s
  {
    MixedRadix shape(std::vector<std::size_t>(ns, n));
    std::vector<Elem> values(shape.size());
    std::vector<Elem> args(ns);
    std::vector<Elem> out(ns);
    for (std::size_t r = 0; r < values.size(); ++r) {
      shape.decode(r, args);
      for (SortId s = 0; s < ns; ++s) {
        out[s] = h.encoding.decode(args[s])[s];
      }
      values[r] = h.encode(out);
    }
    ops.emplace_back(uniform_profile(ns, 0), std::vector<std::size_t>(ns, n), n,
                     std::move(values));
  }

  auto closed = closed_values(alg, limits);
  for (std::size_t k = 0; k < alg.num_ops(); ++k) {
    OpTable const& f = alg.op(k);
    std::size_t arity = f.arity();
    bool dummy = false;
    if (arity == 0) {
      for (SortId t = 0; t < ns; ++t) {
        if (t != f.cod() && !closed[t]) {
          dummy = true;
        }
      }
    }
    std::size_t lifted = dummy ? 1 : arity;
    if (lifted * ns > limits.max_arity) {
      throw ResourceError("lift of '" + alg.signature().symbol(k).name + "' needs arity " +
                          std::to_string(lifted * ns) + " which exceeds the configured bound");
    }
    h.dummy_argument.push_back(dummy);
    MixedRadix shape(std::vector<std::size_t>(lifted, n));
    std::vector<Elem> values(shape.size());
    std::vector<Elem> args(lifted);
    std::vector<Elem> fargs(arity);
    std::vector<Elem> out(ns);
    std::vector<std::vector<Elem>> decoded(lifted);
    for (std::size_t r = 0; r < values.size(); ++r) {
      shape.decode(r, args);
      for (std::size_t i = 0; i < lifted; ++i) {
        decoded[i] = h.decode(args[i]);
      }
      for (std::size_t i = 0; i < arity; ++i) {
        fargs[i] = decoded[i][f.profile().inputs[i]];
      }
      for (SortId t = 0; t < ns; ++t) {
        if (t == f.cod()) {
          out[t] = f.at(fargs);
        } else if (lifted > 0) {
          out[t] = decoded[0][t];
        } else {
          out[t] = *closed[t];
        }
      }
      values[r] = h.encode(out);
    }
    sig.add_symbol(names[k], uniform_profile(lifted, 0));
    ops.emplace_back(uniform_profile(lifted, 0), std::vector<std::size_t>(lifted, n), n,
                     std::move(values));
  }
  h.algebra = SortedAlgebra(std::move(sig), {n}, std::move(ops));
  return h;
}

OpTable homog_op(SortedAlgebra const& alg, std::span<const OpTable> components) {
  std::size_t ns = alg.num_sorts();
  if (components.size() != ns) {
    throw ShapeError("homog_op: " + std::to_string(components.size()) +
                     " components for " + std::to_string(ns) + " sorts");
  }
  std::size_t arity = components[0].arity();
  if (arity % ns != 0) {
    throw SortError("homog_op: component arity " + std::to_string(arity) +
                    " is not a multiple of the sort count");
  }
  std::size_t lambda = arity / ns;
  for (SortId s = 0; s < ns; ++s) {
    if (components[s].profile() != interleaved_profile(ns, lambda, s)) {
      throw SortError("homog_op: component " + std::to_string(s) +
                      " does not have the interleaved profile");
    }
    auto sizes = alg.input_sizes(components[s].profile());
    if (!std::equal(sizes.begin(), sizes.end(), components[s].input_sizes().begin(),
                    components[s].input_sizes().end())) {
      throw ShapeError("homog_op: component " + std::to_string(s) +
                       " does not match the carriers");
    }
  }
  MixedRadix enc(std::vector<std::size_t>(alg.carriers().begin(), alg.carriers().end()));
  std::size_t n = enc.size();
  MixedRadix shape(std::vector<std::size_t>(lambda, n));
  std::vector<Elem> values(shape.size());
  std::vector<Elem> args(lambda);
  std::vector<Elem> flat(arity);
  std::vector<Elem> comp(ns);
  std::vector<Elem> out(ns);
  for (std::size_t r = 0; r < values.size(); ++r) {
    shape.decode(r, args);
    for (std::size_t i = 0; i < lambda; ++i) {
      enc.decode(args[i], comp);
      std::copy(comp.begin(), comp.end(), flat.begin() + static_cast<std::ptrdiff_t>(i * ns));
    }
    std::size_t row = components[0].row_of(flat);
    for (SortId s = 0; s < ns; ++s) {
      out[s] = components[s].at_row(row);
    }
    values[r] = static_cast<Elem>(enc.encode(out));
  }
  return OpTable(uniform_profile(lambda, 0), std::vector<std::size_t>(lambda, n), n,
                 std::move(values));
}

std::vector<OpTable> homog_fragment_oracle(CloneFragment const& frag, std::size_t lambda,
                                           Limits const& limits) {
  SortedAlgebra const& alg = frag.algebra();
  std::size_t ns = alg.num_sorts();
  std::vector<std::vector<OpTable>> per_sort;
  std::size_t total = 1;
  for (SortId s = 0; s < ns; ++s) {
    Profile p = interleaved_profile(ns, lambda, s);
    if (!frag.has(p)) {
      throw PreconditionError("fragment lacks the interleaved profile for sort " +
                              alg.signature().sort_name(s));
    }
    per_sort.push_back(frag.tables(p));
    total *= per_sort.back().size();
    if (total > limits.enumeration_budget) {
      throw ResourceError("homogenized fragment exceeds the enumeration budget");
    }
  }
  std::vector<OpTable> out;
  out.reserve(total);
  std::vector<std::size_t> pick(ns, 0);
  std::vector<OpTable> comps(ns);
  for (std::size_t k = 0; k < total; ++k) {
    std::size_t rest = k;
    for (std::size_t s = ns; s-- > 0;) {
      pick[s] = rest % per_sort[s].size();
      rest /= per_sort[s].size();
      comps[s] = per_sort[s][pick[s]];
    }
    out.push_back(homog_op(alg, comps));
  }
  return canonical_set(std::move(out));
}

VerificationReport verify_homogenization(SortedAlgebra const& alg, std::size_t lambda_max,
                                         Limits const& limits) {
  VerificationReport rep;
  HomogenizedAlgebra h = homogenize(alg, limits);
  std::vector<Profile> profiles;
  std::vector<Profile> hprofiles;
  for (std::size_t lambda = 0; lambda <= lambda_max; ++lambda) {
    for (SortId s = 0; s < alg.num_sorts(); ++s) {
      profiles.push_back(interleaved_profile(alg.num_sorts(), lambda, s));
    }
    hprofiles.push_back(uniform_profile(lambda, 0));
  }
  CloneFragment frag = generate_fragment(alg, profiles, limits);
  CloneFragment hfrag = generate_fragment(h.algebra, hprofiles, limits);
  for (std::size_t lambda = 0; lambda <= lambda_max; ++lambda) {
    std::string L = std::to_string(lambda);
    auto direct = canonical_set(hfrag.tables(hprofiles[lambda]));
    auto oracle = homog_fragment_oracle(frag, lambda, limits);
    rep.count("clone_" + L, static_cast<std::int64_t>(direct.size()));
    rep.count("oracle_" + L, static_cast<std::int64_t>(oracle.size()));
    rep.check("fragment_" + L, direct == oracle,
              std::to_string(direct.size()) + " generated vs " + std::to_string(oracle.size()) +
                  " component tuples");
  }
  return rep;
}

Term lift_term(HomogenizedAlgebra const& h, Term const& t,
               std::span<const std::size_t> argument_of) {
  if (t.is_variable()) {
    if (t.index() >= argument_of.size()) {
      throw SortError("lift_term: variable x" + std::to_string(t.index()) + " has no argument");
    }
    return Term::variable(argument_of[t.index()], 0);
  }
  std::size_t k = t.index();
  std::vector<Term> args;
  for (auto const& a : t.args()) {
    args.push_back(lift_term(h, a, argument_of));
  }
  if (h.dummy_argument.at(k)) {
    args.push_back(Term::variable(0, 0));
  }
  return Term::apply(k + 1, std::move(args), 0);
}

Term homog_term(HomogenizedAlgebra const& h, std::span<const Term> components,
                std::size_t lambda) {
  std::size_t ns = h.num_sorts();
  if (components.size() != ns) {
    throw ShapeError("homog_term: one component per sort expected");
  }
  std::vector<std::size_t> argument_of(lambda * ns);
  for (std::size_t k = 0; k < argument_of.size(); ++k) {
    argument_of[k] = k / ns;
  }
  std::vector<Term> args;
  for (SortId s = 0; s < ns; ++s) {
    if (components[s].sort() != s) {
      throw SortError("homog_term: component " + std::to_string(s) + " has the wrong sort");
    }
    args.push_back(lift_term(h, components[s], argument_of));
  }
  if (ns == 1) {
    return args[0];
  }
  return Term::apply(HomogenizedAlgebra::diagonal_symbol, std::move(args), 0);
}

OpTable product_map(std::span<const std::size_t> src_carriers,
                    std::span<const std::size_t> dst_carriers, SortedMap const& maps) {
  if (maps.maps.size() != src_carriers.size() || src_carriers.size() != dst_carriers.size()) {
    throw ShapeError("product_map: one map per sort expected");
  }
  for (std::size_t s = 0; s < maps.maps.size(); ++s) {
    OpTable const& m = maps.maps[s];
    if (m.arity() != 1 || m.input_sizes()[0] != src_carriers[s] ||
        m.cod_size() != dst_carriers[s]) {
      throw ShapeError("product_map: map of sort " + std::to_string(s) + " has the wrong shape");
    }
  }
  MixedRadix src(std::vector<std::size_t>(src_carriers.begin(), src_carriers.end()));
  MixedRadix dst(std::vector<std::size_t>(dst_carriers.begin(), dst_carriers.end()));
  std::vector<Elem> values(src.size());
  std::vector<Elem> a(src_carriers.size());
  for (std::size_t r = 0; r < values.size(); ++r) {
    src.decode(r, a);
    for (std::size_t s = 0; s < a.size(); ++s) {
      a[s] = maps.maps[s].at_row(a[s]);
    }
    values[r] = static_cast<Elem>(dst.encode(a));
  }
  return OpTable(Profile{{0}, 0}, {src.size()}, dst.size(), std::move(values));
}

HomogMorphismReport homog_morphism(SortedAlgebra const& src, SortedAlgebra const& dst,
                                   SortedMap const& maps, Limits const& limits) {
  HomogMorphismReport rep;
  rep.map = product_map(src.carriers(), dst.carriers(), maps);
  rep.sorted_homomorphism = is_homomorphism(src, dst, maps);
  auto hs = homogenize(src, limits);
  auto hd = homogenize(dst, limits);
  rep.homogenized_homomorphism = is_homomorphism(hs.algebra, hd.algebra, SortedMap{{rep.map}});
  return rep;
}

}  // namespace msalg
