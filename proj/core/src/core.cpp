#include "msalg/core.hpp"

#include <algorithm>
#include <sstream>

#include "msalg/error.hpp"

namespace msalg {

Profile uniform_profile(std::size_t arity, SortId sort) {
  return Profile{std::vector<SortId>(arity, sort), sort};
}

// ---------------------------------------------------------------------------
// MixedRadix
// ---------------------------------------------------------------------------

MixedRadix::MixedRadix(std::vector<std::size_t> radices)
    : radices_(std::move(radices)), strides_(radices_.size(), 1) {
  size_ = 1;
  for (std::size_t i = radices_.size(); i-- > 0;) {
    strides_[i] = size_;
    size_ *= radices_[i];
  }
  // strides stay meaningful even if some radix is 0
  std::size_t stride = 1;
  for (std::size_t i = radices_.size(); i-- > 0;) {
    strides_[i] = stride;
    stride *= std::max<std::size_t>(radices_[i], 1);
  }
}

std::size_t MixedRadix::encode(std::span<const Elem> digits) const {
  if (digits.size() != radices_.size()) {
    throw ShapeError("tuple of length " + std::to_string(digits.size()) + " where " +
                     std::to_string(radices_.size()) + " components are expected");
  }
  std::size_t code = 0;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (digits[i] >= radices_[i]) {
      throw RangeError("component " + std::to_string(i) + " = " + std::to_string(digits[i]) +
                       " outside carrier of size " + std::to_string(radices_[i]));
    }
    code += digits[i] * strides_[i];
  }
  return code;
}

void MixedRadix::decode(std::size_t code, std::span<Elem> out) const {
  for (std::size_t i = radices_.size(); i-- > 0;) {
    out[i] = static_cast<Elem>(code % radices_[i]);
    code /= radices_[i];
  }
}

std::vector<Elem> MixedRadix::decode(std::size_t code) const {
  std::vector<Elem> out(radices_.size());
  decode(code, out);
  return out;
}

// ---------------------------------------------------------------------------
// OpTable
// ---------------------------------------------------------------------------

OpTable::OpTable(Profile profile, std::vector<std::size_t> input_sizes, std::size_t cod_size,
                 std::vector<Elem> values)
    : profile_(std::move(profile)),
      shape_(std::move(input_sizes)),
      cod_size_(cod_size),
      values_(std::move(values)) {
  if (shape_.digits() != profile_.arity()) {
    throw ShapeError("table shape has " + std::to_string(shape_.digits()) +
                     " inputs but profile has arity " + std::to_string(profile_.arity()));
  }
  if (values_.size() != shape_.size()) {
    throw ShapeError("table has " + std::to_string(values_.size()) + " rows, expected " +
                     std::to_string(shape_.size()));
  }
  for (std::size_t r = 0; r < values_.size(); ++r) {
    if (values_[r] >= cod_size_) {
      throw RangeError("row " + std::to_string(r) + " outputs " + std::to_string(values_[r]) +
                       " outside carrier of size " + std::to_string(cod_size_));
    }
  }
}

Elem OpTable::at(std::span<const Elem> args) const { return values_[shape_.encode(args)]; }

std::uint64_t hash_values(std::span<const Elem> values) noexcept {
  // FNV-1a over 32-bit words followed by a splitmix finaliser.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (Elem v : values) {
    h ^= v;
    h *= 0x100000001b3ULL;
  }
  h ^= h >> 30;
  h *= 0xbf58476d1ce4e5b9ULL;
  h ^= h >> 27;
  h *= 0x94d049bb133111ebULL;
  h ^= h >> 31;
  return h;
}

std::uint64_t OpTable::hash() const noexcept { return hash_values(values_); }

bool OpTable::operator<(OpTable const& other) const {
  if (profile_ != other.profile_) {
    return profile_ < other.profile_;
  }
  if (shape_.radices().size() != other.shape_.radices().size() ||
      !std::equal(shape_.radices().begin(), shape_.radices().end(),
                  other.shape_.radices().begin())) {
    return std::lexicographical_compare(shape_.radices().begin(), shape_.radices().end(),
                                        other.shape_.radices().begin(),
                                        other.shape_.radices().end());
  }
  return values_ < other.values_;
}

std::vector<OpTable> canonical_set(std::vector<OpTable> tables) {
  std::sort(tables.begin(), tables.end());
  tables.erase(std::unique(tables.begin(), tables.end()), tables.end());
  return tables;
}

// ---------------------------------------------------------------------------
// Signature and algebra
// ---------------------------------------------------------------------------

bool operator==(Symbol const& a, Symbol const& b) {
  return a.name == b.name && a.profile == b.profile;
}

SortId SortedSignature::add_sort(std::string name) {
  if (find_sort(name)) {
    throw SortError("duplicate sort '" + name + "'");
  }
  sorts_.push_back(std::move(name));
  return sorts_.size() - 1;
}

std::size_t SortedSignature::add_symbol(std::string name, Profile profile) {
  if (find_symbol(name)) {
    throw SortError("duplicate symbol '" + name + "'");
  }
  for (SortId s : profile.inputs) {
    if (s >= sorts_.size()) {
      throw SortError("symbol '" + name + "' uses undeclared sort " + std::to_string(s));
    }
  }
  if (profile.cod >= sorts_.size()) {
    throw SortError("symbol '" + name + "' has undeclared output sort");
  }
  symbols_.push_back(Symbol{std::move(name), std::move(profile)});
  return symbols_.size() - 1;
}

std::optional<SortId> SortedSignature::find_sort(std::string const& name) const {
  auto it = std::find(sorts_.begin(), sorts_.end(), name);
  if (it == sorts_.end()) {
    return std::nullopt;
  }
  return static_cast<SortId>(it - sorts_.begin());
}

std::optional<std::size_t> SortedSignature::find_symbol(std::string const& name) const {
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (symbols_[i].name == name) {
      return i;
    }
  }
  return std::nullopt;
}

bool SortedSignature::operator==(SortedSignature const& other) const {
  return sorts_ == other.sorts_ && symbols_ == other.symbols_;
}

SortedAlgebra::SortedAlgebra(SortedSignature signature, std::vector<std::size_t> carriers,
                             std::vector<OpTable> ops)
    : signature_(std::move(signature)), carriers_(std::move(carriers)), ops_(std::move(ops)) {
  if (carriers_.size() != signature_.num_sorts()) {
    throw ShapeError("algebra has " + std::to_string(carriers_.size()) +
                     " carriers for a signature with " +
                     std::to_string(signature_.num_sorts()) + " sorts");
  }
  if (ops_.size() != signature_.num_symbols()) {
    throw ShapeError("algebra interprets " + std::to_string(ops_.size()) + " of " +
                     std::to_string(signature_.num_symbols()) + " symbols");
  }
  for (std::size_t i = 0; i < ops_.size(); ++i) {
    Symbol const& sym = signature_.symbol(i);
    OpTable const& table = ops_[i];
    if (table.profile() != sym.profile) {
      throw SortError("interpretation of '" + sym.name + "' has the wrong profile");
    }
    auto expected = input_sizes(sym.profile);
    if (!std::equal(expected.begin(), expected.end(), table.input_sizes().begin(),
                    table.input_sizes().end()) ||
        table.cod_size() != carriers_[sym.profile.cod]) {
      throw ShapeError("interpretation of '" + sym.name + "' does not match the carrier sizes");
    }
  }
}

std::size_t SortedAlgebra::product_size() const noexcept {
  std::size_t n = 1;
  for (std::size_t c : carriers_) {
    n *= c;
  }
  return n;
}

std::vector<std::size_t> SortedAlgebra::input_sizes(Profile const& profile) const {
  std::vector<std::size_t> sizes;
  sizes.reserve(profile.arity());
  for (SortId s : profile.inputs) {
    sizes.push_back(carriers_.at(s));
  }
  return sizes;
}

// ---------------------------------------------------------------------------
// Table algebra
// ---------------------------------------------------------------------------

void check_profile(Profile const& profile, std::size_t num_sorts, Limits const& limits) {
  if (profile.arity() > limits.max_arity) {
    throw ResourceError("arity " + std::to_string(profile.arity()) +
                        " exceeds the configured bound " + std::to_string(limits.max_arity));
  }
  for (SortId s : profile.inputs) {
    if (s >= num_sorts) {
      throw SortError("profile refers to sort " + std::to_string(s) + " but only " +
                      std::to_string(num_sorts) + " sorts exist");
    }
  }
  if (profile.cod >= num_sorts) {
    throw SortError("profile output sort " + std::to_string(profile.cod) + " does not exist");
  }
}

namespace {

std::vector<std::size_t> sizes_of(std::span<const std::size_t> carriers, Profile const& profile) {
  std::vector<std::size_t> sizes;
  sizes.reserve(profile.arity());
  for (SortId s : profile.inputs) {
    sizes.push_back(carriers[s]);
  }
  return sizes;
}

}  // namespace

OpTable projection(std::span<const std::size_t> carriers, Profile const& profile, std::size_t i,
                   Limits const& limits) {
  check_profile(profile, carriers.size(), limits);
  if (i >= profile.arity()) {
    throw SortError("projection index " + std::to_string(i) + " out of range for arity " +
                    std::to_string(profile.arity()));
  }
  if (profile.inputs[i] != profile.cod) {
    throw SortError("projection " + std::to_string(i) + " has input sort " +
                    std::to_string(profile.inputs[i]) + " but output sort " +
                    std::to_string(profile.cod));
  }
  MixedRadix shape(sizes_of(carriers, profile));
  std::vector<Elem> values(shape.size());
  std::vector<Elem> row(profile.arity());
  for (std::size_t r = 0; r < values.size(); ++r) {
    shape.decode(r, row);
    values[r] = row[i];
  }
  return OpTable(profile, sizes_of(carriers, profile), carriers[profile.cod], std::move(values));
}

OpTable constant_table(std::span<const std::size_t> carriers, Profile const& profile, Elem value) {
  auto sizes = sizes_of(carriers, profile);
  MixedRadix shape(sizes);
  return OpTable(profile, std::move(sizes), carriers[profile.cod],
                 std::vector<Elem>(shape.size(), value));
}

OpTable compose(OpTable const& f, std::span<const OpTable> gs) {
  if (gs.empty()) {
    if (f.arity() != 0) {
      throw SortError("compose: " + std::to_string(f.arity()) +
                      " arguments expected, none given");
    }
    throw SortError("compose: a nullary outer operation needs an explicit input profile");
  }
  return compose(f, gs, gs.front().profile(),
                 std::vector<std::size_t>(gs.front().input_sizes().begin(),
                                          gs.front().input_sizes().end()));
}

OpTable compose(OpTable const& f, std::span<const OpTable> gs, Profile const& input_profile,
                std::span<const std::size_t> input_sizes) {
  if (gs.size() != f.arity()) {
    throw SortError("compose: " + std::to_string(f.arity()) + " arguments expected, " +
                    std::to_string(gs.size()) + " given");
  }
  MixedRadix shape(std::vector<std::size_t>(input_sizes.begin(), input_sizes.end()));
  for (std::size_t i = 0; i < gs.size(); ++i) {
    OpTable const& g = gs[i];
    if (g.profile().inputs != input_profile.inputs) {
      throw SortError("compose: argument " + std::to_string(i) +
                      " has a different input profile");
    }
    if (!(g.shape() == shape)) {
      throw ShapeError("compose: argument " + std::to_string(i) + " has a different shape");
    }
    if (g.cod() != f.profile().inputs[i]) {
      throw SortError("compose: argument " + std::to_string(i) + " outputs sort " +
                      std::to_string(g.cod()) + " but position expects sort " +
                      std::to_string(f.profile().inputs[i]));
    }
    if (g.cod_size() != f.input_sizes()[i]) {
      throw ShapeError("compose: argument " + std::to_string(i) +
                       " has a carrier size different from the outer operation");
    }
  }
  auto strides = f.shape().strides();
  std::vector<Elem> values(shape.size());
  auto fv = f.values();
  for (std::size_t r = 0; r < values.size(); ++r) {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < gs.size(); ++i) {
      idx += gs[i].at_row(r) * strides[i];
    }
    values[r] = fv[idx];
  }
  Profile result{input_profile.inputs, f.cod()};
  return OpTable(std::move(result), std::vector<std::size_t>(input_sizes.begin(), input_sizes.end()),
                 f.cod_size(), std::move(values));
}

// ---------------------------------------------------------------------------
// Maps between algebras
// ---------------------------------------------------------------------------

SortedMap identity_map(SortedAlgebra const& alg) {
  SortedMap h;
  for (SortId s = 0; s < alg.num_sorts(); ++s) {
    h.maps.push_back(projection(alg.carriers(), Profile{{s}, s}, 0));
  }
  return h;
}

bool is_homomorphism(SortedAlgebra const& src, SortedAlgebra const& dst, SortedMap const& h) {
  if (!(src.signature() == dst.signature())) {
    throw SortError("is_homomorphism: algebras have different signatures");
  }
  if (h.maps.size() != src.num_sorts()) {
    throw ShapeError("is_homomorphism: one map per sort expected");
  }
  for (SortId s = 0; s < src.num_sorts(); ++s) {
    OpTable const& m = h.maps[s];
    if (m.arity() != 1 || m.input_sizes()[0] != src.carrier(s) ||
        m.cod_size() != dst.carrier(s)) {
      throw ShapeError("is_homomorphism: map of sort " + std::to_string(s) +
                       " has the wrong shape");
    }
  }
  std::vector<Elem> args;
  std::vector<Elem> image;
  for (std::size_t k = 0; k < src.num_ops(); ++k) {
    OpTable const& f = src.op(k);
    OpTable const& g = dst.op(k);
    args.resize(f.arity());
    image.resize(f.arity());
    for (std::size_t r = 0; r < f.rows(); ++r) {
      f.shape().decode(r, args);
      for (std::size_t i = 0; i < args.size(); ++i) {
        image[i] = h.maps[f.profile().inputs[i]].at_row(args[i]);
      }
      if (h.maps[f.cod()].at_row(f.at_row(r)) != g.at(image)) {
        return false;
      }
    }
  }
  return true;
}

SortedMap compose_maps(SortedMap const& first, SortedMap const& second) {
  if (first.maps.size() != second.maps.size()) {
    throw ShapeError("compose_maps: sort counts differ");
  }
  SortedMap out;
  for (std::size_t s = 0; s < first.maps.size(); ++s) {
    OpTable const& a = first.maps[s];
    OpTable const& b = second.maps[s];
    if (a.cod_size() != b.input_sizes()[0]) {
      throw ShapeError("compose_maps: carriers do not chain at sort " + std::to_string(s));
    }
    std::vector<Elem> values(a.rows());
    for (std::size_t r = 0; r < a.rows(); ++r) {
      values[r] = b.at_row(a.at_row(r));
    }
    out.maps.emplace_back(a.profile(),
                          std::vector<std::size_t>(a.input_sizes().begin(), a.input_sizes().end()),
                          b.cod_size(), std::move(values));
  }
  return out;
}

Morphism quotient_map(SortedAlgebra const& alg, std::vector<std::vector<Elem>> const& labels) {
  if (labels.size() != alg.num_sorts()) {
    throw ShapeError("quotient: one labeling per sort expected");
  }
  std::vector<std::vector<Elem>> block(alg.num_sorts());
  std::vector<std::size_t> sizes(alg.num_sorts());
  for (SortId s = 0; s < alg.num_sorts(); ++s) {
    if (labels[s].size() != alg.carrier(s)) {
      throw ShapeError("quotient: labeling of sort " + std::to_string(s) + " has the wrong length");
    }
    block[s].assign(alg.carrier(s), 0);
    std::vector<Elem> index(alg.carrier(s), 0);
    std::size_t k = 0;
    for (Elem a = 0; a < alg.carrier(s); ++a) {
      Elem l = labels[s][a];
      if (l > a || labels[s][l] != l) {
        throw PreconditionError("quotient: labels must name the least member of each block");
      }
      if (l == a) {
        index[a] = static_cast<Elem>(k++);
      }
      block[s][a] = index[l];
    }
    sizes[s] = k;
  }
  std::vector<OpTable> ops;
  std::vector<Elem> args;
  std::vector<Elem> rep;
  for (std::size_t g = 0; g < alg.num_ops(); ++g) {
    OpTable const& f = alg.op(g);
    std::vector<std::size_t> qin;
    for (SortId s : f.profile().inputs) {
      qin.push_back(sizes[s]);
    }
    MixedRadix qshape(qin);
    std::vector<Elem> values(qshape.size());
    std::vector<bool> seen(qshape.size(), false);
    args.resize(f.arity());
    rep.resize(f.arity());
    for (std::size_t r = 0; r < f.rows(); ++r) {
      f.shape().decode(r, args);
      for (std::size_t i = 0; i < args.size(); ++i) {
        rep[i] = block[f.profile().inputs[i]][args[i]];
      }
      std::size_t q = qshape.encode(rep);
      Elem out = block[f.cod()][f.at_row(r)];
      if (seen[q] && values[q] != out) {
        throw PreconditionError("quotient: partition is not compatible with '" +
                                alg.signature().symbol(g).name + "'");
      }
      seen[q] = true;
      values[q] = out;
    }
    ops.emplace_back(f.profile(), std::move(qin), sizes[f.cod()], std::move(values));
  }
  Morphism m;
  m.target = SortedAlgebra(alg.signature(), sizes, std::move(ops));
  for (SortId s = 0; s < alg.num_sorts(); ++s) {
    m.map.maps.emplace_back(Profile{{s}, s}, std::vector<std::size_t>{alg.carrier(s)}, sizes[s],
                            block[s]);
  }
  return m;
}

std::string to_string(Profile const& profile, SortedSignature const& sig) {
  std::ostringstream out;
  for (std::size_t i = 0; i < profile.inputs.size(); ++i) {
    if (i) {
      out << ' ';
    }
    out << sig.sort_name(profile.inputs[i]);
  }
  if (!profile.inputs.empty()) {
    out << ' ';
  }
  out << "-> " << sig.sort_name(profile.cod);
  return out.str();
}

std::string to_string(std::span<const Elem> tuple) {
  std::ostringstream out;
  out << '(';
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    if (i) {
      out << ',';
    }
    out << tuple[i];
  }
  out << ')';
  return out.str();
}

}  // namespace msalg
