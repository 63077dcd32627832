#include "msalg/cli/format.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

#include "msalg/error.hpp"

namespace msalg::cli {

namespace {

struct Token {
  std::string text;
  std::size_t line = 0;
  std::size_t column = 0;
};

class Lexer {
 public:
  explicit Lexer(std::istream& in) {
    std::string line;
    std::size_t no = 0;
    while (std::getline(in, line)) {
      ++no;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      std::size_t i = 0;
      while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i > start) tokens_.push_back({line.substr(start, i - start), no, start + 1});
      }
    }
    end_line_ = no + 1;
  }

  bool done() const { return pos_ >= tokens_.size(); }
  Token const& peek() const {
    static Token eof;
    if (done()) {
      eof = {"<end of input>", end_line_, 1};
      return eof;
    }
    return tokens_[pos_];
  }
  Token next() {
    Token t = peek();
    if (!done()) ++pos_;
    return t;
  }
  Token expect(std::string const& word) {
    Token t = next();
    if (t.text != word) {
      throw ParseError("expected '" + word + "', found '" + t.text + "'", t.line, t.column);
    }
    return t;
  }
  std::size_t number(Token const& t) {
    std::size_t v = 0;
    auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc{} || p != t.text.data() + t.text.size()) {
      throw ParseError("expected a non-negative integer, found '" + t.text + "'", t.line,
                       t.column);
    }
    return v;
  }
  std::size_t number() { return number(next()); }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::size_t end_line_ = 1;
};

}  // namespace

SortedAlgebra parse_algebra(std::istream& in) {
  Lexer lx(in);
  lx.expect("msalg");
  Token version = lx.next();
  if (lx.number(version) != 1) {
    throw ParseError("unsupported format version " + version.text, version.line, version.column);
  }
  SortedSignature sig;
  std::vector<std::size_t> carriers;
  lx.expect("sorts");
  std::size_t nsorts = lx.number();
  for (std::size_t i = 0; i < nsorts; ++i) {
    lx.expect("sort");
    Token name = lx.next();
    if (sig.find_sort(name.text)) {
      throw ParseError("duplicate sort '" + name.text + "'", name.line, name.column);
    }
    sig.add_sort(name.text);
    carriers.push_back(lx.number());
  }
  lx.expect("symbols");
  std::size_t nsymbols = lx.number();
  for (std::size_t i = 0; i < nsymbols; ++i) {
    Token kw = lx.expect("symbol");
    Token name = lx.next();
    if (sig.find_symbol(name.text)) {
      throw ParseError("duplicate symbol '" + name.text + "'", name.line, name.column);
    }
    Profile p;
    bool arrow = false;
    while (!arrow) {
      Token t = lx.next();
      if (t.line != kw.line) {
        throw ParseError("symbol '" + name.text + "' lacks '-> <sort>'", t.line, t.column);
      }
      if (t.text == "->") {
        arrow = true;
        continue;
      }
      auto s = sig.find_sort(t.text);
      if (!s) throw ParseError("unknown sort '" + t.text + "'", t.line, t.column);
      p.inputs.push_back(*s);
    }
    Token cod = lx.next();
    auto s = sig.find_sort(cod.text);
    if (!s || cod.line != kw.line) {
      throw ParseError("unknown sort '" + cod.text + "'", cod.line, cod.column);
    }
    p.cod = *s;
    sig.add_symbol(name.text, p);
  }
  std::vector<std::optional<OpTable>> tables(nsymbols);
  for (std::size_t i = 0; i < nsymbols; ++i) {
    lx.expect("table");
    Token name = lx.next();
    auto k = sig.find_symbol(name.text);
    if (!k) throw ParseError("unknown symbol '" + name.text + "'", name.line, name.column);
    if (tables[*k]) {
      throw ParseError("second table for '" + name.text + "'", name.line, name.column);
    }
    Token rows_token = lx.next();
    std::size_t rows = lx.number(rows_token);
    Profile const& p = sig.symbol(*k).profile;
    std::vector<std::size_t> in;
    std::size_t expected = 1;
    for (SortId t : p.inputs) {
      in.push_back(carriers[t]);
      expected *= carriers[t];
    }
    if (rows != expected) {
      throw ParseError("table '" + name.text + "' declares " + std::to_string(rows) +
                           " rows, its input product has " + std::to_string(expected),
                       rows_token.line, rows_token.column, ParseError::Kind::shape);
    }
    std::vector<Elem> values;
    for (std::size_t r = 0; r < rows; ++r) {
      Token v = lx.next();
      if (v.text == "table" || v.text == "end" || v.text == "<end of input>") {
        throw ParseError("table '" + name.text + "' has " + std::to_string(r) +
                             " values, expected " + std::to_string(rows),
                         v.line, v.column, ParseError::Kind::shape);
      }
      std::size_t x = lx.number(v);
      if (x >= carriers[p.cod]) {
        throw ParseError("value " + v.text + " of table '" + name.text + "' outside sort '" +
                             sig.sort_name(p.cod) + "' of size " +
                             std::to_string(carriers[p.cod]),
                         v.line, v.column, ParseError::Kind::range);
      }
      values.push_back(static_cast<Elem>(x));
    }
    if (!lx.done() && lx.peek().text != "table" && lx.peek().text != "end") {
      Token extra = lx.peek();
      throw ParseError("table '" + name.text + "' has more than " + std::to_string(rows) +
                           " values",
                       extra.line, extra.column, ParseError::Kind::shape);
    }
    tables[*k] = OpTable(p, std::move(in), carriers[p.cod], std::move(values));
  }
  lx.expect("end");
  if (!lx.done()) {
    Token t = lx.peek();
    throw ParseError("unexpected '" + t.text + "' after 'end'", t.line, t.column);
  }
  std::vector<OpTable> ops;
  for (auto& t : tables) ops.push_back(std::move(*t));
  return SortedAlgebra(std::move(sig), std::move(carriers), std::move(ops));
}

SortedAlgebra parse_algebra(std::string const& text) {
  std::istringstream in(text);
  return parse_algebra(in);
}

SortedAlgebra load_algebra(std::filesystem::path const& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return parse_algebra(in);
}

std::string emit_algebra(SortedAlgebra const& alg) {
  SortedSignature const& sig = alg.signature();
  std::ostringstream out;
  out << "msalg 1\n";
  out << "sorts " << alg.num_sorts() << "\n";
  for (SortId s = 0; s < alg.num_sorts(); ++s) {
    out << "sort " << sig.sort_name(s) << " " << alg.carrier(s) << "\n";
  }
  out << "symbols " << sig.num_symbols() << "\n";
  for (auto const& sym : sig.symbols()) {
    out << "symbol " << sym.name;
    for (SortId t : sym.profile.inputs) out << " " << sig.sort_name(t);
    out << " -> " << sig.sort_name(sym.profile.cod) << "\n";
  }
  for (std::size_t k = 0; k < alg.num_ops(); ++k) {
    OpTable const& op = alg.op(k);
    out << "table " << sig.symbol(k).name << " " << op.rows() << "\n";
    std::size_t width = op.arity() ? op.input_sizes().back() : 1;
    for (std::size_t r = 0; r < op.rows(); ++r) {
      out << op.at_row(r) << ((r + 1) % width == 0 || r + 1 == op.rows() ? "\n" : " ");
    }
  }
  out << "end\n";
  return out.str();
}

void save_algebra(SortedAlgebra const& alg, std::filesystem::path const& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << emit_algebra(alg);
}

}  // namespace msalg::cli
