#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "msalg/cli/format.hpp"
#include "msalg/cli/run.hpp"
#include "msalg/error.hpp"
#include "support.hpp"

using namespace msalg;
using msalg::cli::run;
using Json = nlohmann::ordered_json;

namespace {

namespace fs = std::filesystem;

std::string slurp(fs::path const& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

/// Reports echo input paths, so fixtures are produced from the project root.
struct AtRoot {
  fs::path saved = fs::current_path();
  AtRoot() { fs::current_path(fs::path(MSALG_CORPUS_DIR).parent_path()); }
  ~AtRoot() { fs::current_path(saved); }
};

fs::path scratch(std::string const& name) {
  return fs::temp_directory_path() / ("msalg_cli_" + name);
}

ParseError parse_error(std::string const& text) {
  try {
    cli::parse_algebra(text);
  } catch (ParseError const& e) {
    return e;
  }
  FAIL("no parse error");
  return ParseError("", 0, 0);
}

std::string const header =
    "msalg 1\nsorts 1\nsort u 2\nsymbols 1\nsymbol f u -> u\n";

}  // namespace

TEST_CASE("canonical files survive a round trip byte for byte") {
  for (auto const& name : msalg::test::corpus_names()) {
    std::string text = slurp(fs::path(MSALG_CORPUS_DIR) / (name + ".alg"));
    INFO(name);
    CHECK(cli::emit_algebra(cli::parse_algebra(text)) == text);
  }
  std::string loose =
      "# comment\nmsalg 1\nsorts 1\nsort u 3   # trailing\nsymbols 1\n"
      "symbol g u u -> u\ntable g 9\n0 1 2 1 2\n0 2 0 1\nend\n";
  std::string canon = cli::emit_algebra(cli::parse_algebra(loose));
  CHECK(canon.find('#') == std::string::npos);
  CHECK(cli::emit_algebra(cli::parse_algebra(canon)) == canon);
  CHECK(canon.find("0 1 2\n1 2 0\n2 0 1\n") != std::string::npos);
}

TEST_CASE("A_tiny parses to carriers 2 and 3 with three symbols") {
  SortedAlgebra a = msalg::test::corpus("A_tiny");
  CHECK(a.carrier(0) == 2);
  CHECK(a.carrier(1) == 3);
  CHECK(a.num_ops() == 3);
}

TEST_CASE("parse errors carry a position and a kind") {
  ParseError shape = parse_error(header + "table f 3\n0 1 0\nend\n");
  CHECK(shape.kind() == ParseError::Kind::shape);
  CHECK(std::string(shape.what()).find("'f'") != std::string::npos);
  CHECK(shape.line() == 6);

  ParseError range = parse_error(header + "table f 2\n0 5\nend\n");
  CHECK(range.kind() == ParseError::Kind::range);
  CHECK(range.line() == 7);
  CHECK(range.column() == 3);
  CHECK(std::string(range.what()).rfind("7:3:", 0) == 0);

  ParseError syntax = parse_error(header + "tabel f 2\n0 1\nend\n");
  CHECK(syntax.kind() == ParseError::Kind::syntax);
  CHECK(syntax.line() == 6);
  CHECK(syntax.column() == 1);

  CHECK(parse_error(header + "table f 2\n0 1\n").kind() == ParseError::Kind::syntax);
  CHECK(parse_error("msalg 1\nsorts 1\nsort u 2\nsymbols 1\nsymbol f v -> u\n").line() == 5);
}

TEST_CASE("exit statuses") {
  AtRoot root;
  CHECK(run({"--help"}).status == 0);
  CHECK(run({"frobnicate", "corpus/A_tiny.alg"}).status == 2);
  CHECK(run({"pure", "corpus/does_not_exist.alg"}).status == 2);
  CHECK(run({"pure", "corpus/A_tiny.alg"}).status == 0);

  auto r = run({"pure", "corpus/NonPure.alg"});
  CHECK(r.status == 1);
  Json j = Json::parse(r.out);
  CHECK(j["passed"] == false);
  CHECK(j["result"]["missing"] == Json::parse(R"([["u","w"],["w","u"]])"));

  fs::path bad = scratch("bad.alg");
  std::ofstream(bad) << header << "table f 3\n0 1 0\nend\n";
  auto e = run({"pure", bad.string()});
  CHECK(e.status == 2);
  CHECK(e.err.find("shape error") != std::string::npos);
}

TEST_CASE("homogenize emits an algebra") {
  AtRoot root;
  auto r = run({"homogenize", "corpus/A_tiny.alg"});
  REQUIRE(r.status == 0);
  SortedAlgebra h = cli::parse_algebra(r.out);
  CHECK(h.num_sorts() == 1);
  CHECK(h.carrier(0) == 6);
  fs::path out = scratch("h.alg");
  CHECK(run({"homogenize", "corpus/A_tiny.alg", "-o", out.string()}).status == 0);
  CHECK(slurp(out) == r.out);
}

TEST_CASE("pp formulas parse") {
  PPFormula f = cli::parse_pp_formula("exists y0 y1: R0(x0,y0) & R1(y0,y1) & R0(y1,x1)");
  CHECK(f.free == 2);
  CHECK(f.exist == 2);
  REQUIRE(f.conjuncts.size() == 3);
  CHECK(f.conjuncts[1].relation == 1);
  CHECK(f.conjuncts[1].coords == std::vector<std::size_t>{2, 3});
  CHECK(to_string(f) == "exists y0 y1: R0(x0,y0) & R1(y0,y1) & R0(y1,x1)");
  PPFormula g = cli::parse_pp_formula("R2(x1,x0)");
  CHECK(g.free == 2);
  CHECK(g.exist == 0);
  CHECK_THROWS(cli::parse_pp_formula("exists y0 R0(x0,y0)"));
  CHECK_THROWS(cli::parse_pp_formula("R0(x0,z1)"));
}

TEST_CASE("reports are deterministic and match the fixtures") {
  AtRoot root;
  for (auto const& name : msalg::test::corpus_names()) {
    std::string path = "corpus/" + name + ".alg";
    auto a = run({"verify-all", path, "--deterministic-timing"});
    auto b = run({"verify-all", path, "--deterministic-timing"});
    INFO(name);
    CHECK(a.status == 0);
    CHECK(a.out == b.out);
    CHECK(a.out == slurp("corpus/expected/" + name + ".json"));
  }
}

TEST_CASE("printed witnesses verify when fed back") {
  AtRoot root;
  fs::path h = scratch("tiny_h.alg");
  REQUIRE(run({"homogenize", "corpus/A_tiny.alg", "-o", h.string()}).status == 0);
  auto found = run({"diag-find", h.string(), "--sorts", "2"});
  REQUIRE(found.status == 0);
  Json pairs = Json::parse(found.out)["result"]["pairs"];
  REQUIRE(!pairs.empty());
  for (std::size_t i = 0; i < pairs.size(); i += 5) {
    fs::path pf = scratch("pair.json");
    std::ofstream(pf) << pairs[i].dump();
    auto v = run({"diag-verify", h.string(), "--pair", pf.string()});
    INFO(i);
    CHECK(v.status == 0);
    CHECK(Json::parse(v.out)["passed"] == true);
  }
  Json broken = pairs[0];
  broken["e"][0]["values"] = Json::array({0, 1, 2, 3, 4, 5});
  fs::path pf = scratch("broken.json");
  std::ofstream(pf) << broken.dump();
  CHECK(run({"diag-verify", h.string(), "--pair", pf.string()}).status == 1);
}
