#pragma once

// The msalg command line, callable in-process.

#include <string>
#include <vector>

#include "msalg/relations.hpp"

namespace msalg::cli {

struct RunResult {
  /// 0 when every checked property holds, 1 when one fails, 2 on usage,
  /// input or resource errors.
  int status = 0;
  std::string out;
  std::string err;
};

/// Runs one command; `args` excludes the program name.
RunResult run(std::vector<std::string> const& args);

/// Parses "exists y0 y1: R0(x0,y0) & R1(y0,x1)".  The free variables are
/// x0 .. x{k-1} for the largest index k-1 mentioned.
PPFormula parse_pp_formula(std::string const& text);

}  // namespace msalg::cli
