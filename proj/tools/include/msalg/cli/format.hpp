#pragma once

// Line-oriented text format for finite many-sorted algebras.
//
//   msalg 1
//   sorts <count>
//   sort <name> <size>            (count lines)
//   symbols <count>
//   symbol <name> <sort>* -> <sort>   (count lines)
//   table <name> <rows>           (one block per symbol, declaration order)
//   <rows values, whitespace separated, any line breaks>
//   end
//
// '#' starts a comment.  Rows are listed in row-major order of the declared
// input sorts.

#include <filesystem>
#include <istream>
#include <string>

#include "msalg/core.hpp"

namespace msalg::cli {

SortedAlgebra parse_algebra(std::istream& in);
SortedAlgebra parse_algebra(std::string const& text);
SortedAlgebra load_algebra(std::filesystem::path const& path);

/// Canonical serialization: one line per run of the last input.
std::string emit_algebra(SortedAlgebra const& alg);
void save_algebra(SortedAlgebra const& alg, std::filesystem::path const& path);

}  // namespace msalg::cli
