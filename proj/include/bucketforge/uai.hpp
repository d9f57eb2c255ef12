#pragma once

#include <string>
#include <string_view>

#include "bucketforge/factor.hpp"

namespace bucketforge {

// Reads a UAI MARKOV network. Tokens may be separated by any whitespace;
// clique scopes keep their file order for table layout, then tables are
// permuted into the library's sorted-scope convention. BAYES files raise
// UnsupportedFormatError, anything malformed raises ParseError.
FactorGraph parse_uai(std::string_view text);

FactorGraph parse_uai_file(const std::string& path);

// Canonical MARKOV serialization: sorted scopes, tables in linear space
// (log_scale folded back in) with 17 significant digits.
std::string write_uai(const FactorGraph& g);

void write_uai_file(const FactorGraph& g, const std::string& path);

}  // namespace bucketforge
