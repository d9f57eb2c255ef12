#include "bucketforge/uai.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "bucketforge/errors.hpp"

namespace bucketforge {

namespace {

struct Tokenizer {
  std::string_view text;
  std::size_t pos = 0;

  bool next(std::string_view& tok) {
    while (pos < text.size() &&
           std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
    if (pos >= text.size()) return false;
    std::size_t start = pos;
    while (pos < text.size() &&
           !std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
    tok = text.substr(start, pos - start);
    return true;
  }
};

long long parse_int(Tokenizer& tk, const char* what) {
  std::string_view tok;
  if (!tk.next(tok))
    throw ParseError(std::string("unexpected end of file, expected ") + what);
  long long value = 0;
  std::size_t k = 0;
  bool neg = false;
  if (k < tok.size() && (tok[k] == '-' || tok[k] == '+')) neg = tok[k++] == '-';
  if (k >= tok.size())
    throw ParseError(std::string("expected integer for ") + what);
  for (; k < tok.size(); ++k) {
    if (!std::isdigit(static_cast<unsigned char>(tok[k])))
      throw ParseError(std::string("expected integer for ") + what +
                       ", got '" + std::string(tok) + "'");
    value = value * 10 + (tok[k] - '0');
    if (value > (1LL << 40)) throw ParseError("integer out of range");
  }
  return neg ? -value : value;
}

double parse_real(Tokenizer& tk, const char* what) {
  std::string_view tok;
  if (!tk.next(tok))
    throw ParseError(std::string("unexpected end of file, expected ") + what);
  std::string s(tok);
  char* end = nullptr;
  double value = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size())
    throw ParseError(std::string("expected number for ") + what + ", got '" +
                     s + "'");
  return value;
}

// Table given row-major over the listed (possibly unsorted) scope,
// re-laid-out row-major over the sorted scope.
Factor factor_from_listed(const std::vector<VariableId>& listed,
                          std::vector<double> table,
                          const DomainSpec& domains) {
  std::vector<VariableId> sorted(listed);
  std::sort(sorted.begin(), sorted.end());
  if (sorted == listed) return Factor(std::move(sorted), std::move(table));

  const auto sorted_strides = scope_strides(sorted, domains);
  std::vector<std::size_t> map_strides(listed.size());
  for (std::size_t k = 0; k < listed.size(); ++k) {
    auto it = std::lower_bound(sorted.begin(), sorted.end(), listed[k]);
    map_strides[k] = sorted_strides[static_cast<std::size_t>(it - sorted.begin())];
  }

  std::vector<double> out(table.size());
  std::vector<std::int32_t> assign(listed.size(), 0);
  std::size_t dst = 0;
  for (std::size_t src = 0;; ++src) {
    out[dst] = table[src];
    std::size_t k = listed.size();
    while (k-- > 0) {
      ++assign[k];
      dst += map_strides[k];
      if (assign[k] < domains.cardinality(listed[k])) break;
      dst -= map_strides[k] * static_cast<std::size_t>(assign[k]);
      assign[k] = 0;
    }
    if (k == static_cast<std::size_t>(-1)) break;
  }
  return Factor(std::move(sorted), std::move(out));
}

}  // namespace

FactorGraph parse_uai(std::string_view text) {
  Tokenizer tk{text};
  std::string_view preamble;
  if (!tk.next(preamble)) throw ParseError("empty file");
  if (preamble == "BAYES")
    throw UnsupportedFormatError(
        "BAYES networks are not supported, expected MARKOV");
  if (preamble != "MARKOV")
    throw ParseError("expected MARKOV preamble, got '" +
                     std::string(preamble) + "'");

  const long long n = parse_int(tk, "variable count");
  if (n < 1) throw ParseError("variable count must be >= 1");

  FactorGraph g;
  g.domains.cardinalities.resize(static_cast<std::size_t>(n));
  for (long long v = 0; v < n; ++v) {
    long long d = parse_int(tk, "variable cardinality");
    if (d < 1) throw ParseError("variable cardinality must be >= 1");
    if (d > 1 << 20) throw ParseError("variable cardinality out of range");
    g.domains.cardinalities[static_cast<std::size_t>(v)] =
        static_cast<std::int32_t>(d);
  }

  const long long ncliques = parse_int(tk, "clique count");
  if (ncliques < 0) throw ParseError("clique count must be >= 0");

  std::vector<std::vector<VariableId>> listed_scopes;
  listed_scopes.reserve(static_cast<std::size_t>(ncliques));
  for (long long c = 0; c < ncliques; ++c) {
    long long arity = parse_int(tk, "clique size");
    if (arity < 0) throw ParseError("clique size must be >= 0");
    std::vector<VariableId> scope;
    scope.reserve(static_cast<std::size_t>(arity));
    for (long long k = 0; k < arity; ++k) {
      long long v = parse_int(tk, "clique variable");
      if (v < 0 || v >= n)
        throw ParseError("clique variable " + std::to_string(v) +
                         " out of range");
      if (std::find(scope.begin(), scope.end(), static_cast<VariableId>(v)) !=
          scope.end())
        throw ParseError("duplicate variable in clique scope");
      scope.push_back(static_cast<VariableId>(v));
    }
    listed_scopes.push_back(std::move(scope));
  }

  for (long long c = 0; c < ncliques; ++c) {
    const auto& listed = listed_scopes[static_cast<std::size_t>(c)];
    std::size_t expect = 1;
    for (VariableId v : listed)
      expect *= static_cast<std::size_t>(g.domains.cardinality(v));
    long long given = parse_int(tk, "table size");
    if (given < 0 || static_cast<std::size_t>(given) != expect)
      throw ParseError("table size " + std::to_string(given) +
                       " does not match clique cardinalities (expected " +
                       std::to_string(expect) + ")");
    std::vector<double> table(expect);
    for (std::size_t k = 0; k < expect; ++k) {
      double x = parse_real(tk, "table entry");
      if (!(x >= 0.0) || !std::isfinite(x))
        throw ParseError("table entries must be finite and non-negative");
      table[k] = x;
    }
    g.factors.push_back(factor_from_listed(listed, std::move(table), g.domains));
  }

  std::string_view extra;
  if (tk.next(extra))
    throw ParseError("trailing content after tables: '" + std::string(extra) +
                     "'");
  g.validate();
  return g;
}

FactorGraph parse_uai_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelError("cannot open model file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_uai(ss.str());
}

std::string write_uai(const FactorGraph& g) {
  g.validate();
  std::string out;
  out += "MARKOV\n";
  out += std::to_string(g.num_variables());
  out += "\n";
  for (std::size_t v = 0; v < g.num_variables(); ++v) {
    if (v) out += ' ';
    out += std::to_string(g.domains.cardinalities[v]);
  }
  out += "\n";
  out += std::to_string(g.factors.size());
  out += "\n";
  for (const Factor& f : g.factors) {
    out += std::to_string(f.scope.size());
    for (VariableId v : f.scope) {
      out += ' ';
      out += std::to_string(v);
    }
    out += "\n";
  }
  char buf[64];
  for (const Factor& f : g.factors) {
    out += "\n";
    out += std::to_string(f.table.size());
    out += "\n";
    const double scale = std::pow(10.0, f.log_scale);
    for (std::size_t k = 0; k < f.table.size(); ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", f.table[k] * scale);
      out += buf;
      out += (k + 1 == f.table.size()) ? '\n' : ' ';
    }
  }
  return out;
}

void write_uai_file(const FactorGraph& g, const std::string& path) {
  std::ofstream outf(path, std::ios::binary);
  if (!outf) throw ModelError("cannot write model file: " + path);
  outf << write_uai(g);
}

}  // namespace bucketforge
