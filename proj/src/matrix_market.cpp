#include "rrk/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "rrk/errors.hpp"

namespace rrk {
namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool blank_or_comment(const std::string& line) {
  const auto pos = line.find_first_not_of(" \t\r");
  return pos == std::string::npos || line[pos] == '%';
}

}  // namespace

SparseMatrixCSR read_matrix_market(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw ParseError("empty input", 1);
  ++lineno;

  std::istringstream header(line);
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket") throw ParseError("missing %%MatrixMarket banner", lineno);
  object = lower(object);
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (object != "matrix") throw ParseError("unsupported object '" + object + "'", lineno);
  if (format != "coordinate") throw ParseError("only coordinate format is supported", lineno);
  if (field != "real" && field != "double") throw ParseError("field must be real, got '" + field + "'", lineno);
  if (symmetry != "general" && symmetry != "symmetric") throw ParseError("unsupported symmetry '" + symmetry + "'", lineno);
  const bool symmetric = symmetry == "symmetric";

  do {
    if (!std::getline(in, line)) throw ParseError("missing size line", lineno + 1);
    ++lineno;
  } while (blank_or_comment(line));

  long long m = -1, n = -1, declared = -1;
  {
    std::istringstream size_line(line);
    if (!(size_line >> m >> n >> declared) || m < 0 || n < 0 || declared < 0)
      throw ParseError("malformed size line", lineno);
  }
  if (symmetric && m != n) throw ParseError("symmetric matrix must be square", lineno);

  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(symmetric ? 2 * declared : declared));
  long long read = 0;
  while (read < declared && std::getline(in, line)) {
    ++lineno;
    if (blank_or_comment(line)) continue;
    long long i = 0, j = 0;
    double v = 0.0;
    const char* p = line.c_str();
    char* end = nullptr;
    i = std::strtoll(p, &end, 10);
    if (end == p) throw ParseError("expected row index", lineno);
    p = end;
    j = std::strtoll(p, &end, 10);
    if (end == p) throw ParseError("expected column index", lineno);
    p = end;
    v = std::strtod(p, &end);
    if (end == p) throw ParseError("expected real value", lineno);
    if (i < 1 || i > m || j < 1 || j > n)
      throw ParseError("index (" + std::to_string(i) + "," + std::to_string(j) + ") outside declared bounds", lineno);
    if (!std::isfinite(v)) throw ParseError("non-finite value", lineno);
    triplets.push_back({static_cast<index_t>(i - 1), static_cast<index_t>(j - 1), v});
    if (symmetric && i != j) triplets.push_back({static_cast<index_t>(j - 1), static_cast<index_t>(i - 1), v});
    ++read;
  }
  if (read < declared)
    throw ParseError("expected " + std::to_string(declared) + " entries, found " + std::to_string(read), lineno);
  return SparseMatrixCSR::from_coordinates(triplets, static_cast<std::size_t>(m), static_cast<std::size_t>(n));
}

SparseMatrixCSR read_matrix_market(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string(), 0);
  try {
    return read_matrix_market(in);
  } catch (const ParseError& e) {
    throw ParseError(e.detail(), e.line(), path.string());
  }
}

void write_matrix_market(std::ostream& out, const SparseMatrixCSR& a) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.nrows() << ' ' << a.ncols() << ' ' << a.nnz() << '\n';
  char buf[64];
  for (std::size_t i = 0; i < a.nrows(); ++i) {
    const auto cols = a.row_cols(i);
    const auto vals = a.row_values(i);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", vals[k]);
      out << (i + 1) << ' ' << (cols[k] + 1) << ' ' << buf << '\n';
    }
  }
}

void write_matrix_market(const std::filesystem::path& path, const SparseMatrixCSR& a) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_matrix_market(out, a);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace rrk
