#pragma once

#include <filesystem>
#include <iosfwd>

#include "rrk/sparse.hpp"

namespace rrk {

// Only `%%MatrixMarket matrix coordinate real {general|symmetric}` is accepted.
// Symmetric files are expanded to full storage. Errors carry the 1-based line.
SparseMatrixCSR read_matrix_market(std::istream& in);
SparseMatrixCSR read_matrix_market(const std::filesystem::path& path);

// Writes `coordinate real general` with 1-based indices and 17 significant digits.
void write_matrix_market(std::ostream& out, const SparseMatrixCSR& a);
void write_matrix_market(const std::filesystem::path& path, const SparseMatrixCSR& a);

}  // namespace rrk
