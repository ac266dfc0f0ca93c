#pragma once

#include <iosfwd>
#include <string>

#include "rhors/sparse_matrix.hpp"

namespace rhors {

/// Reads a Matrix Market "matrix coordinate real symmetric" file (1-based
/// indices). Parse failures throw std::runtime_error with "name:line: ..."
/// messages.
SymmetricSparseMatrix read_matrix_market(std::istream& in, const std::string& name = "<stream>");
SymmetricSparseMatrix read_matrix_market_file(const std::string& path);

/// Writes the lower triangle in Matrix Market coordinate format with 17
/// significant digits, so a write/read round trip is bitwise exact.
void write_matrix_market(std::ostream& out, const SymmetricSparseMatrix& m);
void write_matrix_market_file(const std::string& path, const SymmetricSparseMatrix& m);

}  // namespace rhors
