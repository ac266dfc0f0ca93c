#include "rhors/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rhors {

namespace {

[[noreturn]] void fail(const std::string& name, long line, const std::string& msg) {
  throw std::runtime_error(name + ":" + std::to_string(line) + ": " + msg);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

SymmetricSparseMatrix read_matrix_market(std::istream& in, const std::string& name) {
  std::string line;
  long lineno = 0;

  if (!std::getline(in, line)) fail(name, 1, "empty file");
  ++lineno;
  {
    std::istringstream hs(line);
    std::string banner, object, format, field, symmetry;
    hs >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket") fail(name, lineno, "missing %%MatrixMarket banner");
    if (lower(object) != "matrix" || lower(format) != "coordinate" || lower(field) != "real" ||
        lower(symmetry) != "symmetric")
      fail(name, lineno, "expected 'matrix coordinate real symmetric', got '" + line + "'");
  }

  Index rows = 0, cols = 0, nnz = 0;
  for (;;) {
    if (!std::getline(in, line)) fail(name, lineno, "missing size line");
    ++lineno;
    if (!line.empty() && line[0] == '%') continue;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ss(line);
    if (!(ss >> rows >> cols >> nnz)) fail(name, lineno, "malformed size line '" + line + "'");
    break;
  }
  if (rows != cols) fail(name, lineno, "matrix is not square");
  if (rows <= 0 || nnz < 0) fail(name, lineno, "invalid dimensions");

  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(nnz));
  for (Index k = 0; k < nnz; ++k) {
    if (!std::getline(in, line)) fail(name, lineno, "unexpected end of file: expected " +
                                                        std::to_string(nnz) + " entries");
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      --k;
      continue;
    }
    std::istringstream ss(line);
    Index i, j;
    double v;
    if (!(ss >> i >> j >> v)) fail(name, lineno, "malformed entry '" + line + "'");
    if (i < 1 || i > rows || j < 1 || j > rows)
      fail(name, lineno, "index out of range in entry '" + line + "'");
    entries.push_back({i - 1, j - 1, v});
  }
  return SymmetricSparseMatrix::from_triplets(rows, std::move(entries));
}

SymmetricSparseMatrix read_matrix_market_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return read_matrix_market(in, path);
}

void write_matrix_market(std::ostream& out, const SymmetricSparseMatrix& m) {
  out << "%%MatrixMarket matrix coordinate real symmetric\n";
  out << m.dim() << " " << m.dim() << " " << m.stored_entries() << "\n";
  char buf[64];
  m.for_each_stored([&](Index i, Index j, double v) {
    std::snprintf(buf, sizeof(buf), "%lld %lld %.17g\n", static_cast<long long>(i + 1),
                  static_cast<long long>(j + 1), v);
    out << buf;
  });
}

void write_matrix_market_file(const std::string& path, const SymmetricSparseMatrix& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_matrix_market(out, m);
  if (!out.flush()) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace rhors
