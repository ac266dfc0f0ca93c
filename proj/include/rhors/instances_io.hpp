#pragma once

#include <string>

#include "rhors/problem.hpp"

namespace rhors {

/// Writes `dir/H.mtx` (Matrix Market symmetric coordinate), `dir/g.txt` (one
/// value per line, 17 significant digits), and `dir/instance.json` with the
/// schema {"n", "density", "seed", "recipe", "regularizer": {...}}. Creates
/// the directory when missing. A save/load round trip is bitwise exact.
void save_instance(const ProblemInstance& inst, const std::string& dir);

/// Reads the three files back; malformed content throws std::runtime_error
/// naming the file (and line, where lines exist).
ProblemInstance load_instance(const std::string& dir);

}  // namespace rhors
