#pragma once

#include <string>
#include <vector>

#include "fmse/nonlocal.hpp"

namespace fmse {
namespace io {

/// Node-indexed CSV export: x[,y],interior,value columns, 17 significant
/// digits, atomic write (temp file + rename).
void write_field_csv(const std::string& path, const Grid& grid,
                     const std::vector<std::pair<std::string, const ScalarField*>>& columns);

/// Sparse-style matrix export (row, col, value) with tail weights appended.
void write_matrix_csv(const std::string& path, const OperatorMatrix& M);

/// Plain key/value run report, deterministic ordering.
void write_report(const std::string& path,
                  const std::vector<std::pair<std::string, std::string>>& entries);

/// Pair-table potential import: lines "i,j,Ax[,Ay]" (node indices).
VectorPairField load_pair_csv(const std::string& path, const Grid& grid);

std::string fmt17(double v);

}  // namespace io
}  // namespace fmse
