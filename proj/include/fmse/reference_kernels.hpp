#pragma once

#include "fmse/nonlocal.hpp"

namespace fmse {
namespace serial {

// Plain serial reference implementations of the hot kernels, kept for testing
// the OpenMP paths (outputs must match bit for bit) and for the benchmark.

OperatorMatrix assemble_frac_laplacian(const Grid& grid, double s, AssemblyOptions opts = {},
                                       const std::vector<int>* row_nodes = nullptr);

VectorPairField frac_gradient(const Grid& grid, double s, const ScalarField& u);

double bilinear_energy(const Grid& grid, double s, const MagneticPotential& A,
                       const ScalarField& u, const ScalarField& v);

}  // namespace serial
}  // namespace fmse
