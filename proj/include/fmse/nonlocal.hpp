#pragma once

#include <vector>

#include "fmse/potentials.hpp"
#include "fmse/quadrature.hpp"

namespace fmse {

struct FracConstant {
    int n = 1;
    double s = 0.5;
    double value = 0;
};

/// C_{n,s} = 4^s Gamma(n/2+s) / (pi^{n/2} |Gamma(-s)|),  0 < s < 1.
FracConstant frac_constant(int n, double s);

enum class OperatorKind { FractionalLaplacian, Magnetic, MagneticPlusQ };

struct AssemblyOptions {
    bool tail = true;
    bool near_corrections = true;
    int moment_offsets = 0;  // 0 -> default (8 in 1D, 4 in 2D)
};

/// Dense discrete realization of the operator: one row per requested node,
/// columns over all nodes.  Row i applied to u approximates the operator
/// value at that node (collocation).
struct OperatorMatrix {
    Eigen::MatrixXd rows;
    std::vector<int> row_nodes;
    Eigen::VectorXd tail_weight;
    double C = 0;
    double s = 0;
    OperatorKind kind = OperatorKind::FractionalLaplacian;

    Eigen::VectorXd apply(const ScalarField& u) const { return rows * u; }
};

/// Rows default to the interior nodes when `row_nodes` is null.
OperatorMatrix assemble_frac_laplacian(const Grid& grid, double s, AssemblyOptions opts = {},
                                       const std::vector<int>* row_nodes = nullptr);

OperatorMatrix assemble_magnetic(const Grid& grid, double s, const MagneticPotential& A,
                                 const ScalarField* q, AssemblyOptions opts = {},
                                 const std::vector<int>* row_nodes = nullptr);

VectorPairField frac_gradient(const Grid& grid, double s, const ScalarField& u);

/// Discrete adjoint of frac_gradient with respect to the weighted inner products.
ScalarField frac_divergence(const Grid& grid, double s, const VectorPairField& P);

/// <grad_A^s u, grad_A^s v> over pairs (plus the exact exterior-tail completion).
double bilinear_energy(const Grid& grid, double s, const MagneticPotential& A,
                       const ScalarField& u, const ScalarField& v);

/// Exterior kernel mass C * int_{R^n \ box} |x_i - y|^{-n-2s} dy per node.
Eigen::VectorXd tail_weights(const Grid& grid, double s);

}  // namespace fmse
