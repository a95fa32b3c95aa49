#pragma once

#include <Eigen/Dense>
#include <array>

namespace fmse {

/// One real value per grid node.
using ScalarField = Eigen::VectorXd;

/// One real value per ordered node pair (x_i, y_j); row = x index, col = y index.
using PairField = Eigen::MatrixXd;

/// One R^n vector per ordered node pair, stored per component.
struct VectorPairField {
    int dim = 1;
    std::array<Eigen::MatrixXd, 2> comp;

    VectorPairField() = default;
    VectorPairField(int dimension, Eigen::Index n) : dim(dimension) {
        comp[0] = Eigen::MatrixXd::Zero(n, n);
        if (dim == 2) comp[1] = Eigen::MatrixXd::Zero(n, n);
    }
    Eigen::Index size() const { return comp[0].rows(); }

    double dot_with(Eigen::Index i, Eigen::Index j, const std::array<double, 2>& v) const {
        double r = comp[0](i, j) * v[0];
        if (dim == 2) r += comp[1](i, j) * v[1];
        return r;
    }
    double norm2(Eigen::Index i, Eigen::Index j) const {
        double r = comp[0](i, j) * comp[0](i, j);
        if (dim == 2) r += comp[1](i, j) * comp[1](i, j);
        return r;
    }
};

}  // namespace fmse
