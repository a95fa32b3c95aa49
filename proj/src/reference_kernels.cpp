#include "fmse/reference_kernels.hpp"

#include <cmath>

namespace fmse {
namespace serial {

OperatorMatrix assemble_frac_laplacian(const Grid& grid, double s, AssemblyOptions opts,
                                       const std::vector<int>* row_nodes) {
    const double C = frac_constant(grid.dim(), s).value;
    OperatorMatrix M;
    M.C = C;
    M.s = s;
    M.kind = OperatorKind::FractionalLaplacian;
    M.row_nodes = row_nodes ? *row_nodes : grid.interior_nodes;

    const int nr = static_cast<int>(M.row_nodes.size());
    const Eigen::Index n = grid.n_nodes();
    const int dim = grid.dim();
    const double npow = dim + 2.0 * s;
    M.rows = Eigen::MatrixXd::Zero(nr, n);
    M.tail_weight = Eigen::VectorXd::Zero(nr);

    const int p = opts.moment_offsets > 0 ? opts.moment_offsets : (dim == 1 ? 8 : 4);
    const double kappa_over_h2 =
        opts.near_corrections
            ? C * quad::near_zone_moment(dim, s, grid.h, p) / (grid.h * grid.h)
            : 0.0;

    for (int r = 0; r < nr; ++r) {
        const int i = M.row_nodes[r];
        Eigen::VectorXd row = Eigen::VectorXd::Zero(n);
        double diag = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j == i) continue;
            const double d = grid.dist(i, static_cast<int>(j));
            const double ker = C * std::pow(d, -npow) * grid.w;
            row[j] -= ker;
            diag += ker;
        }
        if (kappa_over_h2 > 0.0) {
            bool full_stencil = true;
            for (int ax = 0; ax < dim; ++ax)
                for (int dir : {-1, 1})
                    if (grid.neighbor(i, ax, dir) < 0) full_stencil = false;
            if (full_stencil) {
                for (int ax = 0; ax < dim; ++ax)
                    for (int dir : {-1, 1}) {
                        row[grid.neighbor(i, ax, dir)] -= kappa_over_h2;
                        diag += kappa_over_h2;
                    }
            }
        }
        row[i] += diag;
        if (opts.tail) {
            const double t = C * quad::tail_integral(grid, s, grid.pos[i]);
            M.tail_weight[r] = t;
            row[i] += t;
        }
        M.rows.row(r) = row.transpose();
    }
    return M;
}

VectorPairField frac_gradient(const Grid& grid, double s, const ScalarField& u) {
    const double C = frac_constant(grid.dim(), s).value;
    const double pref = std::sqrt(C / 2.0);
    const Eigen::Index n = grid.n_nodes();
    const int dim = grid.dim();
    const double gpow = dim / 2.0 + s + 1.0;
    VectorPairField G(dim, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j == i) continue;
            const double d = grid.dist(static_cast<int>(i), static_cast<int>(j));
            const double c = pref * (u[i] - u[j]) * std::pow(d, -gpow);
            auto yx = grid.delta(static_cast<int>(i), static_cast<int>(j));
            G.comp[0](i, j) = c * yx[0];
            if (dim == 2) G.comp[1](i, j) = c * yx[1];
        }
    }
    return G;
}

double bilinear_energy(const Grid& grid, double s, const MagneticPotential& A,
                       const ScalarField& u, const ScalarField& v) {
    const double C = frac_constant(grid.dim(), s).value;
    const double pref = std::sqrt(C / 2.0);
    const Eigen::Index n = grid.n_nodes();
    const int dim = grid.dim();
    const double gpow = dim / 2.0 + s + 1.0;
    const bool use_A = !A.is_zero();

    Eigen::VectorXd partial = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double acc = 0;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j == i) continue;
            const double d = grid.dist(static_cast<int>(i), static_cast<int>(j));
            const double k = pref * std::pow(d, -gpow);
            auto yx = grid.delta(static_cast<int>(i), static_cast<int>(j));
            double gu0 = k * (u[i] - u[j]) * yx[0];
            double gv0 = k * (v[i] - v[j]) * yx[0];
            double gu1 = 0, gv1 = 0;
            if (dim == 2) {
                gu1 = k * (u[i] - u[j]) * yx[1];
                gv1 = k * (v[i] - v[j]) * yx[1];
            }
            if (use_A) {
                gu0 += A.values.comp[0](i, j) * u[i];
                gv0 += A.values.comp[0](i, j) * v[i];
                if (dim == 2) {
                    gu1 += A.values.comp[1](i, j) * u[i];
                    gv1 += A.values.comp[1](i, j) * v[i];
                }
            }
            acc += gu0 * gv0 + gu1 * gv1;
        }
        partial[i] = acc;
    }
    double total = 0;
    for (Eigen::Index i = 0; i < n; ++i) total += partial[i];
    total *= grid.w * grid.w;

    Eigen::VectorXd t(n);
    for (Eigen::Index i = 0; i < n; ++i) t[i] = C * quad::tail_integral(grid, s, grid.pos[i]);
    double tail_part = 0;
    for (Eigen::Index i = 0; i < n; ++i) tail_part += u[i] * v[i] * t[i];
    return total + tail_part * grid.w;
}

}  // namespace serial
}  // namespace fmse
