#include "fmse/nonlocal.hpp"

#include <cmath>
#include <iostream>
#include <numbers>

namespace fmse {

FracConstant frac_constant(int n, double s) {
    if (!(s > 0.0 && s < 1.0)) throw DomainError("s must lie in (0,1)");
    if (n != 1 && n != 2) throw DomainError("dimension must be 1 or 2");
    if (s < 0.1 || s > 0.9)
        std::cerr << "warning: s=" << s << " is outside [0.1, 0.9]; quadrature accuracy degrades\n";
    double value = std::pow(4.0, s) * std::tgamma(n / 2.0 + s) /
                   (std::pow(std::numbers::pi, n / 2.0) * std::abs(std::tgamma(-s)));
    return FracConstant{n, s, value};
}

Eigen::VectorXd tail_weights(const Grid& grid, double s) {
    const double C = frac_constant(grid.dim(), s).value;
    const Eigen::Index n = grid.n_nodes();
    Eigen::VectorXd t(n);
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < n; ++i) t[i] = C * quad::tail_integral(grid, s, grid.pos[i]);
    return t;
}

namespace {

int default_moment_offsets(int dim) { return dim == 1 ? 8 : 4; }

// Shared row kernel: fills one operator row (plain fractional part + optional
// magnetic drift), excluding tail and mass/potential diagonal terms which the
// callers add.  Column order is fixed (ascending j) so output is deterministic
// and independent of how rows are scheduled across threads.
void fill_row(const Grid& grid, double s, double C, int i, const MagneticPotential* A,
              double kappa_over_h2, Eigen::VectorXd& row) {
    const Eigen::Index n = grid.n_nodes();
    const int dim = grid.dim();
    const double npow = dim + 2.0 * s;
    const double drift_pref = 2.0 * std::sqrt(C / 2.0);
    const double gpow = dim / 2.0 + s + 1.0;
    double diag = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        const double d = grid.dist(i, static_cast<int>(j));
        const double ker = C * std::pow(d, -npow) * grid.w;
        row[j] -= ker;
        diag += ker;
        if (A) {
            auto yx = grid.delta(i, static_cast<int>(j));  // y_j - x_i
            double adot = 0.5 * (A->values.comp[0](i, j) - A->values.comp[0](j, i)) * yx[0];
            if (dim == 2)
                adot += 0.5 * (A->values.comp[1](i, j) - A->values.comp[1](j, i)) * yx[1];
            if (adot != 0.0) {
                const double drift = drift_pref * adot * std::pow(d, -gpow) * grid.w;
                row[j] -= drift;
                diag += drift;
            }
        }
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
}

OperatorMatrix assemble_impl(const Grid& grid, double s, const MagneticPotential* A,
                             const ScalarField* q, AssemblyOptions opts,
                             const std::vector<int>* row_nodes) {
    const double C = frac_constant(grid.dim(), s).value;
    OperatorMatrix M;
    M.C = C;
    M.s = s;
    M.kind = A ? (q ? OperatorKind::MagneticPlusQ : OperatorKind::Magnetic)
               : OperatorKind::FractionalLaplacian;
    M.row_nodes = row_nodes ? *row_nodes : grid.interior_nodes;

    const int nr = static_cast<int>(M.row_nodes.size());
    const Eigen::Index n = grid.n_nodes();
    M.rows = Eigen::MatrixXd::Zero(nr, n);
    M.tail_weight = Eigen::VectorXd::Zero(nr);

    const int p = opts.moment_offsets > 0 ? opts.moment_offsets : default_moment_offsets(grid.dim());
    const double kappa_over_h2 =
        opts.near_corrections
            ? C * quad::near_zone_moment(grid.dim(), s, grid.h, p) / (grid.h * grid.h)
            : 0.0;

    const bool use_A = A && !A->is_zero();
    ScalarField mass;
    if (use_A) mass = mass_term(*A, grid, s);

#pragma omp parallel for schedule(static)
    for (int r = 0; r < nr; ++r) {
        const int i = M.row_nodes[r];
        Eigen::VectorXd row = Eigen::VectorXd::Zero(n);
        fill_row(grid, s, C, i, use_A ? A : nullptr, kappa_over_h2, row);
        if (opts.tail) {
            const double t = C * quad::tail_integral(grid, s, grid.pos[i]);
            M.tail_weight[r] = t;
            row[i] += t;
        }
        if (use_A) row[i] += mass[i];
        if (q) row[i] += (*q)[i];
        M.rows.row(r) = row.transpose();
    }
    return M;
}

}  // namespace

OperatorMatrix assemble_frac_laplacian(const Grid& grid, double s, AssemblyOptions opts,
                                       const std::vector<int>* row_nodes) {
    return assemble_impl(grid, s, nullptr, nullptr, opts, row_nodes);
}

OperatorMatrix assemble_magnetic(const Grid& grid, double s, const MagneticPotential& A,
                                 const ScalarField* q, AssemblyOptions opts,
                                 const std::vector<int>* row_nodes) {
    return assemble_impl(grid, s, &A, q, opts, row_nodes);
}

VectorPairField frac_gradient(const Grid& grid, double s, const ScalarField& u) {
    const double C = frac_constant(grid.dim(), s).value;
    const double pref = std::sqrt(C / 2.0);
    const Eigen::Index n = grid.n_nodes();
    const int dim = grid.dim();
    const double gpow = dim / 2.0 + s + 1.0;
    VectorPairField G(dim, n);
#pragma omp parallel for schedule(static)
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

ScalarField frac_divergence(const Grid& grid, double s, const VectorPairField& P) {
    const double C = frac_constant(grid.dim(), s).value;
    const double pref = std::sqrt(C / 2.0);
    const Eigen::Index n = grid.n_nodes();
    const int dim = grid.dim();
    const double gpow = dim / 2.0 + s + 1.0;
    ScalarField out = ScalarField::Zero(n);
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < n; ++i) {
        double acc = 0;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j == i) continue;
            const double d = grid.dist(static_cast<int>(i), static_cast<int>(j));
            auto yx = grid.delta(static_cast<int>(i), static_cast<int>(j));
            double dot = (P.comp[0](i, j) + P.comp[0](j, i)) * yx[0];
            if (dim == 2) dot += (P.comp[1](i, j) + P.comp[1](j, i)) * yx[1];
            acc += dot * std::pow(d, -gpow);
        }
        out[i] = pref * acc * grid.w;
    }
    return out;
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
#pragma omp parallel for schedule(static)
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

    // Exact contribution of pairs with one point outside the box (u, v, A vanish there).
    Eigen::VectorXd t = tail_weights(grid, s);
    double tail_part = 0;
    for (Eigen::Index i = 0; i < n; ++i) tail_part += u[i] * v[i] * t[i];
    return total + tail_part * grid.w;
}

}  // namespace fmse
