#include "fmse/potentials.hpp"

#include <cmath>

#include "fmse/nonlocal.hpp"

namespace fmse {

MagneticPotential MagneticPotential::from_values(const Grid& grid, VectorPairField v,
                                                 bool check_support) {
    const Eigen::Index n = grid.n_nodes();
    if (v.size() != n || v.dim != grid.dim())
        throw SpecViolation("pair field size does not match the grid");
    if (check_support) {
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) {
                if (grid.interior[i] && grid.interior[j]) continue;
                if (v.norm2(i, j) != 0.0)
                    throw SpecViolation("magnetic potential leaks outside Omega x Omega");
            }
    }
    for (int d = 0; d < v.dim; ++d)
        if (!v.comp[d].allFinite()) throw SpecViolation("magnetic potential has non-finite entries");
    MagneticPotential a;
    a.values = std::move(v);
    return a;
}

bool MagneticPotential::is_zero() const {
    for (int d = 0; d < values.dim; ++d)
        if (values.comp[d].cwiseAbs().maxCoeff() != 0.0) return false;
    return true;
}

PotentialDecomposition decompose(const Grid& grid, const MagneticPotential& A) {
    const Eigen::Index n = grid.n_nodes();
    const int dim = grid.dim();
    PotentialDecomposition d;
    for (auto* f : {&d.A_s, &d.A_a, &d.A_par, &d.A_perp, &d.A_spar, &d.A_apar})
        *f = VectorPairField(dim, n);

    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            std::array<double, 2> a{A.values.comp[0](i, j), dim == 2 ? A.values.comp[1](i, j) : 0.0};
            std::array<double, 2> at{A.values.comp[0](j, i), dim == 2 ? A.values.comp[1](j, i) : 0.0};
            std::array<double, 2> as{0.5 * (a[0] + at[0]), 0.5 * (a[1] + at[1])};
            std::array<double, 2> aa{a[0] - as[0], a[1] - as[1]};

            // x - y convention of the parallel projector; at the diagonal A_par := A.
            auto xy = grid.delta(j, i);  // x_i - x_j
            double r2 = xy[0] * xy[0] + xy[1] * xy[1];
            std::array<double, 2> apar, aspar, aapar;
            if (i == j || r2 == 0.0) {
                apar = a;
                aspar = as;
                aapar = aa;
            } else {
                auto proj = [&](const std::array<double, 2>& v) {
                    double c = (v[0] * xy[0] + v[1] * xy[1]) / r2;
                    return std::array<double, 2>{c * xy[0], c * xy[1]};
                };
                apar = proj(a);
                aspar = proj(as);
                aapar = proj(aa);
            }
            for (int c = 0; c < dim; ++c) {
                d.A_s.comp[c](i, j) = as[c];
                d.A_a.comp[c](i, j) = aa[c];
                d.A_par.comp[c](i, j) = apar[c];
                d.A_perp.comp[c](i, j) = a[c] - apar[c];
                d.A_spar.comp[c](i, j) = aspar[c];
                d.A_apar.comp[c](i, j) = aapar[c];
            }
        }
    }
    return d;
}

ScalarField mass_term(const MagneticPotential& A, const Grid& grid, double s) {
    const Eigen::Index n = grid.n_nodes();
    ScalarField m = ScalarField::Zero(n);
    if (A.is_zero()) return m;

    // A_{s||} pair field, then its fractional divergence.
    VectorPairField aspar(grid.dim(), n);
    const int dim = grid.dim();
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i == j) {
                for (int c = 0; c < dim; ++c)
                    aspar.comp[c](i, j) = A.values.comp[c](i, j);
                continue;
            }
            auto xy = grid.delta(j, i);
            double r2 = xy[0] * xy[0] + xy[1] * xy[1];
            double sx = 0.5 * (A.values.comp[0](i, j) + A.values.comp[0](j, i));
            double sy = dim == 2 ? 0.5 * (A.values.comp[1](i, j) + A.values.comp[1](j, i)) : 0.0;
            double c = (sx * xy[0] + sy * xy[1]) / r2;
            aspar.comp[0](i, j) = c * xy[0];
            if (dim == 2) aspar.comp[1](i, j) = c * xy[1];
        }
    m = frac_divergence(grid, s, aspar);

    for (Eigen::Index i = 0; i < n; ++i) {
        double q = 0;
        for (Eigen::Index j = 0; j < n; ++j) q += A.values.norm2(i, j);
        m[i] += q * grid.w;
    }
    if (!m.allFinite()) throw NumericalOverflow("mass term quadrature diverged");
    return m;
}

bool Nonlinearity::is_linear() const {
    for (int k = 2; k <= K; ++k)
        if (coeff[k - 1].cwiseAbs().maxCoeff() != 0.0) return false;
    return true;
}

Nonlinearity make_nonlinearity(const Grid& grid, std::vector<ScalarField> coeffs, double R0) {
    if (coeffs.empty()) throw SpecViolation("nonlinearity needs at least the order-1 coefficient");
    if (R0 <= 0) throw SpecViolation("validity radius R0 must be positive");
    Nonlinearity a;
    a.K = static_cast<int>(coeffs.size());
    a.R0 = R0;
    for (auto& c : coeffs) {
        if (c.size() != grid.n_nodes()) throw SpecViolation("coefficient field size mismatch");
        // coefficients live on Omega
        for (Eigen::Index i = 0; i < c.size(); ++i)
            if (!grid.interior[i]) c[i] = 0.0;
    }
    a.coeff = std::move(coeffs);
    return a;
}

namespace {
double sup_on_omega(const ScalarField& u, const Grid& grid) {
    double m = 0;
    for (int i : grid.interior_nodes) m = std::max(m, std::abs(u[i]));
    return m;
}
}  // namespace

ScalarField eval_a(const Nonlinearity& a, const ScalarField& u, const Grid& grid) {
    if (sup_on_omega(u, grid) > a.R0)
        throw RadiusExceeded("field exceeds the nonlinearity validity radius R0");
    ScalarField out = ScalarField::Zero(u.size());
    double kfact = 1.0;
    for (int k = 1; k <= a.K; ++k) {
        kfact *= k;
        for (int i : grid.interior_nodes) out[i] += a.c(k)[i] * std::pow(u[i], k) / kfact;
    }
    return out;
}

ScalarField eval_dz(const Nonlinearity& a, const ScalarField& u, const Grid& grid, int order) {
    if (order < 1 || order > a.K) throw SpecViolation("derivative order outside 1..K");
    if (sup_on_omega(u, grid) > a.R0)
        throw RadiusExceeded("field exceeds the nonlinearity validity radius R0");
    ScalarField out = ScalarField::Zero(u.size());
    for (int k = order; k <= a.K; ++k) {
        double fact = 1.0;
        for (int m = 2; m <= k - order; ++m) fact *= m;
        for (int i : grid.interior_nodes)
            out[i] += a.c(k)[i] * std::pow(u[i], k - order) / fact;
    }
    return out;
}

GaugeInvariants gauge_invariants(const MagneticPotential& A, const ScalarField& q,
                                 const Grid& grid, double s) {
    GaugeInvariants g;
    const Eigen::Index n = grid.n_nodes();
    g.K_a = VectorPairField(grid.dim(), n);
    const int dim = grid.dim();
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i == j) continue;
            auto xy = grid.delta(j, i);
            double r2 = xy[0] * xy[0] + xy[1] * xy[1];
            double ax = 0.5 * (A.values.comp[0](i, j) - A.values.comp[0](j, i));
            double ay = dim == 2 ? 0.5 * (A.values.comp[1](i, j) - A.values.comp[1](j, i)) : 0.0;
            double c = (ax * xy[0] + ay * xy[1]) / r2;
            g.K_a.comp[0](i, j) = c * xy[0];
            if (dim == 2) g.K_a.comp[1](i, j) = c * xy[1];
        }
    g.sigma = mass_term(A, grid, s);
    for (Eigen::Index i = 0; i < n; ++i) g.sigma[i] += q[i];
    return g;
}

bool gauge_equivalent(const MagneticPotential& A1, const ScalarField& q1,
                      const MagneticPotential& A2, const ScalarField& q2, const Grid& grid,
                      double s, double tol) {
    GaugeInvariants g1 = gauge_invariants(A1, q1, grid, s);
    GaugeInvariants g2 = gauge_invariants(A2, q2, grid, s);
    double dk = 0;
    for (int d = 0; d < grid.dim(); ++d)
        dk = std::max(dk, (g1.K_a.comp[d] - g2.K_a.comp[d]).cwiseAbs().maxCoeff());
    if (dk > tol) return false;
    double ds = 0;
    for (int i : grid.interior_nodes) ds = std::max(ds, std::abs(g1.sigma[i] - g2.sigma[i]));
    return ds <= tol;
}

AdmissibilityReport check_admissibility(const MagneticPotential& A, const Nonlinearity& a,
                                        const Grid& grid, double s, double tol) {
    AdmissibilityReport rep;
    const Eigen::Index n = grid.n_nodes();
    const int dim = grid.dim();

    // (i) A_{a||}(x,y).(y-x) = A_a(x,y).(y-x) >= 0 over pairs.
    double worst = 0;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i == j) continue;
            auto yx = grid.delta(i, j);  // y_j - x_i
            double ax = 0.5 * (A.values.comp[0](i, j) - A.values.comp[0](j, i));
            double v = ax * yx[0];
            if (dim == 2) v += 0.5 * (A.values.comp[1](i, j) - A.values.comp[1](j, i)) * yx[1];
            worst = std::min(worst, v);
        }
    rep.worst_pair_sign = worst;
    rep.antisymmetric_sign_ok = worst >= -tol;

    // (iii) support containment
    double leak = 0;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            if (grid.interior[i] && grid.interior[j]) continue;
            leak = std::max(leak, std::sqrt(A.values.norm2(i, j)));
        }
    rep.worst_support_leak = leak;
    rep.support_ok = leak == 0.0;

    // (ii) m_A(x) + d_z a(x,z) >= 0 on Omega, |z| <= R0; 101-point sampling plus a
    // conservative per-node coefficient bound for K <= 4.
    ScalarField m = mass_term(A, grid, s);
    double worst2 = 0;
    const int NZ = 101;
    for (int i : grid.interior_nodes) {
        double node_min = std::numeric_limits<double>::infinity();
        for (int t = 0; t < NZ; ++t) {
            double z = -a.R0 + 2.0 * a.R0 * t / (NZ - 1);
            double dz = 0;
            double fact = 1.0;
            for (int k = 1; k <= a.K; ++k) {
                if (k >= 2) fact *= (k - 1);
                dz += a.c(k)[i] * std::pow(z, k - 1) / fact;
            }
            node_min = std::min(node_min, dz);
        }
        worst2 = std::min(worst2, m[i] + node_min);
    }
    rep.worst_monotone = worst2;
    rep.monotone_ok = worst2 >= -tol;

    if (a.K <= 4) {
        double bound = std::numeric_limits<double>::infinity();
        for (int i : grid.interior_nodes) {
            double b = a.c(1)[i];
            double fact = 1.0;
            for (int k = 2; k <= a.K; ++k) {
                fact *= (k - 1);
                double mag = std::pow(a.R0, k - 1) / fact;
                if (k % 2 == 0)
                    b -= std::abs(a.c(k)[i]) * mag;  // odd power of z: both signs reachable
                else
                    b += std::min(0.0, a.c(k)[i]) * mag;  // even power: z^{k-1} in [0, R0^{k-1}]
            }
            bound = std::min(bound, m[i] + b);
        }
        rep.monotone_coeff_bound = bound;
    }
    return rep;
}

MagneticPotential potential_symmetric_product(const Grid& grid, const std::array<double, 2>& amp,
                                              const Point& center, double radius) {
    ScalarField chi = bump(grid, center, radius, 1.0);
    for (Eigen::Index i = 0; i < grid.n_nodes(); ++i)
        if (!grid.interior[i]) chi[i] = 0.0;
    VectorPairField v(grid.dim(), grid.n_nodes());
    for (int d = 0; d < grid.dim(); ++d)
        v.comp[d] = amp[d] * (chi * chi.transpose());
    return MagneticPotential::from_values(grid, std::move(v));
}

MagneticPotential potential_antisymmetric_radial(const Grid& grid, double amp, const Point& center,
                                                 double radius) {
    ScalarField chi = bump(grid, center, radius, 1.0);
    for (Eigen::Index i = 0; i < grid.n_nodes(); ++i)
        if (!grid.interior[i]) chi[i] = 0.0;
    const Eigen::Index n = grid.n_nodes();
    VectorPairField v(grid.dim(), n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            if (chi[i] == 0.0 || chi[j] == 0.0) continue;
            auto yx = grid.delta(i, j);
            for (int d = 0; d < grid.dim(); ++d)
                v.comp[d](i, j) = amp * chi[i] * chi[j] * yx[d];
        }
    return MagneticPotential::from_values(grid, std::move(v));
}

}  // namespace fmse
