#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fmse/geometry.hpp"

namespace fmse {

/// Two-point magnetic potential A(x, y), compactly supported in Omega x Omega.
struct MagneticPotential {
    VectorPairField values;

    static MagneticPotential zero(const Grid& grid) {
        MagneticPotential a;
        a.values = VectorPairField(grid.dim(), grid.n_nodes());
        return a;
    }
    /// Wrap raw pair values; checks the support invariant unless told not to
    /// (tests use unchecked fields to probe the decomposition algebra alone).
    static MagneticPotential from_values(const Grid& grid, VectorPairField v,
                                         bool check_support = true);

    bool is_zero() const;
};

struct PotentialDecomposition {
    VectorPairField A_s, A_a, A_par, A_perp, A_spar, A_apar;
};

PotentialDecomposition decompose(const Grid& grid, const MagneticPotential& A);

/// m_A(x) = (div)^s A_{s||}(x) + int |A(x,y)|^2 dy  (zero outside Omega).
ScalarField mass_term(const MagneticPotential& A, const Grid& grid, double s);

/// Truncated Taylor representation of the nonlinearity a(x, z):
///   a(x,z) = sum_{k=1}^{K} c_k(x) z^k / k!,   c_k = d^k_z a(x, 0),
/// valid for |z| <= R0.  a(x,0) = 0 holds by construction.
struct Nonlinearity {
    int K = 1;
    std::vector<ScalarField> coeff;  // coeff[k-1] = c_k, zero outside Omega
    double R0 = 1.0;

    const ScalarField& c(int k) const { return coeff[k - 1]; }
    bool is_linear() const;
};

Nonlinearity make_nonlinearity(const Grid& grid, std::vector<ScalarField> coeffs, double R0);

ScalarField eval_a(const Nonlinearity& a, const ScalarField& u, const Grid& grid);
ScalarField eval_dz(const Nonlinearity& a, const ScalarField& u, const Grid& grid, int order);

struct GaugeInvariants {
    VectorPairField K_a;  // A_{a||}(x,y)
    ScalarField sigma;    // int |A|^2 dy + (div)^s A_{s||} + q
};

GaugeInvariants gauge_invariants(const MagneticPotential& A, const ScalarField& q,
                                 const Grid& grid, double s);

bool gauge_equivalent(const MagneticPotential& A1, const ScalarField& q1,
                      const MagneticPotential& A2, const ScalarField& q2, const Grid& grid,
                      double s, double tol = 1e-8);

struct AdmissibilityReport {
    bool antisymmetric_sign_ok = false;  // min A_{a||}.(y-x) >= -tol
    bool monotone_ok = false;            // min_x,z m_A + d_z a >= -tol
    bool support_ok = false;
    double worst_pair_sign = 0;
    double worst_monotone = 0;
    double worst_support_leak = 0;
    double monotone_coeff_bound = 0;  // conservative polynomial lower bound (K <= 4)
    bool all_ok() const { return antisymmetric_sign_ok && monotone_ok && support_ok; }
};

AdmissibilityReport check_admissibility(const MagneticPotential& A, const Nonlinearity& a,
                                        const Grid& grid, double s, double tol = 1e-10);

// Analytic presets (all supported in Omega x Omega via interior bump profiles).
MagneticPotential potential_symmetric_product(const Grid& grid, const std::array<double, 2>& amp,
                                              const Point& center, double radius);
MagneticPotential potential_antisymmetric_radial(const Grid& grid, double amp, const Point& center,
                                                 double radius);

}  // namespace fmse
