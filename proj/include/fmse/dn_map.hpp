#pragma once

#include <cstdint>
#include <string>

#include "fmse/solver.hpp"

namespace fmse {

/// Bump fields supported strictly inside one exterior window.
struct ExteriorBasis {
    std::string window;  // "W1" or "W2"
    std::vector<ScalarField> fields;
    std::vector<Point> centers;
    std::vector<double> radii;

    int size() const { return static_cast<int>(fields.size()); }
};

ExteriorBasis make_bump_basis(const Grid& grid, const std::string& window,
                              const std::vector<Point>& centers, const std::vector<double>& radii);

struct DnStencil {
    double eps_s = 0.05;
    std::vector<int> mults{-3, -2, -1, 0, 1, 2, 3};
    bool normalize_response = true;  // scale each f to unit linear response on Omega
};

/// DN pairings over exterior bases and their epsilon-derivatives.
struct DnData {
    int dim = 1;
    double s = 0.5;
    int K = 2;
    DnStencil stencil;
    std::vector<double> f_scale;            // applied normalization per W1 basis field
    std::vector<Eigen::MatrixXd> P;         // per stencil point: (nb1 x nb2)
    std::vector<Eigen::MatrixXd> D_meas;    // k = 1..K, high-order central differences
    std::vector<Eigen::MatrixXd> D_lo;      // k = 1..K, minimal 2nd-order stencils
    std::vector<Eigen::MatrixXd> D_direct;  // k = 1..K, cascade route (empty when blind)
    std::vector<double> dual_gap;           // per k, relative measurement/direct gap
    std::uint64_t grid_hash = 0;
    std::uint64_t coeffs_hash = 0;

    int nb1() const { return P.empty() ? 0 : static_cast<int>(P[0].rows()); }
    int nb2() const { return P.empty() ? 0 : static_cast<int>(P[0].cols()); }
};

/// Discrete realization of B_{A,a}[u, v]: operator rows paired against v plus
/// the nonlinear bulk term.  Cached full-row assembly; reused by dn_map and
/// the inversion layer.
class DnEngine {
  public:
    DnEngine(const Grid& grid, double s, const MagneticPotential& A, const Nonlinearity& a,
             const SolverOptions& opts);

    /// B_{A,a}[u, v] for an arbitrary extension v (v = 0 on Omega gives the
    /// canonical class representative).
    double pairing(const ScalarField& u, const ScalarField& v) const;
    /// Linear-part pairing (a-term replaced by c1 u): used for cascade solutions.
    double pairing_linear_operator(const ScalarField& u, const ScalarField& v) const;

    const FactoredOperator& linear_operator() const { return L_; }
    const Grid& grid() const { return grid_; }
    const Nonlinearity& nonlinearity() const { return a_; }

    Solution solve_data(const ScalarField& g) const;  // nonlinear solve, cached operator

  private:
    const Grid& grid_;
    const Nonlinearity& a_;
    SolverOptions opts_;
    OperatorMatrix M0_full_;  // (-Delta)^s_A rows at all nodes, no zeroth-order term
    FactoredOperator L_;      // (-Delta)^s_A + c1
};

double dn_pairing(const MagneticPotential& A, const Nonlinearity& a, const ScalarField& g,
                  const ScalarField& v_ext, const Grid& grid, double s, const SolverOptions& opts);

DnData dn_derivatives(const MagneticPotential& A, const Nonlinearity& a,
                      const ExteriorBasis& basisW1, const ExteriorBasis& basisW2, const Grid& grid,
                      double s, int K, const DnStencil& stencil, const SolverOptions& opts);

bool dn_restriction_equal(const DnData& d1, const DnData& d2, double tol);

void save_dn_data(const DnData& d, const std::string& path, bool blind = true);
DnData load_dn_data(const std::string& path);

std::uint64_t hash_grid(const Grid& grid);

}  // namespace fmse
