#pragma once

#include <Eigen/LU>
#include <memory>

#include "fmse/nonlocal.hpp"

namespace fmse {

struct LinearProblem {
    MagneticPotential A;
    ScalarField q;  // zero outside Omega
    ScalarField F;  // interior source
    ScalarField g;  // exterior data, zero on Omega
};

struct Solution {
    ScalarField u;
    double residual_inf = 0;
    int iterations = 0;
    double contraction_estimate = 0;
};

struct Barrier {
    ScalarField phi;
    ScalarField eta;
    double lambda = 0;
    double C = 0;  // = 1/lambda
    double R = 0;
    double achieved_min = 0;  // min over Omega of (operator applied to phi)
};

struct SolverOptions {
    double tol_linear = 1e-10;
    double tol_picard = 1e-12;
    int max_picard_iters = 200;
    double delta = 0.5;
    double eps0 = 0.4;
    double damping = 1.0;

    void validate() const;
};

/// Interior-block factorization of (-Delta)^s_A + q, reusable across solves
/// with the same operator (Picard steps, cascades, DN stencils, Runge bases).
class FactoredOperator {
  public:
    FactoredOperator(const Grid& grid, double s, const MagneticPotential* A, const ScalarField* q,
                     AssemblyOptions opts = {});

    /// Solve rows(u) = F on interior nodes with u = g on exterior nodes.
    ScalarField solve(const ScalarField& F, const ScalarField& g) const;
    Eigen::VectorXd residual(const ScalarField& u, const ScalarField& F) const;

    const OperatorMatrix& matrix() const { return M_; }
    const Grid& grid() const { return grid_; }

  private:
    const Grid& grid_;
    OperatorMatrix M_;
    Eigen::MatrixXd ext_block_;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
};

Solution solve_linear(const LinearProblem& p, const Grid& grid, double s,
                      const SolverOptions& opts);

Barrier build_barrier(const Grid& grid, double s, const MagneticPotential& A,
                      const ScalarField& q, const DomainSpec& spec);

struct LinfBoundReport {
    double sup_u = 0;
    double bound = 0;
    double margin = 0;
    bool ok = false;
};
LinfBoundReport linf_bound_check(const Solution& sol, const LinearProblem& p,
                                 const Barrier& barrier, double tol = 1e-6);

Solution solve_nonlinear(const MagneticPotential& A, const Nonlinearity& a, const ScalarField& g,
                         const Grid& grid, double s, const SolverOptions& opts);
Solution solve_nonlinear(const FactoredOperator& L, const Nonlinearity& a, const ScalarField& g,
                         const SolverOptions& opts, const ScalarField* v_start = nullptr);

/// Halve the exterior data amplitude on contraction/radius failures; returns
/// the solution and the amplitude factor that converged.
std::pair<Solution, double> solve_nonlinear_adaptive(const MagneticPotential& A,
                                                     const Nonlinearity& a, const ScalarField& g,
                                                     const Grid& grid, double s,
                                                     const SolverOptions& opts,
                                                     int max_halvings = 8);

/// Linearization cascade at epsilon = 0: u^(1) solves the linear problem with
/// exterior data f; for k >= 2 the source is the Bell-polynomial expansion of
/// d^k/de^k a(x, u_e).
std::vector<ScalarField> solve_cascade(const MagneticPotential& A, const Nonlinearity& a,
                                       const ScalarField& f, const Grid& grid, double s, int K,
                                       const SolverOptions& opts);
std::vector<ScalarField> solve_cascade(const FactoredOperator& L, const Nonlinearity& a,
                                       const ScalarField& f, int K, const SolverOptions& opts);

/// Partial Bell polynomial B_{k,m} evaluated on fields u[0] = u^(1), ...
ScalarField partial_bell(int k, int m, const std::vector<ScalarField>& u);

}  // namespace fmse
