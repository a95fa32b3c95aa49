#include "fmse/solver.hpp"

#include <cmath>
#include <iostream>

namespace fmse {

void SolverOptions::validate() const {
    if (tol_linear <= 0 || tol_picard <= 0 || max_picard_iters <= 0 || eps0 <= 0 || delta <= 0)
        throw SpecViolation("solver options must be positive");
    if (delta >= 1.0) throw SpecViolation("contraction ball radius delta must satisfy 0 < delta < 1");
    if (damping <= 0 || damping > 1.0) throw SpecViolation("damping must lie in (0, 1]");
}

FactoredOperator::FactoredOperator(const Grid& grid, double s, const MagneticPotential* A,
                                   const ScalarField* q, AssemblyOptions opts)
    : grid_(grid) {
    if (A && !A->is_zero())
        M_ = assemble_magnetic(grid, s, *A, q, opts);
    else
        M_ = assemble_frac_laplacian(grid, s, opts);
    if ((!A || A->is_zero()) && q) {
        for (int r = 0; r < static_cast<int>(M_.row_nodes.size()); ++r)
            M_.rows(r, M_.row_nodes[r]) += (*q)[M_.row_nodes[r]];
        M_.kind = OperatorKind::MagneticPlusQ;
    }

    const auto& in = grid.interior_nodes;
    const auto& ex = grid.exterior_nodes;
    const int ni = static_cast<int>(in.size());
    Eigen::MatrixXd Mi(ni, ni);
    ext_block_.resize(ni, static_cast<Eigen::Index>(ex.size()));
    for (int r = 0; r < ni; ++r) {
        for (int c = 0; c < ni; ++c) Mi(r, c) = M_.rows(r, in[c]);
        for (std::size_t c = 0; c < ex.size(); ++c) ext_block_(r, c) = M_.rows(r, ex[c]);
    }
    lu_.compute(Mi);
    if (lu_.rcond() < 1e-14)
        throw SingularSystem("interior operator block is numerically singular");
}

ScalarField FactoredOperator::solve(const ScalarField& F, const ScalarField& g) const {
    const auto& in = grid_.interior_nodes;
    const auto& ex = grid_.exterior_nodes;
    Eigen::VectorXd ge(static_cast<Eigen::Index>(ex.size()));
    for (std::size_t c = 0; c < ex.size(); ++c) ge[c] = g[ex[c]];
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(in.size()));
    for (std::size_t r = 0; r < in.size(); ++r) rhs[r] = F[in[r]];
    rhs -= ext_block_ * ge;
    Eigen::VectorXd ui = lu_.solve(rhs);
    ScalarField u = g;
    for (std::size_t r = 0; r < in.size(); ++r) u[in[r]] = ui[r];
    return u;
}

Eigen::VectorXd FactoredOperator::residual(const ScalarField& u, const ScalarField& F) const {
    Eigen::VectorXd r = M_.rows * u;
    for (std::size_t k = 0; k < grid_.interior_nodes.size(); ++k) r[k] -= F[grid_.interior_nodes[k]];
    return r;
}

namespace {

double min_sigma_omega(const Grid& grid, double s, const MagneticPotential& A,
                       const ScalarField& q) {
    ScalarField m = A.is_zero() ? ScalarField::Zero(grid.n_nodes()) : mass_term(A, grid, s);
    double mn = std::numeric_limits<double>::infinity();
    for (int i : grid.interior_nodes) mn = std::min(mn, m[i] + q[i]);
    return mn;
}

}  // namespace

Solution solve_linear(const LinearProblem& p, const Grid& grid, double s,
                      const SolverOptions& opts) {
    opts.validate();
    for (int i : grid.interior_nodes)
        if (p.g[i] != 0.0) throw SpecViolation("exterior data g must vanish on Omega nodes");
    if (min_sigma_omega(grid, s, p.A, p.q) < -1e-10)
        std::cerr << "warning: min over Omega of (m_A + q) is negative; "
                     "discrete solvability is not guaranteed by the maximum principle\n";

    FactoredOperator L(grid, s, p.A.is_zero() ? nullptr : &p.A, &p.q);
    Solution sol;
    sol.u = L.solve(p.F, p.g);
    sol.residual_inf = L.residual(sol.u, p.F).cwiseAbs().maxCoeff();
    sol.iterations = 1;
    if (sol.residual_inf > opts.tol_linear)
        std::cerr << "warning: linear residual " << sol.residual_inf << " exceeds tol_linear\n";
    return sol;
}

Barrier build_barrier(const Grid& grid, double s, const MagneticPotential& A,
                      const ScalarField& q, const DomainSpec& spec) {
    Cutoff cut = cutoff_eta(grid, spec);
    const double C = frac_constant(grid.dim(), s).value;
    Barrier b;
    b.eta = cut.eta;
    b.R = cut.R;
    b.lambda = quad::barrier_lambda(grid.dim(), s, C, cut.R);
    b.C = 1.0 / b.lambda;
    b.phi = cut.eta / b.lambda;

    FactoredOperator L(grid, s, A.is_zero() ? nullptr : &A, &q);
    Eigen::VectorXd Mphi = L.matrix().apply(b.phi);
    b.achieved_min = Mphi.minCoeff();
    if (b.achieved_min < 1.0 - 0.05)
        throw BarrierFailure("barrier verification min (-Delta)^s_A phi = " +
                             std::to_string(b.achieved_min) + " misses 1 by more than 5%");
    return b;
}

LinfBoundReport linf_bound_check(const Solution& sol, const LinearProblem& p,
                                 const Barrier& barrier, double tol) {
    LinfBoundReport r;
    r.sup_u = sol.u.cwiseAbs().maxCoeff();
    double sup_g = 0, sup_F = 0;
    for (Eigen::Index i = 0; i < sol.u.size(); ++i) sup_g = std::max(sup_g, std::abs(p.g[i]));
    for (Eigen::Index i = 0; i < p.F.size(); ++i) sup_F = std::max(sup_F, std::abs(p.F[i]));
    r.bound = sup_g + barrier.C * sup_F;
    r.margin = r.bound + tol - r.sup_u;
    r.ok = r.margin >= 0;
    return r;
}

ScalarField partial_bell(int k, int m, const std::vector<ScalarField>& u) {
    if (m == 0) {
        ScalarField f = ScalarField::Zero(u.at(0).size());
        if (k == 0) f.array() = 1.0;
        return f;
    }
    if (k < m) return ScalarField::Zero(u.at(0).size());
    // B_{k,m} = sum_{j=1}^{k-m+1} C(k-1, j-1) u_j B_{k-j, m-1}
    ScalarField acc = ScalarField::Zero(u.at(0).size());
    for (int j = 1; j <= k - m + 1; ++j) {
        double binom = 1.0;
        for (int t = 1; t <= j - 1; ++t) binom *= static_cast<double>(k - t) / t;
        ScalarField inner = partial_bell(k - j, m - 1, u);
        acc.array() += binom * u.at(j - 1).array() * inner.array();
    }
    return acc;
}

Solution solve_nonlinear(const FactoredOperator& L, const Nonlinearity& a, const ScalarField& g,
                         const SolverOptions& opts, const ScalarField* v_start) {
    opts.validate();
    const Grid& grid = L.grid();
    Solution sol;
    ScalarField u0 = L.solve(ScalarField::Zero(grid.n_nodes()), g);
    ScalarField v = v_start ? *v_start : ScalarField::Zero(grid.n_nodes());
    ScalarField zero_g = ScalarField::Zero(grid.n_nodes());

    double prev_dv = -1.0;
    int bad_streak = 0;
    sol.contraction_estimate = 0.0;
    int it = 0;
    for (; it < opts.max_picard_iters; ++it) {
        ScalarField u = u0 + v;
        ScalarField au = eval_a(a, u, grid);  // throws RadiusExceeded past R0
        ScalarField rhs = ScalarField::Zero(grid.n_nodes());
        for (int i : grid.interior_nodes) rhs[i] = -(au[i] - a.c(1)[i] * u[i]);
        ScalarField v_next = L.solve(rhs, zero_g);
        if (opts.damping < 1.0) v_next = (1.0 - opts.damping) * v + opts.damping * v_next;
        double dv = (v_next - v).cwiseAbs().maxCoeff();
        v = v_next;
        if (prev_dv > 0) {
            double ratio = dv / prev_dv;
            sol.contraction_estimate = std::max(sol.contraction_estimate, ratio);
            bad_streak = (ratio >= 1.0) ? bad_streak + 1 : 0;
            if (bad_streak >= 3)
                throw ContractionFailure("Picard iteration is not contracting",
                                         0.5 * g.cwiseAbs().maxCoeff());
        }
        prev_dv = dv;
        if (dv <= opts.tol_picard) {
            ++it;
            break;
        }
    }
    if (it >= opts.max_picard_iters)
        throw ContractionFailure("Picard iteration exceeded max_picard_iters",
                                 0.5 * g.cwiseAbs().maxCoeff());

    sol.u = u0 + v;
    sol.iterations = it;
    // residual of the nonlinear equation: (-Delta)^s_A u + a(x, u) = 0 in Omega
    ScalarField au = eval_a(a, sol.u, grid);
    ScalarField c1u = ScalarField::Zero(grid.n_nodes());
    for (int i : grid.interior_nodes) c1u[i] = a.c(1)[i] * sol.u[i];
    Eigen::VectorXd r = L.matrix().apply(sol.u);
    double rinf = 0;
    for (std::size_t k = 0; k < grid.interior_nodes.size(); ++k) {
        int i = grid.interior_nodes[k];
        rinf = std::max(rinf, std::abs(r[k] - c1u[i] + au[i]));
    }
    sol.residual_inf = rinf;
    return sol;
}

Solution solve_nonlinear(const MagneticPotential& A, const Nonlinearity& a, const ScalarField& g,
                         const Grid& grid, double s, const SolverOptions& opts) {
    ScalarField q = a.c(1);
    FactoredOperator L(grid, s, A.is_zero() ? nullptr : &A, &q);
    return solve_nonlinear(L, a, g, opts);
}

std::pair<Solution, double> solve_nonlinear_adaptive(const MagneticPotential& A,
                                                     const Nonlinearity& a, const ScalarField& g,
                                                     const Grid& grid, double s,
                                                     const SolverOptions& opts, int max_halvings) {
    ScalarField q = a.c(1);
    FactoredOperator L(grid, s, A.is_zero() ? nullptr : &A, &q);
    double factor = 1.0;
    for (int k = 0; k <= max_halvings; ++k) {
        try {
            return {solve_nonlinear(L, a, factor * g, opts), factor};
        } catch (const ContractionFailure&) {
            factor *= 0.5;
        } catch (const RadiusExceeded&) {
            factor *= 0.5;
        }
    }
    throw ContractionFailure("no converging amplitude found after halvings", 0.0);
}

std::vector<ScalarField> solve_cascade(const FactoredOperator& L, const Nonlinearity& a,
                                       const ScalarField& f, int K, const SolverOptions& opts) {
    opts.validate();
    if (K < 1 || K > a.K) throw SpecViolation("cascade order K must satisfy 1 <= K <= a.K");
    const Grid& grid = L.grid();
    std::vector<ScalarField> u;
    u.push_back(L.solve(ScalarField::Zero(grid.n_nodes()), f));
    ScalarField zero_g = ScalarField::Zero(grid.n_nodes());
    for (int k = 2; k <= K; ++k) {
        ScalarField src = ScalarField::Zero(grid.n_nodes());
        for (int m = 2; m <= k; ++m) {
            ScalarField bell = partial_bell(k, m, u);
            for (int i : grid.interior_nodes) src[i] -= a.c(m)[i] * bell[i];
        }
        u.push_back(L.solve(src, zero_g));
    }
    return u;
}

std::vector<ScalarField> solve_cascade(const MagneticPotential& A, const Nonlinearity& a,
                                       const ScalarField& f, const Grid& grid, double s, int K,
                                       const SolverOptions& opts) {
    ScalarField q = a.c(1);
    FactoredOperator L(grid, s, A.is_zero() ? nullptr : &A, &q);
    return solve_cascade(L, a, f, K, opts);
}

}  // namespace fmse
