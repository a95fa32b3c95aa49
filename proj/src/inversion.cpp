#include "fmse/inversion.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <iostream>

namespace fmse {

RungeEngine::RungeEngine(const FactoredOperator& L, const ExteriorBasis& basisW2,
                         double lambda_reg)
    : grid_(L.grid()) {
    const int m = basisW2.size();
    ScalarField zeroF = ScalarField::Zero(grid_.n_nodes());
    for (int j = 0; j < m; ++j) v_.push_back(L.solve(zeroF, basisW2.fields[j]));
    gram_.resize(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            double acc = 0;
            for (int n : grid_.interior_nodes) acc += v_[i][n] * v_[j][n];
            gram_(i, j) = acc * grid_.w;
        }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram_);
    gram_cond_ = es.eigenvalues().maxCoeff() / std::max(es.eigenvalues().minCoeff(), 1e-300);
    lambda_ = lambda_reg * gram_.trace() / m;
    fact_.compute(gram_ + lambda_ * Eigen::MatrixXd::Identity(m, m));
}

RungeSolution RungeEngine::approximate(const ScalarField& target) const {
    const int m = static_cast<int>(v_.size());
    Eigen::VectorXd b(m);
    for (int j = 0; j < m; ++j) {
        double acc = 0;
        for (int n : grid_.interior_nodes) acc += v_[j][n] * target[n];
        b[j] = acc * grid_.w;
    }
    RungeSolution r;
    r.alpha = fact_.solve(b);
    r.lambda = lambda_;
    r.gram_cond = gram_cond_;
    r.ill_conditioned = gram_cond_ > 1e12;
    r.achieved = ScalarField::Zero(grid_.n_nodes());
    for (int j = 0; j < m; ++j) r.achieved += r.alpha[j] * v_[j];
    double num = 0, den = 0;
    for (int n : grid_.interior_nodes) {
        double d = r.achieved[n] - target[n];
        num += d * d;
        den += target[n] * target[n];
    }
    r.misfit = den > 0 ? std::sqrt(num / den) : std::sqrt(num);
    return r;
}

RungeSolution runge_approximate(const MagneticPotential& A, const ScalarField& q,
                                const ScalarField& target, const ExteriorBasis& basisW2,
                                const Grid& grid, double s, double lambda_reg) {
    FactoredOperator L(grid, s, A.is_zero() ? nullptr : &A, &q);
    RungeEngine engine(L, basisW2, lambda_reg);
    RungeSolution r = engine.approximate(target);
    if (r.ill_conditioned)
        std::cerr << "warning: Runge Gram condition estimate " << r.gram_cond
                  << " exceeds 1e12; finite basis saturated\n";
    return r;
}

Eigen::MatrixXd linear_dn_matrix(const MagneticPotential& A, const ScalarField& q,
                                 const ExteriorBasis& basisW1, const ExteriorBasis& basisW2,
                                 const Grid& grid, double s, const SolverOptions& opts) {
    // linear nonlinearity a(x,z) = q z; direct (cascade order 1) route
    Nonlinearity lin = make_nonlinearity(grid, {q}, 1e6);
    DnEngine engine(grid, s, A, lin, opts);
    Eigen::MatrixXd D(basisW1.size(), basisW2.size());
    ScalarField zeroF = ScalarField::Zero(grid.n_nodes());
    for (int i = 0; i < basisW1.size(); ++i) {
        ScalarField u1 = engine.linear_operator().solve(zeroF, basisW1.fields[i]);
        for (int j = 0; j < basisW2.size(); ++j)
            D(i, j) = engine.pairing_linear_operator(u1, basisW2.fields[j]);
    }
    return D;
}

FirstOrderReport verify_first_order(const MagneticPotential& A1, const ScalarField& q1,
                                    const MagneticPotential& A2, const ScalarField& q2,
                                    const ExteriorBasis& basisW1, const ExteriorBasis& basisW2,
                                    const Grid& grid, double s, const SolverOptions& opts,
                                    double tol) {
    Eigen::MatrixXd D1 = linear_dn_matrix(A1, q1, basisW1, basisW2, grid, s, opts);
    Eigen::MatrixXd D2 = linear_dn_matrix(A2, q2, basisW1, basisW2, grid, s, opts);
    FirstOrderReport rep;
    double scale = std::max({D1.cwiseAbs().maxCoeff(), D2.cwiseAbs().maxCoeff(), 1e-300});
    rep.dn_gap = (D1 - D2).cwiseAbs().maxCoeff() / scale;
    rep.gauge_pair = gauge_equivalent(A1, q1, A2, q2, grid, s);
    rep.consistent = rep.gauge_pair ? (rep.dn_gap <= tol) : (rep.dn_gap > 10 * tol);
    return rep;
}

namespace {

struct ReconContext {
    const Grid& grid;
    const FactoredOperator& L;
    const RungeEngine& runge;
    const std::vector<RungeSolution>& targets;  // precomputed Runge fits
    const DnData& dn;
    const std::vector<ScalarField>& f_scaled;   // normalized W1 data
    const std::vector<ScalarField>& u1;         // linear responses per f
};

// Rows of the order-k system for one f: sum_x c_k(x) u1^k(x) v_m(x) w = rho_m.
void build_system(const ReconContext& ctx, int k, const std::vector<ScalarField>& known,
                  int f_index, std::vector<Eigen::VectorXd>& rows, std::vector<double>& rhs,
                  const SolverOptions& opts) {
    const Grid& grid = ctx.grid;
    const auto& in = grid.interior_nodes;
    const int ni = static_cast<int>(in.size());

    // Bell remainder R_{k-1} from the cascade driven by recovered coefficients.
    ScalarField remainder = ScalarField::Zero(grid.n_nodes());
    if (k >= 3) {
        std::vector<ScalarField> uc;
        uc.push_back(ctx.u1[f_index]);
        ScalarField zero_g = ScalarField::Zero(grid.n_nodes());
        for (int ell = 2; ell <= k - 1; ++ell) {
            ScalarField src = ScalarField::Zero(grid.n_nodes());
            for (int m = 2; m <= ell; ++m) {
                ScalarField bell = partial_bell(ell, m, uc);
                for (int i : in) src[i] -= known[m - 2][i] * bell[i];
            }
            uc.push_back(ctx.L.solve(src, zero_g));
        }
        for (int m = 2; m <= k - 1; ++m) {
            ScalarField bell = partial_bell(k, m, uc);
            for (int i : in) remainder[i] += known[m - 2][i] * bell[i];
        }
    }

    const Eigen::MatrixXd& Dk = ctx.dn.D_meas[k - 1];
    for (const RungeSolution& t : ctx.targets) {
        Eigen::VectorXd row(ni);
        for (int c = 0; c < ni; ++c)
            row[c] = std::pow(ctx.u1[f_index][in[c]], k) * t.achieved[in[c]] * grid.w;
        double rho = 0;
        for (int j = 0; j < ctx.dn.nb2(); ++j) rho += t.alpha[j] * Dk(f_index, j);
        for (int i : in) rho -= remainder[i] * t.achieved[i] * grid.w;
        rows.push_back(std::move(row));
        rhs.push_back(rho);
    }
    (void)opts;
}

ScalarField ridge_solve(const Grid& grid, const std::vector<Eigen::VectorXd>& rows,
                        const std::vector<double>& rhs, double lambda_reg) {
    const auto& in = grid.interior_nodes;
    const int ni = static_cast<int>(in.size());
    const int m = static_cast<int>(rows.size());
    Eigen::MatrixXd Amat(m, ni);
    Eigen::VectorXd b(m);
    for (int r = 0; r < m; ++r) {
        Amat.row(r) = rows[r].transpose();
        b[r] = rhs[r];
    }
    Eigen::MatrixXd N = Amat.transpose() * Amat;
    double lam = lambda_reg * N.trace() / ni;
    N += lam * Eigen::MatrixXd::Identity(ni, ni);
    Eigen::VectorXd c = N.ldlt().solve(Amat.transpose() * b);
    ScalarField out = ScalarField::Zero(grid.n_nodes());
    for (int i = 0; i < ni; ++i) out[in[i]] = c[i];
    return out;
}

}  // namespace

ScalarField reconstruct_coefficient(const DnData& dn, int k, const std::vector<ScalarField>& known,
                                    int f_index, const MagneticPotential& A, const ScalarField& q,
                                    const ExteriorBasis& basisW1, const ExteriorBasis& basisW2,
                                    const Grid& grid, double s, const InversionOptions& iopts,
                                    const SolverOptions& opts,
                                    std::vector<std::uint8_t>* mask_out) {
    if (k < 2 || k > dn.K) throw SpecViolation("reconstruction order k outside 2..K");
    if (static_cast<int>(known.size()) != k - 2)
        throw SpecViolation("known coefficients must cover orders 2..k-1");
    if (dn.grid_hash != hash_grid(grid))
        throw BasisMismatch("DN data was produced on a different grid");

    FactoredOperator L(grid, s, A.is_zero() ? nullptr : &A, &q);
    RungeEngine runge(L, basisW2, iopts.lambda_reg);

    ScalarField zeroF = ScalarField::Zero(grid.n_nodes());
    std::vector<ScalarField> f_scaled, u1;
    for (int i = 0; i < basisW1.size(); ++i) {
        f_scaled.push_back(dn.f_scale[i] * basisW1.fields[i]);
        u1.push_back(L.solve(zeroF, f_scaled[i]));
    }

    double u1min = std::numeric_limits<double>::infinity(), u1max = 0;
    for (int i : grid.interior_nodes) {
        u1min = std::min(u1min, u1[f_index][i]);
        u1max = std::max(u1max, std::abs(u1[f_index][i]));
    }
    if (u1min <= iopts.positivity_threshold)
        throw PositivityFailure("u^(1) is not positive on Omega (min " + std::to_string(u1min) +
                                "); choose f >= 0 supported in W1");

    std::vector<RungeSolution> targets;
    for (int i : grid.interior_nodes) {
        ScalarField e = bump(grid, grid.pos[i], iopts.target_radius_cells * grid.h, 1.0);
        targets.push_back(runge.approximate(e));
    }

    ReconContext ctx{grid, L, runge, targets, dn, f_scaled, u1};
    std::vector<Eigen::VectorXd> rows;
    std::vector<double> rhs;
    build_system(ctx, k, known, f_index, rows, rhs, opts);
    ScalarField c = ridge_solve(grid, rows, rhs, iopts.lambda_reg);

    std::vector<std::uint8_t> mask(grid.n_nodes(), 0);
    for (int i : grid.interior_nodes)
        if (u1[f_index][i] >= iopts.mask_theta * u1max) mask[i] = 1;
    for (Eigen::Index i = 0; i < c.size(); ++i)
        if (!mask[i]) c[i] = 0.0;
    if (mask_out) *mask_out = mask;
    return c;
}

ReconstructionResult reconstruct_all(const DnData& dn, const MagneticPotential& A,
                                     const ScalarField& q, int K, const ExteriorBasis& basisW1,
                                     const ExteriorBasis& basisW2, const Grid& grid, double s,
                                     const InversionOptions& iopts, const SolverOptions& opts,
                                     const Nonlinearity* truth) {
    if (K > dn.K) throw SpecViolation("requested order exceeds the DN data order");
    if (dn.grid_hash != hash_grid(grid))
        throw BasisMismatch("DN data was produced on a different grid");
    if (basisW1.size() != dn.nb1() || basisW2.size() != dn.nb2())
        throw BasisMismatch("bases do not match the DN data dimensions");

    FactoredOperator L(grid, s, A.is_zero() ? nullptr : &A, &q);
    RungeEngine runge(L, basisW2, iopts.lambda_reg);

    ScalarField zeroF = ScalarField::Zero(grid.n_nodes());
    std::vector<ScalarField> f_scaled, u1;
    const int nf = iopts.multi_f ? basisW1.size() : 1;
    for (int i = 0; i < basisW1.size(); ++i) {
        f_scaled.push_back(dn.f_scale[i] * basisW1.fields[i]);
        u1.push_back(L.solve(zeroF, f_scaled[i]));
    }

    ReconstructionResult res;
    res.u1_envelope = ScalarField::Zero(grid.n_nodes());
    res.positivity_margin = std::numeric_limits<double>::infinity();
    for (int i : grid.interior_nodes) {
        double env = 0;
        for (int f = 0; f < nf; ++f) env = std::max(env, u1[f][i]);
        res.u1_envelope[i] = env;
        for (int f = 0; f < nf; ++f)
            res.positivity_margin = std::min(res.positivity_margin, u1[f][i]);
    }
    if (res.positivity_margin <= iopts.positivity_threshold)
        throw PositivityFailure("u^(1) not positive on Omega for some datum");

    double env_max = res.u1_envelope.maxCoeff();
    res.mask.assign(grid.n_nodes(), 0);
    for (int i : grid.interior_nodes)
        if (res.u1_envelope[i] >= iopts.mask_theta * env_max) res.mask[i] = 1;

    std::vector<RungeSolution> targets;
    std::vector<double> misfits;
    for (int i : grid.interior_nodes) {
        ScalarField e = bump(grid, grid.pos[i], iopts.target_radius_cells * grid.h, 1.0);
        targets.push_back(runge.approximate(e));
        misfits.push_back(targets.back().misfit);
    }
    std::vector<double> sorted_misfits = misfits;
    std::sort(sorted_misfits.begin(), sorted_misfits.end());
    double median_misfit = sorted_misfits[sorted_misfits.size() / 2];

    ReconContext ctx{grid, L, runge, targets, dn, f_scaled, u1};

    std::vector<ScalarField> known;
    for (int k = 2; k <= K; ++k) {
        res.runge_misfit_median.push_back(median_misfit);
        if (dn.dual_gap.size() >= static_cast<std::size_t>(k) &&
            dn.dual_gap[k - 1] > iopts.max_dual_gap) {
            res.aborted = true;
            res.aborted_at_k = k;
            res.abort_reason = "dual-mode DN gap " + std::to_string(dn.dual_gap[k - 1]) +
                               " exceeds limit at order " + std::to_string(k);
            break;
        }
        if (median_misfit > iopts.max_runge_misfit) {
            res.aborted = true;
            res.aborted_at_k = k;
            res.abort_reason = "Runge misfit median " + std::to_string(median_misfit) +
                               " exceeds limit";
            break;
        }
        std::vector<Eigen::VectorXd> rows;
        std::vector<double> rhs;
        for (int f = 0; f < nf; ++f) build_system(ctx, k, known, f, rows, rhs, opts);
        ScalarField c = ridge_solve(grid, rows, rhs, iopts.lambda_reg);
        for (Eigen::Index i = 0; i < c.size(); ++i)
            if (!res.mask[i]) c[i] = 0.0;
        res.c_hat.push_back(c);
        known.push_back(c);

        if (truth && k <= truth->K) {
            double num = 0, den = 0;
            for (int i : grid.interior_nodes) {
                if (!res.mask[i]) continue;
                double d = c[i] - truth->c(k)[i];
                num += d * d;
                den += truth->c(k)[i] * truth->c(k)[i];
            }
            res.rel_l2_error.push_back(den > 0 ? std::sqrt(num / den) : std::sqrt(num));
        }
    }
    return res;
}

}  // namespace fmse
