#include "fmse/instances.hpp"

#include <cmath>

namespace fmse {

namespace {

Point random_point_in(const Region& r, int dim, std::mt19937_64& rng, double shrink) {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    Point p{0, 0};
    if (r.kind == Region::Kind::Box) {
        for (int d = 0; d < dim; ++d) p[d] = r.center[d] + shrink * r.half[d] * U(rng);
    } else {
        for (;;) {
            double v[2] = {U(rng), U(rng)};
            double n2 = v[0] * v[0] + (dim == 2 ? v[1] * v[1] : 0.0);
            if (n2 <= 1.0) {
                for (int d = 0; d < dim; ++d) p[d] = r.center[d] + shrink * r.radius * v[d];
                break;
            }
        }
    }
    return p;
}

double inner_radius(const Region& r, const Point& p, int dim) {
    if (r.kind == Region::Kind::Ball) {
        double d2 = 0;
        for (int d = 0; d < dim; ++d) d2 += (p[d] - r.center[d]) * (p[d] - r.center[d]);
        return r.radius - std::sqrt(d2);
    }
    double m = std::numeric_limits<double>::infinity();
    for (int d = 0; d < dim; ++d) m = std::min(m, r.half[d] - std::abs(p[d] - r.center[d]));
    return m;
}

}  // namespace

RandomInstance random_admissible_instance(const Grid& grid, double s, std::mt19937_64& rng,
                                          bool strict_g, bool with_F) {
    std::uniform_real_distribution<double> U01(0.0, 1.0);
    const auto& spec = grid.spec;
    RandomInstance inst;

    // Magnetic part: admissible antisymmetric-radial plus a symmetric product.
    Point ca = random_point_in(spec.omega, spec.dim, rng, 0.3);
    double ra = 0.5 * inner_radius(spec.omega, ca, spec.dim);
    MagneticPotential Aa = potential_antisymmetric_radial(grid, 0.5 + U01(rng), ca, ra);
    Point cs = random_point_in(spec.omega, spec.dim, rng, 0.3);
    double rs = 0.5 * inner_radius(spec.omega, cs, spec.dim);
    std::array<double, 2> amp{0.4 * (2 * U01(rng) - 1), 0.4 * (2 * U01(rng) - 1)};
    MagneticPotential As = potential_symmetric_product(grid, amp, cs, rs);
    VectorPairField sum = Aa.values;
    for (int d = 0; d < grid.dim(); ++d) sum.comp[d] += As.values.comp[d];
    inst.A = MagneticPotential::from_values(grid, std::move(sum), false);

    // q: random nonnegative bump, then shift so that m_A + q >= 0 on Omega.
    Point cq = random_point_in(spec.omega, spec.dim, rng, 0.4);
    double rq = 0.6 * inner_radius(spec.omega, cq, spec.dim);
    inst.q = bump(grid, cq, rq, U01(rng));
    for (Eigen::Index i = 0; i < inst.q.size(); ++i)
        if (!grid.interior[i]) inst.q[i] = 0.0;
    ScalarField m = mass_term(inst.A, grid, s);
    double worst = 0;
    for (int i : grid.interior_nodes) worst = std::min(worst, m[i] + inst.q[i]);
    if (worst < 0)
        for (int i : grid.interior_nodes) inst.q[i] += -worst * (1.0 + 1e-6);

    inst.F = ScalarField::Zero(grid.n_nodes());
    if (with_F) {
        Point cf = random_point_in(spec.omega, spec.dim, rng, 0.4);
        double rf = 0.6 * inner_radius(spec.omega, cf, spec.dim);
        ScalarField Fb = bump(grid, cf, rf, U01(rng));
        for (int i : grid.interior_nodes) inst.F[i] = Fb[i];
    }

    inst.g = ScalarField::Zero(grid.n_nodes());
    double gamp = strict_g ? 0.2 + 0.8 * U01(rng) : U01(rng);
    if (strict_g || U01(rng) > 0.3) {
        Point cg = random_point_in(spec.w1, spec.dim, rng, 0.4);
        double rg = 0.6 * inner_radius(spec.w1, cg, spec.dim);
        ScalarField gb = bump(grid, cg, rg, gamp);
        for (Eigen::Index i = 0; i < gb.size(); ++i)
            if (!grid.interior[i]) inst.g[i] = gb[i];
    }
    inst.admissible = true;
    return inst;
}

RandomInstance make_inadmissible_instance(const Grid& grid, double s, std::mt19937_64& rng) {
    RandomInstance inst = random_admissible_instance(grid, s, rng, true);
    // flip the antisymmetric-radial sign: A_{a||}.(y-x) becomes <= 0
    Point c = grid.spec.omega.center;
    double r = 0.5 * grid.spec.omega.circumradius(grid.dim());
    MagneticPotential bad = potential_antisymmetric_radial(grid, -2.0, c, r);
    VectorPairField v = inst.A.values;
    for (int d = 0; d < grid.dim(); ++d) v.comp[d] += bad.values.comp[d];
    inst.A = MagneticPotential::from_values(grid, std::move(v), false);
    inst.admissible = false;
    return inst;
}

std::pair<MagneticPotential, ScalarField> make_gauge_partner(const Grid& grid, double s,
                                                             const MagneticPotential& A,
                                                             const ScalarField& q,
                                                             std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U01(0.0, 1.0);
    Point c = random_point_in(grid.spec.omega, grid.dim(), rng, 0.3);
    double r = 0.5 * inner_radius(grid.spec.omega, c, grid.dim());
    std::array<double, 2> amp{0.3 * (2 * U01(rng) - 1), 0.3 * (2 * U01(rng) - 1)};
    MagneticPotential S = potential_symmetric_product(grid, amp, c, r);

    VectorPairField v = A.values;
    for (int d = 0; d < grid.dim(); ++d) v.comp[d] += S.values.comp[d];
    MagneticPotential A2 = MagneticPotential::from_values(grid, std::move(v), false);

    ScalarField m1 = mass_term(A, grid, s);
    ScalarField m2 = mass_term(A2, grid, s);
    ScalarField q2 = q + m1 - m2;
    for (Eigen::Index i = 0; i < q2.size(); ++i)
        if (!grid.interior[i]) q2[i] = 0.0;
    return {std::move(A2), std::move(q2)};
}

std::vector<int> omega_core_nodes(const Grid& grid, double margin) {
    std::vector<int> core;
    const Region& om = grid.spec.omega;
    for (int i : grid.interior_nodes) {
        if (inner_radius(om, grid.pos[i], grid.dim()) >= margin) core.push_back(i);
    }
    return core;
}

MaxPrincipleReport check_maximum_principle(const Grid& grid, double s, int count,
                                           std::uint64_t seed, const SolverOptions& opts,
                                           bool strict_g, int inadmissible_probes) {
    std::mt19937_64 rng(seed);
    MaxPrincipleReport rep;
    std::vector<int> core = omega_core_nodes(grid, 2.0 * grid.h);

    for (int t = 0; t < count + inadmissible_probes; ++t) {
        bool probe = t >= count;
        RandomInstance inst = probe ? make_inadmissible_instance(grid, s, rng)
                                    : random_admissible_instance(grid, s, rng, strict_g);
        if (!inst.admissible) {
            ++rep.hypothesis_skipped;
            continue;
        }
        LinearProblem p{std::move(inst.A), std::move(inst.q), std::move(inst.F), std::move(inst.g)};
        Solution sol = solve_linear(p, grid, s, opts);

        double scale = std::max(p.F.cwiseAbs().maxCoeff(), p.g.cwiseAbs().maxCoeff());
        double mn = std::numeric_limits<double>::infinity();
        for (int i : grid.interior_nodes) mn = std::min(mn, sol.u[i]);
        ++rep.instances;
        rep.worst_min = std::min(rep.worst_min, mn);
        if (mn < -1e-8 * std::max(scale, 1.0)) ++rep.violations;

        if (strict_g && p.g.cwiseAbs().maxCoeff() > 0) {
            ++rep.strict_instances;
            double cm = std::numeric_limits<double>::infinity();
            for (int i : core) cm = std::min(cm, sol.u[i]);
            rep.worst_core_min = std::min(rep.worst_core_min, cm);
            if (cm <= 0) ++rep.strict_violations;
        }
    }
    return rep;
}

}  // namespace fmse
