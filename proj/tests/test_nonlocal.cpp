#include <numbers>
#include <random>

#include "common.hpp"
#include "fmse/instances.hpp"
#include "fmse/oracles.hpp"

using namespace fmse;
using fmse_test::grid_1d;
using fmse_test::grid_2d;

TEST_CASE("frac_constant: closed form, domain checks") {
    CHECK(frac_constant(1, 0.5).value == doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-14));
    CHECK(frac_constant(1, 0.25).value > 0);
    CHECK(frac_constant(2, 0.75).value > 0);
    CHECK_THROWS_AS(frac_constant(1, 1.0), DomainError);
    CHECK_THROWS_AS(frac_constant(1, 0.0), DomainError);
}

TEST_CASE("assembled operator on a box-wide constant is the pure tail") {
    Grid g = grid_1d(64);
    OperatorMatrix M = assemble_frac_laplacian(g, 0.5);
    ScalarField u = ScalarField::Constant(g.n_nodes(), 3.0);
    Eigen::VectorXd Mu = M.apply(u);
    for (Eigen::Index r = 0; r < Mu.size(); ++r)
        CHECK(Mu[r] == doctest::Approx(3.0 * M.tail_weight[r]).epsilon(1e-11));
}

TEST_CASE("kernel sign structure and tail monotonicity") {
    for (const Grid& g : {grid_1d(48), grid_2d(20)}) {
        OperatorMatrix M = assemble_frac_laplacian(g, 0.6);
        for (Eigen::Index r = 0; r < M.rows.rows(); ++r) {
            for (Eigen::Index c = 0; c < M.rows.cols(); ++c) {
                if (c == M.row_nodes[r]) {
                    CHECK(M.rows(r, c) >= 0);
                } else {
                    CHECK(M.rows(r, c) <= 1e-15);
                }
            }
            double row_sum = M.rows.row(r).sum();
            CHECK(row_sum >= -1e-10);
        }
        // tail grows toward the box boundary
        Eigen::VectorXd t = tail_weights(g, 0.6);
        double t_center = t[g.node_at(g.n1 / 2, g.n1 / 2)];
        double t_edge = t[g.node_at(0, 0)];
        CHECK(t_edge > t_center);
    }
}

TEST_CASE("plain operator matrix is symmetric on the interior block") {
    Grid g = grid_1d(64);
    OperatorMatrix M = assemble_frac_laplacian(g, 0.5);
    const auto& in = g.interior_nodes;
    for (std::size_t a = 0; a < in.size(); ++a)
        for (std::size_t b = 0; b < in.size(); ++b)
            CHECK(M.rows(a, in[b]) == doctest::Approx(M.rows(b, in[a])).epsilon(1e-12));
}

TEST_CASE("Gaussian symbol check at moderate resolution") {
    Grid g = grid_1d(128, 8.0);
    for (double s : {0.25, 0.5, 0.75}) {
        OperatorMatrix M = assemble_frac_laplacian(g, s);
        ScalarField u(g.n_nodes());
        for (Eigen::Index i = 0; i < u.size(); ++i)
            u[i] = std::exp(-g.pos[i][0] * g.pos[i][0]);
        Eigen::VectorXd Mu = M.apply(u);
        for (std::size_t r = 0; r < g.interior_nodes.size(); ++r) {
            double x = g.pos[g.interior_nodes[r]][0];
            double ex = oracle::symbol_gaussian(1, s, std::abs(x));
            CHECK(std::abs(Mu[r] - ex) / std::abs(ex) < 0.05);
        }
    }
}

TEST_CASE("frac_gradient: constants vanish; the pair field is symmetric") {
    Grid g = grid_1d(48);
    VectorPairField Gc = frac_gradient(g, 0.5, ScalarField::Constant(g.n_nodes(), 2.5));
    CHECK(Gc.comp[0].cwiseAbs().maxCoeff() == 0.0);

    ScalarField u = bump(g, {0.1, 0}, 0.7, 1.0);
    VectorPairField G = frac_gradient(g, 0.5, u);
    // the formula is invariant under swapping the pair: both the difference and
    // the direction flip sign
    CHECK((G.comp[0] - G.comp[0].transpose()).cwiseAbs().maxCoeff() == 0.0);
    for (Eigen::Index i = 0; i < g.n_nodes(); ++i) CHECK(G.comp[0](i, i) == 0.0);
}

TEST_CASE("bilinear identity: <grad u, grad u> matches <Lu, u> within 2%") {
    Grid g = grid_1d(128);
    ScalarField u = bump(g, {0.0, 0}, 0.8, 1.0);
    VectorPairField G = frac_gradient(g, 0.5, u);
    double pair_energy = (G.comp[0].array() * G.comp[0].array()).sum() * g.w * g.w;
    Eigen::VectorXd t = tail_weights(g, 0.5);
    for (Eigen::Index i = 0; i < g.n_nodes(); ++i) pair_energy += u[i] * u[i] * t[i] * g.w;

    OperatorMatrix M = assemble_frac_laplacian(g, 0.5);
    Eigen::VectorXd Mu = M.apply(u);
    double strong = 0;
    for (std::size_t r = 0; r < g.interior_nodes.size(); ++r)
        strong += Mu[r] * u[g.interior_nodes[r]] * g.w;
    CHECK(std::abs(pair_energy - strong) / std::abs(strong) < 0.02);
}

TEST_CASE("frac_divergence: zero input, factorization, random adjointness") {
    Grid g = grid_1d(64);
    const double s = 0.5;
    VectorPairField P0(1, g.n_nodes());
    CHECK(frac_divergence(g, s, P0).cwiseAbs().maxCoeff() == 0.0);

    // (div)^s grad^s u equals the bare punctured-midpoint operator rows exactly
    ScalarField u = bump(g, {0.2, 0}, 0.7, 1.0);
    VectorPairField G = frac_gradient(g, s, u);
    ScalarField div = frac_divergence(g, s, G);
    AssemblyOptions bare;
    bare.tail = false;
    bare.near_corrections = false;
    OperatorMatrix Mb = assemble_frac_laplacian(g, s, bare);
    Eigen::VectorXd Mu = Mb.apply(u);
    for (std::size_t r = 0; r < g.interior_nodes.size(); ++r)
        CHECK(std::abs(div[g.interior_nodes[r]] - Mu[r]) < 1e-10);

    std::mt19937_64 rng(17);
    std::normal_distribution<double> N01(0, 1);
    for (int t = 0; t < 20; ++t) {
        VectorPairField P(1, g.n_nodes());
        for (Eigen::Index i = 0; i < g.n_nodes(); ++i)
            for (Eigen::Index j = 0; j < g.n_nodes(); ++j) P.comp[0](i, j) = N01(rng);
        ScalarField v(g.n_nodes());
        for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = N01(rng);
        double lhs = frac_divergence(g, s, P).dot(v) * g.w;
        VectorPairField Gv = frac_gradient(g, s, v);
        double rhs = (P.comp[0].array() * Gv.comp[0].array()).sum() * g.w * g.w;
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
    }
}

TEST_CASE("assemble_magnetic: zero potential reduces to the plain operator exactly") {
    Grid g = grid_1d(48);
    OperatorMatrix M0 = assemble_frac_laplacian(g, 0.5);
    OperatorMatrix Mz = assemble_magnetic(g, 0.5, MagneticPotential::zero(g), nullptr);
    CHECK((M0.rows - Mz.rows).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("assemble_magnetic: drift annihilates constants") {
    Grid g = grid_1d(64);
    MagneticPotential A = potential_antisymmetric_radial(g, 0.7, {0, 0}, 0.7);
    ScalarField q = bump(g, {0, 0}, 0.8, 0.4);
    for (Eigen::Index i = 0; i < q.size(); ++i)
        if (!g.interior[i]) q[i] = 0;
    OperatorMatrix M = assemble_magnetic(g, 0.5, A, &q);
    ScalarField m = mass_term(A, g, 0.5);
    ScalarField one = ScalarField::Constant(g.n_nodes(), 1.0);
    Eigen::VectorXd M1 = M.apply(one);
    for (std::size_t r = 0; r < g.interior_nodes.size(); ++r) {
        int i = g.interior_nodes[r];
        CHECK(M1[r] == doctest::Approx(M.tail_weight[r] + m[i] + q[i]).epsilon(1e-10));
    }
}

TEST_CASE("gauge-equivalent pairs assemble the same operator") {
    Grid g = grid_1d(48);
    std::mt19937_64 rng(23);
    MagneticPotential A = potential_antisymmetric_radial(g, 0.6, {0.1, 0}, 0.6);
    ScalarField q = bump(g, {0, 0}, 0.8, 0.6);
    for (Eigen::Index i = 0; i < q.size(); ++i)
        if (!g.interior[i]) q[i] = 0;
    for (int t = 0; t < 2; ++t) {
        auto [A2, q2] = make_gauge_partner(g, 0.5, A, q, rng);
        OperatorMatrix M1 = assemble_magnetic(g, 0.5, A, &q);
        OperatorMatrix M2 = assemble_magnetic(g, 0.5, A2, &q2);
        CHECK((M1.rows - M2.rows).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("bilinear_energy: degenerate cases, symmetry, weak-strong agreement") {
    Grid g = grid_1d(128);
    MagneticPotential A = potential_antisymmetric_radial(g, 0.5, {0, 0}, 0.7);
    ScalarField zero = ScalarField::Zero(g.n_nodes());
    ScalarField u = bump(g, {0.1, 0}, 0.7, 1.0);
    ScalarField v = bump(g, {-0.2, 0}, 0.6, 0.8);

    CHECK(bilinear_energy(g, 0.5, A, zero, v) == 0.0);
    CHECK(bilinear_energy(g, 0.5, A, u, zero) == 0.0);
    CHECK(bilinear_energy(g, 0.5, A, u, v) ==
          doctest::Approx(bilinear_energy(g, 0.5, A, v, u)).epsilon(1e-10));

    // B[u,u] against <Mu, u> for a bump supported in Omega
    double B = bilinear_energy(g, 0.5, A, u, u);
    OperatorMatrix M = assemble_magnetic(g, 0.5, A, nullptr);
    Eigen::VectorXd Mu = M.apply(u);
    double strong = 0;
    for (std::size_t r = 0; r < g.interior_nodes.size(); ++r)
        strong += Mu[r] * u[g.interior_nodes[r]] * g.w;
    CHECK(std::abs(B - strong) / std::abs(strong) < 0.02);
}
