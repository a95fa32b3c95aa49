#include "common.hpp"

#include "fmse/oracles.hpp"

using namespace fmse;
using fmse_test::grid_1d;
using fmse_test::grid_2d;

TEST_CASE("build_grid 1D: node classification matches point-in-set counting") {
    Grid g = grid_1d(64);
    CHECK(g.h == doctest::Approx(0.125).epsilon(1e-14));
    int count = 0;
    for (int i = 0; i < 64; ++i) {
        double x = -4.0 + (i + 0.5) * g.h;
        if (x > -1.0 && x < 1.0) ++count;
    }
    CHECK(static_cast<int>(g.interior_nodes.size()) == count);
    CHECK(count == 16);
}

TEST_CASE("build_grid rejects a window intersecting Omega") {
    DomainSpec spec;
    spec.dim = 1;
    spec.box_lo = {-4, 0};
    spec.box_hi = {4, 0};
    spec.omega = Region::box({0, 0}, {1.0, 0});
    spec.w1 = Region::box({1.0, 0}, {1.0, 0});  // (0, 2) overlaps Omega
    spec.w2 = Region::box({-2, 0}, {0.5, 0});
    CHECK_THROWS_AS(build_grid(spec, 64), SpecViolation);
}

TEST_CASE("build_grid rejects Omega touching the box boundary") {
    DomainSpec spec;
    spec.dim = 1;
    spec.box_lo = {-1, 0};
    spec.box_hi = {1, 0};
    spec.omega = Region::box({0, 0}, {1.0, 0});
    spec.w1 = Region::box({0.5, 0}, {0.1, 0});
    spec.w2 = Region::box({-0.5, 0}, {0.1, 0});
    CHECK_THROWS_AS(build_grid(spec, 64), SpecViolation);
}

TEST_CASE("build_grid 2D: interior count equals brute-force point-in-ball count") {
    DomainSpec spec;
    spec.dim = 2;
    spec.box_lo = {-2, -2};
    spec.box_hi = {2, 2};
    spec.omega = Region::ball({0, 0}, 1.0);
    spec.w1 = Region::box({1.5, 0}, {0.2, 0.5});
    spec.w2 = Region::box({-1.5, 0}, {0.2, 0.5});
    Grid g = build_grid(spec, 32);
    int count = 0;
    for (int ix = 0; ix < 32; ++ix)
        for (int iy = 0; iy < 32; ++iy) {
            double x = -2 + (ix + 0.5) * g.h, y = -2 + (iy + 0.5) * g.h;
            if (x * x + y * y < 1.0) ++count;
        }
    CHECK(static_cast<int>(g.interior_nodes.size()) == count);
}

TEST_CASE("node classification is a partition and weights sum to the box volume") {
    for (const Grid& g : {grid_1d(32), grid_2d(24)}) {
        CHECK(g.interior_nodes.size() + g.exterior_nodes.size() ==
              static_cast<std::size_t>(g.n_nodes()));
        for (Eigen::Index i = 0; i < g.n_nodes(); ++i)
            if (g.in_w1[i] || g.in_w2[i]) CHECK(!g.interior[i]);
        double vol = g.w * g.n_nodes();
        double exact = 1.0;
        for (int d = 0; d < g.dim(); ++d) exact *= g.spec.box_hi[d] - g.spec.box_lo[d];
        CHECK(vol == doctest::Approx(exact).epsilon(1e-13));
    }
}

TEST_CASE("bump: zero amplitude, sup location, support") {
    Grid g = grid_1d(64);
    CHECK(bump(g, {2.0, 0}, 0.4, 0.0).cwiseAbs().maxCoeff() == 0.0);

    ScalarField f = bump(g, {2.0, 0}, 0.4, 1.0);
    Eigen::Index argmax;
    f.maxCoeff(&argmax);
    double best = 1e9;
    Eigen::Index nearest = 0;
    for (Eigen::Index i = 0; i < g.n_nodes(); ++i) {
        double d = std::abs(g.pos[i][0] - 2.0);
        if (d < best) {
            best = d;
            nearest = i;
        }
    }
    CHECK(argmax == nearest);
    CHECK(f.maxCoeff() <= 1.0);
    CHECK(f.maxCoeff() > 0.9);
    for (Eigen::Index i = 0; i < g.n_nodes(); ++i)
        if (std::abs(g.pos[i][0] - 2.0) >= 0.4) CHECK(f[i] == 0.0);

    CHECK_THROWS_AS(bump(g, {3.9, 0}, 0.4, 1.0), SpecViolation);
}

TEST_CASE("bump mass matches the high-resolution quadrature oracle within 1%") {
    Grid g = grid_1d(256);
    ScalarField f = bump(g, {0.0, 0}, 0.8, 1.3);
    double mass = f.sum() * g.w;
    double exact = oracle::bump_mass(1, {0, 0}, 0.8, 1.3);
    CHECK(std::abs(mass - exact) / exact < 0.01);
}

TEST_CASE("bump is nonnegative and window-centered bumps avoid Omega") {
    Grid g = grid_1d(96);
    ScalarField f = bump(g, {2.0, 0}, 0.45, 0.7);
    CHECK(f.minCoeff() >= 0.0);
    for (int i : g.interior_nodes) CHECK(f[i] == 0.0);
}

TEST_CASE("cutoff_eta: plateau on Omega, zero at corners, monotone radial decay") {
    for (const Grid& g : {grid_1d(96), grid_2d(32)}) {
        Cutoff c = cutoff_eta(g, g.spec);
        for (int i : g.interior_nodes) CHECK(c.eta[i] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(c.eta[0] == 0.0);
        CHECK(c.eta[g.n_nodes() - 1] == 0.0);
        CHECK(c.eta.minCoeff() >= 0.0);
        CHECK(c.eta.maxCoeff() <= 1.0);
        std::vector<std::pair<double, double>> rv;
        for (Eigen::Index i = 0; i < g.n_nodes(); ++i) {
            double r2 = 0;
            for (int d = 0; d < g.dim(); ++d) {
                double dx = g.pos[i][d] - g.spec.omega.center[d];
                r2 += dx * dx;
            }
            rv.push_back({std::sqrt(r2), c.eta[i]});
        }
        std::sort(rv.begin(), rv.end());
        for (std::size_t k = 1; k < rv.size(); ++k) CHECK(rv[k].second <= rv[k - 1].second + 1e-9);
    }
}

TEST_CASE("refining the grid keeps the discrete Omega volume within O(h)") {
    Grid g1 = grid_1d(64), g2 = grid_1d(128);
    double v1 = g1.interior_nodes.size() * g1.w;
    double v2 = g2.interior_nodes.size() * g2.w;
    CHECK(std::abs(v1 - 2.0) <= 2 * g1.h);
    CHECK(std::abs(v2 - 2.0) <= 2 * g2.h);
}
