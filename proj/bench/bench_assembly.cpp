// Timing comparison of the OpenMP kernels against the serial reference.
#include <chrono>
#include <iostream>

#include "fmse/reference_kernels.hpp"

using namespace fmse;
namespace chrono = std::chrono;

namespace {

template <typename F>
double time_ms(F&& f, int reps = 3) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        auto t0 = chrono::steady_clock::now();
        f();
        auto t1 = chrono::steady_clock::now();
        best = std::min(best, chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

Grid grid_1d(int n) {
    DomainSpec spec;
    spec.dim = 1;
    spec.box_lo = {-4, 0};
    spec.box_hi = {4, 0};
    spec.omega = Region::box({0, 0}, {1, 0});
    spec.w1 = Region::box({2, 0}, {0.5, 0});
    spec.w2 = Region::box({-2, 0}, {0.5, 0});
    return build_grid(spec, n);
}

Grid grid_2d(int n) {
    DomainSpec spec;
    spec.dim = 2;
    spec.box_lo = {-3, -3};
    spec.box_hi = {3, 3};
    spec.omega = Region::ball({0, 0}, 1.0);
    spec.w1 = Region::box({1.6, 0}, {0.4, 1.6});
    spec.w2 = Region::box({-1.6, 0}, {0.4, 1.6});
    return build_grid(spec, n);
}

}  // namespace

int main() {
    const double s = 0.5;
    std::cout << "kernel benchmark (best of 3), parallel vs serial reference\n";

    for (int n : {256, 512}) {
        Grid g = grid_1d(n);
        double tp = time_ms([&] { assemble_frac_laplacian(g, s); });
        double ts = time_ms([&] { serial::assemble_frac_laplacian(g, s); });
        std::cout << "assembly 1D N=" << n << ": parallel " << tp << " ms, serial " << ts
                  << " ms, speedup " << ts / tp << "x\n";
    }
    for (int n : {24, 32}) {
        Grid g = grid_2d(n);
        double tp = time_ms([&] { assemble_frac_laplacian(g, s); });
        double ts = time_ms([&] { serial::assemble_frac_laplacian(g, s); });
        std::cout << "assembly 2D " << n << "^2: parallel " << tp << " ms, serial " << ts
                  << " ms, speedup " << ts / tp << "x\n";
    }
    {
        Grid g = grid_1d(512);
        ScalarField u = bump(g, {0, 0}, 0.8, 1.0);
        double tp = time_ms([&] { frac_gradient(g, s, u); });
        double ts = time_ms([&] { serial::frac_gradient(g, s, u); });
        std::cout << "gradient 1D N=512: parallel " << tp << " ms, serial " << ts
                  << " ms, speedup " << ts / tp << "x\n";

        MagneticPotential A = potential_antisymmetric_radial(g, 0.5, {0, 0}, 0.7);
        ScalarField v = bump(g, {0.2, 0}, 0.6, 1.0);
        double ep = time_ms([&] { bilinear_energy(g, s, A, u, v); });
        double es = time_ms([&] { serial::bilinear_energy(g, s, A, u, v); });
        std::cout << "energy 1D N=512: parallel " << ep << " ms, serial " << es << " ms, speedup "
                  << es / ep << "x\n";
    }
    return 0;
}
