#include "fmse/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace fmse {
namespace quad {

namespace {

// Newton iteration on Legendre polynomials.
GaussRule compute_gauss(int n) {
    GaussRule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        double dp = n * (x * p1 - p0) / (x * x - 1.0);
        r.x[i] = x;
        r.w[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
    static std::map<int, GaussRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_gauss(n)).first;
    return it->second;
}

double integrate(const std::function<double(double)>& f, double a, double b, int n) {
    const GaussRule& g = gauss_legendre(n);
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double sum = 0;
    for (int i = 0; i < n; ++i) sum += g.w[i] * f(mid + half * g.x[i]);
    return sum * half;
}

double integrate_to_infinity(const std::function<double(double)>& f, double a, int n) {
    // t = a + u/(1-u), dt = du/(1-u)^2, u in (0,1)
    return integrate(
        [&](double u) {
            double om = 1.0 - u;
            return f(a + u / om) / (om * om);
        },
        0.0, 1.0, n);
}

double tail_integral(const Grid& grid, double s, const Point& x) {
    const double lo0 = grid.spec.box_lo[0], hi0 = grid.spec.box_hi[0];
    if (grid.dim() == 1) {
        // int_{R \ [lo,hi]} |x-y|^{-1-2s} dy = ((x-lo)^{-2s} + (hi-x)^{-2s}) / (2s)
        return (std::pow(x[0] - lo0, -2 * s) + std::pow(hi0 - x[0], -2 * s)) / (2 * s);
    }
    const double lo1 = grid.spec.box_lo[1], hi1 = grid.spec.box_hi[1];
    // Polar rays from x: int_{R^2 \ box} |z|^{-2-2s} dz = int_0^{2pi} rho(th)^{-2s}/(2s) dth,
    // rho = distance to the box boundary.  Split at the corner directions.
    double angs[4] = {std::atan2(lo1 - x[1], lo0 - x[0]), std::atan2(lo1 - x[1], hi0 - x[0]),
                      std::atan2(hi1 - x[1], lo0 - x[0]), std::atan2(hi1 - x[1], hi0 - x[0])};
    const double two_pi = 2 * std::numbers::pi;
    for (double& a : angs) a = std::fmod(a + two_pi, two_pi);
    std::sort(angs, angs + 4);
    auto rho = [&](double th) {
        double ct = std::cos(th), st = std::sin(th);
        double r = std::numeric_limits<double>::infinity();
        if (ct > 1e-15) r = std::min(r, (hi0 - x[0]) / ct);
        if (ct < -1e-15) r = std::min(r, (lo0 - x[0]) / ct);
        if (st > 1e-15) r = std::min(r, (hi1 - x[1]) / st);
        if (st < -1e-15) r = std::min(r, (lo1 - x[1]) / st);
        return r;
    };
    double total = 0;
    for (int k = 0; k < 4; ++k) {
        double a = angs[k];
        double b = (k == 3) ? angs[0] + two_pi : angs[k + 1];
        total += integrate([&](double th) { return std::pow(rho(th), -2 * s) / (2 * s); }, a, b, 32);
    }
    return total;
}

double near_zone_moment(int dim, double s, double h, int p) {
    if (dim == 1) {
        double kappa = 2.0 * std::pow(h / 2, 2 - 2 * s) / (2 - 2 * s);  // center cell
        for (int o = 1; o <= p; ++o) {
            double d = o * h;
            double exact = (std::pow(d + h / 2, 2 - 2 * s) - std::pow(d - h / 2, 2 - 2 * s)) / (2 - 2 * s);
            double mid = d * d * std::pow(d, -1 - 2 * s) * h;
            kappa += 2.0 * (exact - mid);
        }
        return 0.5 * kappa;
    }
    // Center cell: int_{[-a,a]^2} |z|^{-2s} dz by the 8-fold wedge formula.
    const double a = h / 2;
    double center = 8.0 * std::pow(a, 2 - 2 * s) / (2 - 2 * s) *
                    integrate([&](double th) { return std::pow(std::cos(th), 2 * s - 2); }, 0.0,
                              std::numbers::pi / 4, 32);
    double kappa = center;
    const GaussRule& g = gauss_legendre(16);
    for (int ox = -p; ox <= p; ++ox) {
        for (int oy = -p; oy <= p; ++oy) {
            if (ox == 0 && oy == 0) continue;
            double cx = ox * h, cy = oy * h;
            double mom = 0;
            for (int i = 0; i < 16; ++i)
                for (int j = 0; j < 16; ++j) {
                    double zx = cx + g.x[i] * a, zy = cy + g.x[j] * a;
                    mom += g.w[i] * g.w[j] * std::pow(zx * zx + zy * zy, -s);
                }
            mom *= a * a;
            double d2 = cx * cx + cy * cy;
            kappa += mom - std::pow(d2, -s) * h * h;
        }
    }
    return 0.25 * kappa;
}

double barrier_lambda(int dim, double s, double C_ns, double R) {
    if (dim == 1) {
        // (C/2) * 2 * int_R^inf (R+z)^{-1-2s} dz
        double I = 2.0 * integrate_to_infinity(
                             [&](double z) { return std::pow(R + z, -1 - 2 * s); }, R, 64);
        return 0.5 * C_ns * I;
    }
    double I = 2 * std::numbers::pi *
               integrate_to_infinity([&](double r) { return std::pow(R + r, -2 - 2 * s) * r; }, R, 64);
    return 0.5 * C_ns * I;
}

}  // namespace quad
}  // namespace fmse
