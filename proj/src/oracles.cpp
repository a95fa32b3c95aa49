#include "fmse/oracles.hpp"

#include <cmath>
#include <numbers>

namespace fmse {
namespace oracle {

namespace {
// Bessel J0 via the standard polynomial/asymptotic split (Abramowitz-Stegun 9.4).
double bessel_j0(double x) {
    double ax = std::abs(x);
    if (ax < 8.0) {
        double y = x * x;
        double p1 = -2957821389.0 + y * (7062834065.0 + y * (-512359803.6 +
                     y * (10879881.29 + y * (-86327.92757 + y * 228.4622733))));
        double p2 = 40076544269.0 + y * (745249964.8 + y * (7189466.438 +
                     y * (47447.26470 + y * (226.1030244 + y))));
        return p1 / p2;
    }
    double z = 8.0 / ax, y = z * z;
    double p1 = 1.0 + y * (-0.1098628627e-2 + y * (0.2734510407e-4 +
                 y * (-0.2073370639e-5 + y * 0.2093887211e-6)));
    double p2 = -0.1562499995e-1 + y * (0.1430488765e-3 + y * (-0.6911147651e-5 +
                 y * (0.7621095161e-6 + y * (-0.934935152e-7))));
    double xx = ax - 0.785398164;
    return std::sqrt(0.636619772 / ax) * (std::cos(xx) * p1 - z * std::sin(xx) * p2);
}
}  // namespace

double symbol_gaussian(int dim, double s, double r) {
    // e^{-|x|^2} has Fourier transform pi^{n/2} e^{-|xi|^2/4} with the
    // convention F u(xi) = int e^{-i x.xi} u dx.
    const int M = 20000;
    const double L = 60.0;
    const double dq = L / M;
    double acc = 0;
    if (dim == 1) {
        for (int k = 0; k < M; ++k) {
            double q = (k + 0.5) * dq;
            acc += std::pow(q, 2 * s) * std::exp(-q * q / 4) * std::cos(q * r);
        }
        return acc * dq * std::sqrt(std::numbers::pi) / std::numbers::pi;
    }
    for (int k = 0; k < M; ++k) {
        double q = (k + 0.5) * dq;
        acc += std::pow(q, 2 * s + 1) * std::exp(-q * q / 4) * bessel_j0(q * r);
    }
    return 0.5 * acc * dq;
}

double direct_quadrature(const Grid& grid, double s, const std::function<double(Point)>& u,
                         const Point& x, int refine) {
    const int dim = grid.dim();
    const double C = std::pow(4.0, s) * std::tgamma(dim / 2.0 + s) /
                     (std::pow(std::numbers::pi, dim / 2.0) * std::abs(std::tgamma(-s)));
    const double hf = grid.h / refine;
    const double ux = u(x);
    double acc = 0;
    if (dim == 1) {
        const double lo = grid.spec.box_lo[0], hi = grid.spec.box_hi[0];
        const long m = std::lround((hi - lo) / hf);
        for (long k = 0; k < m; ++k) {
            double y = lo + (k + 0.5) * hf;
            double d = std::abs(y - x[0]);
            if (d < 0.5 * hf) continue;  // punctured
            acc += (ux - u({y, 0})) * std::pow(d, -1 - 2 * s) * hf;
        }
        acc += ux * (std::pow(x[0] - lo, -2 * s) + std::pow(hi - x[0], -2 * s)) / (2 * s);
        return C * acc;
    }
    const double lo0 = grid.spec.box_lo[0], hi0 = grid.spec.box_hi[0];
    const double lo1 = grid.spec.box_lo[1], hi1 = grid.spec.box_hi[1];
    const long m0 = std::lround((hi0 - lo0) / hf);
    const long m1 = std::lround((hi1 - lo1) / hf);
    for (long i = 0; i < m0; ++i)
        for (long j = 0; j < m1; ++j) {
            double y0 = lo0 + (i + 0.5) * hf, y1 = lo1 + (j + 0.5) * hf;
            double d2 = (y0 - x[0]) * (y0 - x[0]) + (y1 - x[1]) * (y1 - x[1]);
            if (d2 < 0.25 * hf * hf) continue;
            acc += (ux - u({y0, y1})) * std::pow(d2, -1 - s) * hf * hf;
        }
    // crude outer tail by radial shells from the box out to infinity
    double rmin = std::min({x[0] - lo0, hi0 - x[0], x[1] - lo1, hi1 - x[1]});
    // integrate over R^2 \ box exactly in polar form
    const int nth = 2048;
    for (int k = 0; k < nth; ++k) {
        double th = (k + 0.5) * 2 * std::numbers::pi / nth;
        double ct = std::cos(th), st = std::sin(th);
        double rho = std::numeric_limits<double>::infinity();
        if (ct > 1e-15) rho = std::min(rho, (hi0 - x[0]) / ct);
        if (ct < -1e-15) rho = std::min(rho, (lo0 - x[0]) / ct);
        if (st > 1e-15) rho = std::min(rho, (hi1 - x[1]) / st);
        if (st < -1e-15) rho = std::min(rho, (lo1 - x[1]) / st);
        acc += ux * std::pow(rho, -2 * s) / (2 * s) * (2 * std::numbers::pi / nth);
    }
    (void)rmin;
    return C * acc;
}

double barrier_lambda_closed_form(int dim, double s, double C_ns, double R) {
    if (dim == 1) return C_ns * std::pow(2 * R, -2 * s) / (2 * s);
    // (C/2) 2pi [ (2R)^{-2s}/(2s) - R (2R)^{-1-2s}/(1+2s) ]
    return C_ns * std::numbers::pi *
           (std::pow(2 * R, -2 * s) / (2 * s) - R * std::pow(2 * R, -1 - 2 * s) / (1 + 2 * s));
}

double bump_mass(int dim, const Point& center, double radius, double amplitude) {
    const int M = 40000;
    if (dim == 1) {
        double acc = 0;
        double dz = 2 * radius / M;
        for (int k = 0; k < M; ++k) {
            double z = -radius + (k + 0.5) * dz;
            double t = 1 - z * z / (radius * radius);
            acc += amplitude * std::exp(1.0 - 1.0 / t) * dz;
        }
        return acc;
    }
    double acc = 0;
    double dr = radius / M;
    for (int k = 0; k < M; ++k) {
        double r = (k + 0.5) * dr;
        double t = 1 - r * r / (radius * radius);
        acc += amplitude * std::exp(1.0 - 1.0 / t) * 2 * std::numbers::pi * r * dr;
    }
    (void)center;
    return acc;
}

}  // namespace oracle
}  // namespace fmse
