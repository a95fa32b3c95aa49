#pragma once

#include <functional>
#include <vector>

#include "fmse/geometry.hpp"

namespace fmse {
namespace quad {

/// Gauss-Legendre nodes/weights on [-1, 1].
struct GaussRule {
    std::vector<double> x, w;
};
const GaussRule& gauss_legendre(int n);

double integrate(const std::function<double(double)>& f, double a, double b, int n = 32);

/// Integral of f over [a, infinity) via the substitution t = a + u/(1-u).
double integrate_to_infinity(const std::function<double(double)>& f, double a, int n = 64);

/// Exterior kernel mass  integral over R^n \ box of |x-y|^{-n-2s} dy  for x inside the box.
/// 1D closed form; 2D by Gauss quadrature of the polar ray representation.
double tail_integral(const Grid& grid, double s, const Point& x);

/// Second kernel moment of the near-diagonal zone used by the Taylor-model correction:
///   kappa_eff = (1/2n) [ int_{cell_0} |z|^2 K dz
///                        + sum_{1<=|o|_inf<=p} ( int_{cell_o} |z|^2 K dz - |z_o|^2 K(z_o) h^n ) ]
/// with K(z) = |z|^{-n-2s}.  Depends only on (n, s, h, p).
double near_zone_moment(int dim, double s, double h, int p);

/// Barrier scale  lambda = (C_{n,s}/2) * integral over R^n \ B_R of (R+|z|)^{-n-2s} dz
/// computed by radial quadrature.
double barrier_lambda(int dim, double s, double C_ns, double R);

}  // namespace quad
}  // namespace fmse
