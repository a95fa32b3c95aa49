#pragma once

#include <functional>

#include "fmse/geometry.hpp"

namespace fmse {
namespace oracle {

// Independent verification routes.  These deliberately re-derive constants and
// kernels from the definitions instead of calling the assembly code they check.

/// Spectral multiplier |xi|^{2s} applied to exp(-|x|^2) by Fourier quadrature.
double symbol_gaussian(int dim, double s, double r);

/// (-Delta)^s u at x by direct punctured quadrature of the kernel integral at a
/// refinement of the grid resolution (plus the analytic far-field tail).
double direct_quadrature(const Grid& grid, double s, const std::function<double(Point)>& u,
                         const Point& x, int refine);

/// Closed forms of the barrier scale lambda (independent of quad::barrier_lambda).
double barrier_lambda_closed_form(int dim, double s, double C_ns, double R);

/// High-resolution integral of the canonical bump over its support ball.
double bump_mass(int dim, const Point& center, double radius, double amplitude);

}  // namespace oracle
}  // namespace fmse
