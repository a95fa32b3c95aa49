#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "fmse/errors.hpp"
#include "fmse/fields.hpp"

namespace fmse {

using Point = std::array<double, 2>;  // y component unused in 1D

/// Open axis-aligned box or open ball.
struct Region {
    enum class Kind { Box, Ball };
    Kind kind = Kind::Box;
    Point center{0.0, 0.0};
    Point half{0.0, 0.0};  // half-widths (Box)
    double radius = 0.0;   // Ball

    static Region box(Point c, Point h) { return Region{Kind::Box, c, h, 0.0}; }
    static Region ball(Point c, double r) { return Region{Kind::Ball, c, {0, 0}, r}; }

    bool contains(const Point& p, int dim) const;
    /// Circumradius about the region center (covers the closure).
    double circumradius(int dim) const;
    /// Max |coordinate offset| from the origin reached by the closure, per axis.
    double extent(int axis) const;
};

/// Geometry of one run: computational box, domain Omega and exterior windows.
struct DomainSpec {
    int dim = 1;
    Point box_lo{0, 0}, box_hi{0, 0};
    Region omega;
    Region w1;
    Region w2;

    void validate() const;  // throws SpecViolation
};

/// Uniform cell-centered node lattice over the computational box.
struct Grid {
    DomainSpec spec;
    int n1 = 0;     // nodes per axis
    double h = 0;   // spacing (equal per axis; square cells)
    double w = 0;   // quadrature weight h^dim

    std::vector<Point> pos;
    std::vector<std::array<int, 2>> midx;
    std::vector<std::uint8_t> interior;  // node center in Omega
    std::vector<std::uint8_t> in_w1, in_w2;
    std::vector<int> interior_nodes;
    std::vector<int> exterior_nodes;

    int dim() const { return spec.dim; }
    Eigen::Index n_nodes() const { return static_cast<Eigen::Index>(pos.size()); }
    int node_at(int ix, int iy) const { return spec.dim == 1 ? ix : ix * n1 + iy; }
    /// Neighbor node along an axis, or -1 when it leaves the box.
    int neighbor(int i, int axis, int dir) const;
    std::array<double, 2> delta(int i, int j) const {
        return {pos[j][0] - pos[i][0], pos[j][1] - pos[i][1]};
    }
    double dist(int i, int j) const;
};

Grid build_grid(const DomainSpec& spec, int nodes_per_axis);

/// Smooth compactly supported profile a*exp(1 - 1/(1 - |x-c|^2/r^2)) on ball(c, r).
ScalarField bump(const Grid& grid, const Point& center, double radius, double amplitude);

/// Evaluate the same profile at an arbitrary point (shared with oracles).
double bump_value(const Point& x, const Point& center, double radius, double amplitude, int dim);

/// Mollified indicator: 1 on Omega plus a one-cell collar, supported in a ball
/// B_R with Omega \Subset B_R strictly inside the box.  Returns the field and R.
struct Cutoff {
    ScalarField eta;
    double R;
    double plateau_radius;
};
Cutoff cutoff_eta(const Grid& grid, const DomainSpec& spec);

}  // namespace fmse
