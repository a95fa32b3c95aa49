#include "fmse/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace fmse {

bool Region::contains(const Point& p, int dim) const {
    if (kind == Kind::Box) {
        for (int d = 0; d < dim; ++d)
            if (std::abs(p[d] - center[d]) >= half[d]) return false;
        return true;
    }
    double r2 = 0;
    for (int d = 0; d < dim; ++d) r2 += (p[d] - center[d]) * (p[d] - center[d]);
    return r2 < radius * radius;
}

double Region::circumradius(int dim) const {
    if (kind == Kind::Ball) return radius;
    double r2 = 0;
    for (int d = 0; d < dim; ++d) r2 += half[d] * half[d];
    return std::sqrt(r2);
}

double Region::extent(int axis) const {
    double r = (kind == Kind::Ball) ? radius : half[axis];
    return std::abs(center[axis]) + r;
}

namespace {

bool region_intersects_closure(const Region& w, const Region& omega, int dim) {
    // Conservative sampling-free test for the shapes we support: distance between
    // centers against summed extents, exact for ball/ball and box/box, and
    // closest-point based for mixed pairs.
    auto clamp = [](double v, double lo, double hi) { return v < lo ? lo : (v > hi ? hi : v); };
    if (w.kind == Region::Kind::Box && omega.kind == Region::Kind::Box) {
        for (int d = 0; d < dim; ++d)
            if (std::abs(w.center[d] - omega.center[d]) >= w.half[d] + omega.half[d]) return false;
        return true;
    }
    const Region& box = (w.kind == Region::Kind::Box) ? w : omega;
    const Region& ball = (w.kind == Region::Kind::Box) ? omega : w;
    if (w.kind == Region::Kind::Ball && omega.kind == Region::Kind::Ball) {
        double d2 = 0;
        for (int d = 0; d < dim; ++d)
            d2 += (w.center[d] - omega.center[d]) * (w.center[d] - omega.center[d]);
        return std::sqrt(d2) < w.radius + omega.radius;
    }
    double d2 = 0;
    for (int d = 0; d < dim; ++d) {
        double cp = clamp(ball.center[d], box.center[d] - box.half[d], box.center[d] + box.half[d]);
        d2 += (cp - ball.center[d]) * (cp - ball.center[d]);
    }
    return std::sqrt(d2) < ball.radius;
}

}  // namespace

void DomainSpec::validate() const {
    if (dim != 1 && dim != 2) throw SpecViolation("dimension must be 1 or 2");
    for (int d = 0; d < dim; ++d)
        if (!(box_hi[d] > box_lo[d])) throw SpecViolation("computational box is empty");
    if (dim == 2) {
        double lx = box_hi[0] - box_lo[0], ly = box_hi[1] - box_lo[1];
        if (std::abs(lx - ly) > 1e-12 * std::max(lx, ly))
            throw SpecViolation("computational box must be square in 2D (uniform cells)");
    }
    // Omega closure strictly inside the open box.
    for (int d = 0; d < dim; ++d) {
        double r = (omega.kind == Region::Kind::Ball) ? omega.radius : omega.half[d];
        if (omega.center[d] - r <= box_lo[d] || omega.center[d] + r >= box_hi[d])
            throw SpecViolation("Omega touches the box boundary");
    }
    for (const Region* win : {&w1, &w2}) {
        for (int d = 0; d < dim; ++d) {
            double r = (win->kind == Region::Kind::Ball) ? win->radius : win->half[d];
            if (r <= 0) throw SpecViolation("window region is empty");
            if (win->center[d] - r < box_lo[d] || win->center[d] + r > box_hi[d])
                throw SpecViolation("window leaves the computational box");
        }
        if (region_intersects_closure(*win, omega, dim))
            throw SpecViolation("window intersects the closure of Omega");
    }
}

int Grid::neighbor(int i, int axis, int dir) const {
    auto m = midx[i];
    m[axis] += dir;
    if (m[axis] < 0 || m[axis] >= n1) return -1;
    return node_at(m[0], m[1]);
}

double Grid::dist(int i, int j) const {
    double dx = pos[j][0] - pos[i][0];
    double dy = pos[j][1] - pos[i][1];
    return spec.dim == 1 ? std::abs(dx) : std::sqrt(dx * dx + dy * dy);
}

Grid build_grid(const DomainSpec& spec, int nodes_per_axis) {
    spec.validate();
    if (nodes_per_axis < 16)
        throw SpecViolation("nodes_per_axis must be at least 16");

    Grid g;
    g.spec = spec;
    g.n1 = nodes_per_axis;
    g.h = (spec.box_hi[0] - spec.box_lo[0]) / nodes_per_axis;
    g.w = (spec.dim == 1) ? g.h : g.h * g.h;

    const int n_total = (spec.dim == 1) ? g.n1 : g.n1 * g.n1;
    g.pos.resize(n_total);
    g.midx.resize(n_total);
    g.interior.assign(n_total, 0);
    g.in_w1.assign(n_total, 0);
    g.in_w2.assign(n_total, 0);

    auto coord = [&](int k) { return spec.box_lo[0] + (k + 0.5) * g.h; };
    auto coord_y = [&](int k) { return spec.box_lo[1] + (k + 0.5) * g.h; };
    if (spec.dim == 1) {
        for (int ix = 0; ix < g.n1; ++ix) {
            g.pos[ix] = {coord(ix), 0.0};
            g.midx[ix] = {ix, 0};
        }
    } else {
        for (int ix = 0; ix < g.n1; ++ix)
            for (int iy = 0; iy < g.n1; ++iy) {
                int i = g.node_at(ix, iy);
                g.pos[i] = {coord(ix), coord_y(iy)};
                g.midx[i] = {ix, iy};
            }
    }

    int per_axis_interior = 0;
    for (int i = 0; i < n_total; ++i) {
        bool in = spec.omega.contains(g.pos[i], spec.dim);
        g.interior[i] = in ? 1 : 0;
        if (in)
            g.interior_nodes.push_back(i);
        else
            g.exterior_nodes.push_back(i);
        if (spec.w1.contains(g.pos[i], spec.dim)) g.in_w1[i] = !in;
        if (spec.w2.contains(g.pos[i], spec.dim)) g.in_w2[i] = !in;
    }
    if (spec.dim == 1) {
        per_axis_interior = static_cast<int>(g.interior_nodes.size());
    } else {
        // widest row of interior nodes
        for (int ix = 0; ix < g.n1; ++ix) {
            int c = 0;
            for (int iy = 0; iy < g.n1; ++iy) c += g.interior[g.node_at(ix, iy)];
            per_axis_interior = std::max(per_axis_interior, c);
        }
    }
    if (per_axis_interior < 4)
        throw SpecViolation("Omega resolves to fewer than 4 interior nodes per axis");
    return g;
}

double bump_value(const Point& x, const Point& center, double radius, double amplitude, int dim) {
    double r2 = 0;
    for (int d = 0; d < dim; ++d) r2 += (x[d] - center[d]) * (x[d] - center[d]);
    double t = 1.0 - r2 / (radius * radius);
    if (t <= 0) return 0.0;
    return amplitude * std::exp(1.0 - 1.0 / t);
}

ScalarField bump(const Grid& grid, const Point& center, double radius, double amplitude) {
    if (radius <= 0) throw SpecViolation("bump radius must be positive");
    for (int d = 0; d < grid.dim(); ++d) {
        if (center[d] - radius < grid.spec.box_lo[d] || center[d] + radius > grid.spec.box_hi[d])
            throw SpecViolation("bump support leaves the computational box");
    }
    ScalarField f = ScalarField::Zero(grid.n_nodes());
    for (Eigen::Index i = 0; i < grid.n_nodes(); ++i)
        f[i] = bump_value(grid.pos[i], center, radius, amplitude, grid.dim());
    return f;
}

namespace {
// C-infinity ramp: 1 for t<=0, 0 for t>=1.
double smooth_ramp(double t) {
    if (t <= 0) return 1.0;
    if (t >= 1) return 0.0;
    double a = std::exp(-1.0 / (1.0 - t));
    double b = std::exp(-1.0 / t);
    return a / (a + b);
}
}  // namespace

Cutoff cutoff_eta(const Grid& grid, const DomainSpec& spec) {
    const int dim = spec.dim;
    double r_omega = spec.omega.circumradius(dim);
    double box_clearance = std::numeric_limits<double>::infinity();
    for (int d = 0; d < dim; ++d) {
        box_clearance = std::min(box_clearance, spec.box_hi[d] - spec.omega.center[d]);
        box_clearance = std::min(box_clearance, spec.omega.center[d] - spec.box_lo[d]);
    }
    double R = 0.95 * box_clearance;
    double plateau = r_omega + 1.5 * grid.h;
    if (plateau >= R)
        throw SpecViolation("no admissible ball B_R with Omega strictly inside the box");

    Cutoff c;
    c.R = R;
    c.plateau_radius = plateau;
    c.eta = ScalarField::Zero(grid.n_nodes());
    for (Eigen::Index i = 0; i < grid.n_nodes(); ++i) {
        double r2 = 0;
        for (int d = 0; d < dim; ++d) {
            double dx = grid.pos[i][d] - spec.omega.center[d];
            r2 += dx * dx;
        }
        double r = std::sqrt(r2);
        c.eta[i] = smooth_ramp((r - plateau) / (R - plateau));
    }
    return c;
}

}  // namespace fmse
