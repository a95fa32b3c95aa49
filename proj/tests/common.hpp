#pragma once

#include <doctest.h>

#include "fmse/solver.hpp"

namespace fmse_test {

inline fmse::Grid grid_1d(int n, double half_box = 4.0) {
    fmse::DomainSpec spec;
    spec.dim = 1;
    spec.box_lo = {-half_box, 0};
    spec.box_hi = {half_box, 0};
    spec.omega = fmse::Region::box({0, 0}, {1.0, 0});
    spec.w1 = fmse::Region::box({2.0, 0}, {0.5, 0});
    spec.w2 = fmse::Region::box({-2.0, 0}, {0.5, 0});
    return fmse::build_grid(spec, n);
}

inline fmse::Grid grid_2d(int n, double half_box = 3.0) {
    fmse::DomainSpec spec;
    spec.dim = 2;
    spec.box_lo = {-half_box, -half_box};
    spec.box_hi = {half_box, half_box};
    spec.omega = fmse::Region::ball({0, 0}, 1.0);
    spec.w1 = fmse::Region::box({1.6, 0}, {0.4, 1.6});
    spec.w2 = fmse::Region::box({-1.6, 0}, {0.4, 1.6});
    return fmse::build_grid(spec, n);
}

}  // namespace fmse_test
