#pragma once

#include <cstdint>
#include <string>

#include "fmse/dn_map.hpp"
#include "fmse/inversion.hpp"

namespace fmse {

struct ExteriorDatum {
    Point center{0, 0};
    double radius = 0;
    double amplitude = 0;
};

struct BasisSpec {
    std::vector<Point> centers;
    std::vector<double> radii;
};

/// Everything one run needs; parsed from a JSON document with unknown keys
/// rejected and all module preconditions validated at load.
struct RunConfig {
    DomainSpec domain;
    int nodes_per_axis = 64;
    double s = 0.5;

    // potential: list of preset parts summed together, or a CSV table
    struct PotentialPart {
        std::string preset;  // "antisymmetric_radial" | "symmetric_product"
        std::array<double, 2> amplitude{0, 0};
        Point center{0, 0};
        double radius = 0;
    };
    std::vector<PotentialPart> potential_parts;
    std::string potential_csv;

    struct CoefficientSpec {
        int order = 1;
        std::string kind;  // "zero" | "constant" | "gaussian" | "bump"
        double value = 0;
        double amplitude = 0;
        Point center{0, 0};
        double sigma = 0;
        double radius = 0;
    };
    std::vector<CoefficientSpec> coefficients;
    double R0 = 1.0;

    SolverOptions solver;
    ExteriorDatum exterior_data;

    DnStencil stencil;
    int dn_K = 2;
    BasisSpec basis_w1, basis_w2;

    InversionOptions inversion;

    std::string output_dir = "out";
    std::uint64_t seed = 1;
};

RunConfig load_config(const std::string& path);

Grid make_grid(const RunConfig& cfg);
MagneticPotential make_potential(const RunConfig& cfg, const Grid& grid);
Nonlinearity make_nonlinearity_from_config(const RunConfig& cfg, const Grid& grid);
ExteriorBasis make_basis(const RunConfig& cfg, const Grid& grid, const std::string& window);
ScalarField make_exterior_datum(const RunConfig& cfg, const Grid& grid);

}  // namespace fmse
