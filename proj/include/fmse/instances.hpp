#pragma once

#include <cstdint>
#include <random>

#include "fmse/solver.hpp"

namespace fmse {

/// One randomized problem instance for property batches.
struct RandomInstance {
    MagneticPotential A;
    ScalarField q;
    ScalarField F;
    ScalarField g;
    bool admissible = true;  // constructed to satisfy (1.2)/(1.5); false for probes
};

/// Random admissible instance: antisymmetric-radial + symmetric-product A,
/// q shifted so that m_A + q >= 0, F >= 0 interior bump, g >= 0 bump in W1.
/// strict_g forces g not identically zero.
RandomInstance random_admissible_instance(const Grid& grid, double s, std::mt19937_64& rng,
                                          bool strict_g, bool with_F = true);

/// Deliberately violates the antisymmetric sign condition (1.2).
RandomInstance make_inadmissible_instance(const Grid& grid, double s, std::mt19937_64& rng);

/// Gauge partner: add a random symmetric part to A and compensate q through
/// the sigma identity, leaving (A_{a||}, sigma) unchanged.
std::pair<MagneticPotential, ScalarField> make_gauge_partner(const Grid& grid, double s,
                                                             const MagneticPotential& A,
                                                             const ScalarField& q,
                                                             std::mt19937_64& rng);

struct MaxPrincipleReport {
    int instances = 0;
    int violations = 0;
    double worst_min = 0;  // most negative min_Omega u over admissible instances
    int strict_instances = 0;
    int strict_violations = 0;
    double worst_core_min = std::numeric_limits<double>::infinity();
    int hypothesis_skipped = 0;  // inadmissible inputs flagged, not counted as failures
};

/// Randomized maximum-principle batch (weak form; strict positivity checked on
/// the Omega core, nodes at least 2h inside the boundary).
MaxPrincipleReport check_maximum_principle(const Grid& grid, double s, int count,
                                           std::uint64_t seed, const SolverOptions& opts,
                                           bool strict_g = false, int inadmissible_probes = 0);

/// Nodes of Omega at distance >= margin from its boundary.
std::vector<int> omega_core_nodes(const Grid& grid, double margin);

}  // namespace fmse
