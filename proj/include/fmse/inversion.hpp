#pragma once

#include "fmse/dn_map.hpp"

namespace fmse {

struct RungeSolution {
    Eigen::VectorXd alpha;   // coefficients over the W2 basis
    ScalarField achieved;    // sum_j alpha_j v_{h_j} (full field)
    double misfit = 0;       // ||achieved - target||_2(Omega) / ||target||_2(Omega)
    double lambda = 0;
    double gram_cond = 0;
    bool ill_conditioned = false;
};

/// Basis solutions for one linear operator; reused across Runge targets.
class RungeEngine {
  public:
    RungeEngine(const FactoredOperator& L, const ExteriorBasis& basisW2, double lambda_reg);
    RungeSolution approximate(const ScalarField& target_on_omega) const;
    const std::vector<ScalarField>& basis_solutions() const { return v_; }
    double gram_cond() const { return gram_cond_; }

  private:
    const Grid& grid_;
    std::vector<ScalarField> v_;
    Eigen::MatrixXd gram_;
    Eigen::LDLT<Eigen::MatrixXd> fact_;
    double lambda_ = 0;
    double gram_cond_ = 0;
};

RungeSolution runge_approximate(const MagneticPotential& A, const ScalarField& q,
                                const ScalarField& target, const ExteriorBasis& basisW2,
                                const Grid& grid, double s, double lambda_reg);

struct FirstOrderReport {
    double dn_gap = 0;  // max |D1^(1) - D2^(1)| / scale
    bool gauge_pair = false;
    bool consistent = false;  // gauge_pair => dn_gap <= tol ; !gauge_pair => gap > 10 tol
};

FirstOrderReport verify_first_order(const MagneticPotential& A1, const ScalarField& q1,
                                    const MagneticPotential& A2, const ScalarField& q2,
                                    const ExteriorBasis& basisW1, const ExteriorBasis& basisW2,
                                    const Grid& grid, double s, const SolverOptions& opts,
                                    double tol = 1e-6);

/// Linear DN matrix D^(1)[i][j] for the operator (-Delta)^s_A + q over the bases.
Eigen::MatrixXd linear_dn_matrix(const MagneticPotential& A, const ScalarField& q,
                                 const ExteriorBasis& basisW1, const ExteriorBasis& basisW2,
                                 const Grid& grid, double s, const SolverOptions& opts);

struct InversionOptions {
    double lambda_reg = 1e-8;       // trace-scaled Tikhonov weight
    double mask_theta = 0.05;       // report only where u1 >= theta * max u1
    double target_radius_cells = 4.0;
    bool multi_f = true;            // stack equations over all W1 basis data
    double max_dual_gap = 0.05;     // cascade abort thresholds
    double max_runge_misfit = 0.95;
    double positivity_threshold = 0.0;
};

struct ReconstructionResult {
    std::vector<ScalarField> c_hat;  // orders 2..K (full fields, masked nodes zero)
    std::vector<std::uint8_t> mask;  // per node
    ScalarField u1_envelope;         // max_f |u1_f|
    double positivity_margin = 0;
    std::vector<double> rel_l2_error;  // vs truth when provided
    std::vector<double> runge_misfit_median;
    bool aborted = false;
    int aborted_at_k = 0;
    std::string abort_reason;
};

/// Recover c_k from DN data for a single W1 datum (basis index f_index),
/// feeding previously recovered coefficients into the Bell remainder.
ScalarField reconstruct_coefficient(const DnData& dn, int k,
                                    const std::vector<ScalarField>& known, int f_index,
                                    const MagneticPotential& A, const ScalarField& q,
                                    const ExteriorBasis& basisW1, const ExteriorBasis& basisW2,
                                    const Grid& grid, double s, const InversionOptions& iopts,
                                    const SolverOptions& opts,
                                    std::vector<std::uint8_t>* mask_out = nullptr);

ReconstructionResult reconstruct_all(const DnData& dn, const MagneticPotential& A,
                                     const ScalarField& q, int K, const ExteriorBasis& basisW1,
                                     const ExteriorBasis& basisW2, const Grid& grid, double s,
                                     const InversionOptions& iopts, const SolverOptions& opts,
                                     const Nonlinearity* truth = nullptr);

}  // namespace fmse
