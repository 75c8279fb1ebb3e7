#pragma once

#include <string>
#include <vector>

#include "hjb/solver.hpp"

namespace hjb {

struct LadderParams {
    double delta0 = 0.2;
    double factor = 0.5;
    int length = 7;
    SolveParams solve;
    std::vector<double> growth_betas = {1.0, 2.0};
};

struct LadderRung {
    double delta = 0.0;
    double c_k = 0.0;  // -delta * u_delta(x_ref)
    double residual = 0.0;
    int iterations = 0;
    long sweeps = 0;
    double closure_slack = 0.0;
    double b1_lhs = 0.0;  // delta * max|u|
    double b1_rhs = 0.0;  // max|l| + closure slack
};

// Annulus-wise growth ratios of |chi| against reference growths r^2, r^beta
// and 1. Annuli exclude the two outermost node layers.
struct GrowthReport {
    std::vector<double> annulus_r;
    std::vector<double> max_abs_chi;
    std::vector<double> beta_list;
    std::vector<double> ratio_quadratic;
    std::vector<std::vector<double>> ratio_beta;
    std::vector<double> ratio_bounded;
    bool verdict_subquadratic = false;      // |chi|/r^2 strictly decaying
    std::vector<bool> verdict_beta_decay;   // |chi|/r^beta strictly decaying
    bool verdict_bounded = false;           // |chi| non-increasing within 10%
};

GrowthReport growth_diagnostics(const ScalarField& chi, const std::vector<double>& beta_list,
                                int n_annuli = 0);

struct ErgodicResult {
    std::vector<LadderRung> ladder;
    std::vector<double> c_diffs;  // |c_k - c_{k-1}|
    double c = 0.0;               // last ladder value (headline)
    double c_aitken = 0.0;        // advisory extrapolation
    bool aitken_valid = false;
    bool oscillation = false;

    ScalarField chi;  // last v_delta = u_delta - u_delta(x_ref); chi(x_ref) = 0
    int x_ref_node = 0;
    GrowthReport growth;
    bool growth_valid = false;

    bool completed = false;
    std::string failure;
};

// Runs the delta ladder delta0 * factor^k with warm starts, extracting the
// critical-value estimates c_k = -delta_k u_k(x_ref) and the corrector.
// Inner solve failures abort with the partial ladder preserved.
ErgodicResult vanishing_discount(const ProblemSpec& problem, const BoundaryClosure& closure,
                                 const LadderParams& params, Point x_ref = {0.0, 0.0});

// Helper shared with tests: flags >= 2 sign alternations of the c_k
// increments with magnitude above tol.
bool detect_oscillation(const std::vector<double>& c_values, double tol);

struct UniquenessProbe {
    double delta_c = 0.0;                 // |c_a - c_b|
    double max_dev_from_constant = 0.0;   // of chi_a - chi_b over the interior
    ErgodicResult run_a, run_b;
};

UniquenessProbe uniqueness_probe(const ProblemSpec& problem, const BoundaryClosure& closure,
                                 const LadderParams& params, Point x_ref_a, Point x_ref_b,
                                 bool parallel = false);

}  // namespace hjb
