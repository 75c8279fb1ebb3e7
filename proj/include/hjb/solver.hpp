#pragma once

#include <vector>

#include "hjb/scheme.hpp"

namespace hjb {

struct SolveParams {
    double tol = 1e-8;
    int max_outer = 500;
    long max_sweeps = 40'000'000;  // total inner sweep/solve budget
    double damping = 1.0;          // theta for the value-iteration fallback
    // Dimension 1 uses direct tridiagonal elimination for the frozen-policy
    // systems unless this forces point Gauss-Seidel; dimension 2 always
    // relaxes with Gauss-Seidel sweeps.
    bool gauss_seidel_inner = false;
};

struct DiscountedSolve {
    double delta = 0.0;
    ScalarField u;
    double residual_inf = 0.0;
    int iterations = 0;       // outer policy iterations
    // Per interior node, the attaining effective control; in Pucci modes map
    // back to the problem's alpha through DiscreteOperator::base_alpha.
    std::vector<int> policy;
    long sweeps = 0;
    bool used_fallback = false;
    // Discrete (b1) diagnostics: delta*max|u| <= max|l| + closure_slack.
    double closure_slack = 0.0;
    double b1_lhs = 0.0;
    double b1_rhs = 0.0;
};

// Howard policy iteration: per-node argopt, then an inner solve of the
// frozen-policy system (delta I + A_policy) u = l. In dimension 1 the system
// is tridiagonal and eliminated directly; otherwise point Gauss-Seidel sweeps
// in lexicographic order. Falls back to damped value iteration if the policy
// cycles without progress.
DiscountedSolve solve_discounted(const DiscreteOperator& op, double delta,
                                 const SolveParams& params, const ScalarField* warm = nullptr);

DiscountedSolve solve_discounted(const ProblemSpec& problem, const BoundaryClosure& closure,
                                 double delta, double tol, int max_iter);

// One damped fixed-point sweep u_i -= theta * res_i / (delta + diag_i + c0_i)
// over the interior in lexicographic order; returns the max update size.
double value_iteration_sweep(const DiscreteOperator& op, ScalarField& u, double delta,
                             double theta);

// One explicit Euler step u -= dt * residual(u, delta=0) on the interior;
// boundary nodes stay on the closure.
void parabolic_step(const DiscreteOperator& op, ScalarField& u, double dt);

struct ParabolicParams {
    double dt = 0.0;           // 0 selects 0.9 / (max diagonal + c0)
    double t_final = 40.0;
    double tail_window = 0.0;  // 0 selects t_final / 4
    int snapshot_count = 9;
    std::vector<Point> probe_points;  // empty selects {origin, +-L/2 per axis}
};

struct ParabolicRun {
    double dt = 0.0;
    double t_final = 0.0;
    double tail_window = 0.0;
    long steps = 0;
    bool completed = false;
    std::string failure;

    std::vector<double> snap_times;
    std::vector<ScalarField> snapshots;

    ScalarField tail_sup, tail_inf;  // per-node running extrema over the window
    std::vector<int> probe_nodes;
    double ubar = 0.0;    // max over probes of the tail sup
    double ulow = 0.0;    // min over probes of the tail inf
    double spread_sup = 0.0;
    double spread_inf = 0.0;
};

// Explicit monotone march of u_t + F_h(u) = 0 from datum h0. Rejects dt
// violating dt * (max diagonal + c0) <= 1 up front; NaN/overflow aborts with
// the snapshots collected so far and completed = false.
ParabolicRun march_parabolic(const DiscreteOperator& op, const ScalarField& h0,
                             const ParabolicParams& params);

ParabolicRun march_parabolic(const ProblemSpec& problem, const BoundaryClosure& closure,
                             const ScalarField& h0, const ParabolicParams& params);

}  // namespace hjb
