// Acceptance gate: one check per criterion, each at its stated tolerance,
// printing one PASS/FAIL line per criterion. Exits nonzero on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "hjb/ergodic.hpp"
#include "hjb/io.hpp"
#include "hjb/oracle.hpp"
#include "hjb/presets.hpp"

using namespace hjb;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& what, const std::string& detail) {
    std::printf("%-4s criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", criterion, what.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

BoundaryClosure barrier() {
    return BoundaryClosure{ClosureKind::QuadraticBarrierDirichlet, 0.05, 0.0};
}

std::vector<LadderRung> g_all_rungs;  // collected for criterion 2

ErgodicResult run_ladder(const ProblemSpec& problem, const LadderParams& params,
                         Point x_ref = {0.0, 0.0}) {
    ErgodicResult r = vanishing_discount(problem, barrier(), params, x_ref);
    for (const auto& rung : r.ladder) g_all_rungs.push_back(rung);
    return r;
}

// ---------------------------------------------------------------------------
// 1. Explicit-example reproduction: c -> 0 and chi -> log(1+x^2).

ErgodicResult criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    Preset preset = get_preset("paper-example");
    const ProblemSpec problem = build_problem(preset, build_grid(1, 6.0, 481));
    LadderParams lp;
    lp.delta0 = 0.2;
    lp.factor = 0.5;
    lp.length = 7;
    lp.solve.tol = 1e-8;
    const ErgodicResult r = run_ladder(problem, lp);
    const double elapsed = seconds_since(t0);

    bool pass = r.completed;
    double chi_err = 0.0;
    if (r.completed) {
        const double chi0 = r.chi[problem.grid.origin_node()];
        for (int node = 0; node < problem.grid.node_count(); ++node) {
            const double x = problem.grid.coord(node)[0];
            if (std::abs(x) > 3.0) continue;
            chi_err = std::max(chi_err,
                               std::abs((r.chi[node] - chi0) - std::log(1.0 + x * x)));
        }
        pass = std::abs(r.c) <= 5e-3 && chi_err <= 2e-2 && elapsed <= 10.0;
    }
    char detail[160];
    std::snprintf(detail, sizeof detail, "|c| = %.2e <= 5e-3, chi error = %.2e <= 2e-2, %.1fs <= 10s",
                  std::abs(r.c), chi_err, elapsed);
    report(1, pass, "explicit example: c and the log corrector", detail);
    return r;
}

// ---------------------------------------------------------------------------
// 2. Discounted sup-norm bound on every accepted solve of the suite.

void criterion_2() {
    bool pass = !g_all_rungs.empty();
    double worst_violation = 0.0, worst_slack_ratio = 0.0;
    for (const auto& rung : g_all_rungs) {
        worst_violation = std::max(worst_violation, rung.b1_lhs - (rung.b1_rhs + 1e-8));
        const double max_l = rung.b1_rhs - rung.closure_slack;
        if (max_l > 0.0)
            worst_slack_ratio = std::max(worst_slack_ratio, rung.closure_slack / max_l);
        else if (rung.closure_slack > 0.0)
            pass = false;
    }
    pass = pass && worst_violation <= 0.0 && worst_slack_ratio <= 0.05;
    char detail[160];
    std::snprintf(detail, sizeof detail,
                  "%zu solves, worst bound excess %.2e <= 0, slack/|l| = %.3f <= 0.05",
                  g_all_rungs.size(), worst_violation, worst_slack_ratio);
    report(2, pass, "discounted bound delta*max|u| <= max|l| + slack", detail);
}

// ---------------------------------------------------------------------------
// 3. Pucci closed form against the sampling oracle plus exact identities.

void criterion_3() {
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(0xC3);
    const PucciParams param_sets[3] = {{1.0, 1.0}, {1.0, 2.0}, {0.5, 4.0}};
    bool pass = true;
    double worst_rel_gap = 0.0;  // gap / (0.05 (1 + |X|))
    for (int trial = 0; trial < 100; ++trial) {
        const SymMat x{rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)};
        const double norm_f =
            std::sqrt(x.a11 * x.a11 + 2.0 * x.a12 * x.a12 + x.a22 * x.a22);
        for (const PucciParams& p : param_sets) {
            const double closed = pucci_minus(x, 2, p);
            const PucciSampleResult s =
                pucci_sampling(x, 2, p, 10000, 1000 + static_cast<uint64_t>(trial));
            const double gap = s.min_val - closed;
            const double budget = 0.05 * (1.0 + norm_f);
            // the lower end is exact up to roundoff on attained samples
            if (gap < -1e-12 * (1.0 + norm_f) || gap > budget) pass = false;
            worst_rel_gap = std::max(worst_rel_gap, gap / budget);

            const SymMat neg{-x.a11, -x.a12, -x.a22};
            const double scale = std::max(1.0, std::abs(closed));
            if (std::abs(pucci_minus(neg, 2, p) + pucci_plus(x, 2, p)) > 1e-12 * scale)
                pass = false;
            const double t = rng.uniform(0.0, 4.0);
            const SymMat tx{t * x.a11, t * x.a12, t * x.a22};
            if (std::abs(pucci_minus(tx, 2, p) - t * closed) > 1e-12 * std::max(1.0, t * scale))
                pass = false;
        }
    }
    const double elapsed = seconds_since(t0);
    pass = pass && elapsed <= 5.0;
    char detail[160];
    std::snprintf(detail, sizeof detail, "100 matrices x 3 parameter sets, worst gap %.0f%% of budget, %.1fs <= 5s",
                  100.0 * worst_rel_gap, elapsed);
    report(3, pass, "pucci closed form vs sampling oracle and identities", detail);
}

// ---------------------------------------------------------------------------
// 4. Radial formula for the log profile through the minimal operator.

void criterion_4() {
    bool pass = true;
    double worst = 0.0;
    for (const PucciParams p : {PucciParams{1.0, 2.0}, PucciParams{0.5, 4.0}}) {
        for (int k = 1; k <= 20; ++k) {
            const double r = 0.35 * k;
            const RadialHessian h = radial_hessian_eigs(log_profile(), r, 2);
            double eigs[2] = {h.radial, h.tangential};
            const double got = pucci_minus_eigs(eigs, 2, p);
            const double want = -p.Lambda * 1.0 / (r * r) + p.lambda / (r * r);
            worst = std::max(worst, std::abs(got - want));
        }
    }
    pass = worst <= 1e-12;
    char detail[96];
    std::snprintf(detail, sizeof detail, "worst |M-(D^2 log r) - formula| = %.2e <= 1e-12", worst);
    report(4, pass, "radial eigenvalue calculus reproduces the log-profile formula", detail);
}

// ---------------------------------------------------------------------------
// 5. Parabolic OU stabilization onto the Gaussian average.

void criterion_5() {
    Preset preset = get_preset("ou-linear");
    const Grid grid = build_grid(1, 8.0, 321);
    const ProblemSpec problem = build_problem(preset, grid);
    const auto h0_fn = initial_datum("runge", 0.0);
    const ScalarField h0 = sample_field(grid, h0_fn);

    double bsum = 0.0;
    int bcount = 0;
    for (int node = 0; node < grid.node_count(); ++node)
        if (grid.is_boundary(node)) {
            bsum += h0[node];
            ++bcount;
        }
    const BoundaryClosure closure{ClosureKind::FrozenValue, 0.05, bsum / bcount};

    ParabolicParams pp;
    pp.t_final = 40.0;
    pp.tail_window = 10.0;
    const ParabolicRun run = march_parabolic(problem, closure, h0, pp);

    const double avg = gaussian_average([&](double y) { return h0_fn({y, 0.0}); }, 0.0, 1.0, 256);
    const bool pass = run.completed && std::abs(run.ubar - avg) <= 1e-2 &&
                      std::abs(run.ubar - run.ulow) <= 1e-3 && run.spread_sup <= 1e-3 &&
                      run.spread_inf <= 1e-3;
    char detail[200];
    std::snprintf(detail, sizeof detail,
                  "|ubar - integral| = %.2e <= 1e-2, |ubar - ulow| = %.2e <= 1e-3, spread %.1e <= 1e-3",
                  std::abs(run.ubar - avg), std::abs(run.ubar - run.ulow), run.spread_sup);
    report(5, pass, "linear OU march stabilizes on the invariant-measure average", detail);
}

// ---------------------------------------------------------------------------
// 6. Stabilization constancy for the pucci preset and two data.

void criterion_6() {
    Preset preset = get_preset("pucci-ou");
    const Grid grid = build_grid(1, 6.0, 241);
    const ProblemSpec problem = build_problem(preset, grid);

    bool pass = true;
    std::string detail;
    for (const std::string name : {"sine-gauss", "runge"}) {
        const auto h0_fn = initial_datum(name, 0.0);
        const ScalarField h0 = sample_field(grid, h0_fn);
        double lo = 1e300, hi = -1e300, bsum = 0.0;
        int bcount = 0;
        for (int node = 0; node < grid.node_count(); ++node) {
            lo = std::min(lo, h0[node]);
            hi = std::max(hi, h0[node]);
            if (grid.is_boundary(node)) {
                bsum += h0[node];
                ++bcount;
            }
        }
        const BoundaryClosure closure{ClosureKind::FrozenValue, 0.05, bsum / bcount};
        ParabolicParams pp;
        pp.t_final = 40.0;
        pp.tail_window = 10.0;
        const ParabolicRun run = march_parabolic(problem, closure, h0, pp);
        pass = pass && run.completed && run.spread_sup <= 1e-3 && run.spread_inf <= 1e-3 &&
               run.ubar >= lo - 1e-12 && run.ubar <= hi + 1e-12 && run.ulow >= lo - 1e-12 &&
               run.ulow <= hi + 1e-12;
        char buf[96];
        std::snprintf(buf, sizeof buf, "%s: spread %.1e, ubar %.4f in [%.3f, %.3f]; ",
                      name.c_str(), run.spread_sup, run.ubar, lo, hi);
        detail += buf;
    }
    report(6, pass, "pucci-ou tails are spatially constant and bounded by the data", detail);
}

// ---------------------------------------------------------------------------
// 7. Uniqueness probe: two reference points give the same limit.

void criterion_7() {
    Preset preset = get_preset("paper-example");
    const ProblemSpec problem = build_problem(preset, build_grid(1, 6.0, 481));
    LadderParams lp;
    lp.length = 9;  // delta_min ~ 7.8e-4 so that delta*osc(chi) sits under 1e-3
    lp.solve.tol = 1e-9;
    const UniquenessProbe probe =
        uniqueness_probe(problem, barrier(), lp, {0.0, 0.0}, {1.0, 0.0});
    for (const auto& rung : probe.run_a.ladder) g_all_rungs.push_back(rung);
    for (const auto& rung : probe.run_b.ladder) g_all_rungs.push_back(rung);
    const bool pass = probe.delta_c <= 1e-3 && probe.max_dev_from_constant <= 1e-3;
    char detail[120];
    std::snprintf(detail, sizeof detail, "|c_a - c_b| = %.2e <= 1e-3, corrector deviation = %.2e <= 1e-3",
                  probe.delta_c, probe.max_dev_from_constant);
    report(7, pass, "critical value is independent of the reference point", detail);
}

// ---------------------------------------------------------------------------
// 8. Bounded corrector in the strong-drift regime.

void criterion_8() {
    Preset preset = get_preset("strong-drift");
    const ProblemSpec problem = build_problem(preset, build_grid(1, preset.grid_l, preset.grid_n));
    LadderParams lp;
    // the cubic drift puts the stencil scale near 7e4, so the rounding floor
    // of the direct solves sits around 1e-8; 1e-7 is comfortably attainable
    lp.solve.tol = 1e-7;
    const ErgodicResult r = run_ladder(problem, lp);

    bool pass = r.completed && r.growth_valid && r.growth.verdict_bounded;
    double inner = 0.0, outer = 0.0;
    if (r.growth_valid) {
        const size_t n = r.growth.max_abs_chi.size();
        for (size_t j = 0; j < n; ++j)
            (j < n / 2 ? inner : outer) =
                std::max(j < n / 2 ? inner : outer, r.growth.max_abs_chi[j]);
        pass = pass && outer <= 1.05 * inner;
    }
    char detail[140];
    std::snprintf(detail, sizeof detail,
                  "bounded verdict %s, outer max %.4f <= 1.05 * inner max %.4f",
                  r.growth.verdict_bounded ? "true" : "false", outer, inner);
    report(8, pass, "strong drift keeps the corrector bounded", detail);
}

// ---------------------------------------------------------------------------
// 9. Scheme property suite.

void criterion_9() {
    int monotonicity_violations = 0, comparison_violations = 0;
    double constants_residual = 0.0, consistency_err = 0.0;

    // A two-control problem exercises the envelope in every property.
    ProblemSpec p;
    p.grid = build_grid(1, 2.0, 41);
    p.controls = ControlSet{2, ""};
    CoefficientClosures c;
    c.a = [](Point x, int alpha) { return SymMat{0.6 + 0.2 * alpha + 0.05 * x[0] * x[0], 0, 0}; };
    c.b = [](Point x, int alpha) { return Vec2{(alpha ? -1.4 : -0.8) * x[0], 0.0}; };
    c.c0 = [](Point x, int) { return 0.1 + 0.05 * std::abs(x[0]); };
    c.l = [](Point x, int alpha) { return std::sin(x[0] + alpha); };
    p.coeffs = sample_coefficients(c, p.grid, p.controls);
    const DiscreteOperator op = discretize(p, barrier());

    Rng rng(0xACC);
    for (int trial = 0; trial < 1000; ++trial) {
        ScalarField u(p.grid), v(p.grid);
        for (int node = 0; node < u.size(); ++node) {
            u[node] = rng.uniform(-2.0, 2.0);
            v[node] = u[node] + rng.uniform(0.0, 1.0);
        }
        const auto interior = p.grid.interior();
        const int node = interior[static_cast<size_t>(
            rng.uniform(0.0, static_cast<double>(interior.size()) - 1e-9))];
        v[node] = u[node];
        const double delta = rng.uniform(0.0, 0.8);
        if (apply(op, u, delta)[node] < apply(op, v, delta)[node] - 1e-12)
            ++monotonicity_violations;
    }

    {  // constants solve the homogeneous system
        ProblemSpec hom = p;
        CoefficientClosures hc = c;
        hc.c0 = [](Point, int) { return 0.0; };
        hc.l = [](Point, int) { return 0.0; };
        hom.coeffs = sample_coefficients(hc, hom.grid, hom.controls);
        const double k = 2.7;
        const DiscreteOperator hop =
            discretize(hom, BoundaryClosure{ClosureKind::FrozenValue, 0.05, k});
        constants_residual = max_abs(apply(hop, ScalarField(hom.grid, k), 0.0));
    }

    {  // ordered data stay ordered under the march
        const double dt = 0.9 / op.max_diag_plus_c0;
        for (int pair = 0; pair < 100; ++pair) {
            ScalarField u(p.grid), v(p.grid);
            for (int node = 0; node < u.size(); ++node) {
                u[node] = rng.uniform(-1.0, 1.0);
                v[node] = u[node] + rng.uniform(0.0, 0.6);
            }
            for (int node = 0; node < u.size(); ++node)
                if (p.grid.is_boundary(node))
                    u[node] = v[node] = op.boundary_value[static_cast<size_t>(node)];
            for (int step = 0; step < 20; ++step) {
                parabolic_step(op, u, dt);
                parabolic_step(op, v, dt);
                for (int node = 0; node < u.size(); ++node)
                    if (u[node] > v[node] + 1e-12) ++comparison_violations;
            }
        }
    }

    {  // consistency: quadratic with pure diffusion, affine with drift
        ProblemSpec q;
        q.grid = build_grid(1, 2.0, 81);
        q.controls = ControlSet{1, ""};
        CoefficientClosures qc;
        qc.a = [](Point, int) { return SymMat{1.3, 0, 0}; };
        qc.b = [](Point, int) { return Vec2{0.0, 0.0}; };
        qc.c0 = [](Point, int) { return 0.4; };
        qc.l = [](Point, int) { return 0.9; };
        q.coeffs = sample_coefficients(qc, q.grid, q.controls);
        const DiscreteOperator qop = discretize(q, barrier());
        auto quad = [](double x) { return 0.5 * x * x - 3.0 * x + 1.0; };
        const ScalarField u = sample_field(q.grid, [&](Point x) { return quad(x[0]); });
        const ScalarField res = apply(qop, u, 0.0);
        for (int node : q.grid.interior()) {
            const double exact = -1.3 + 0.4 * quad(q.grid.coord(node)[0]) - 0.9;
            consistency_err = std::max(consistency_err, std::abs(res[node] - exact));
        }

        CoefficientClosures ac = qc;
        ac.b = [](Point, int) { return Vec2{2.3, 0.0}; };
        ac.c0 = [](Point, int) { return 0.0; };
        ac.l = [](Point, int) { return 0.0; };
        q.coeffs = sample_coefficients(ac, q.grid, q.controls);
        const DiscreteOperator aop = discretize(q, barrier());
        const ScalarField v = sample_field(q.grid, [](Point x) { return 4.0 * x[0] - 7.0; });
        const ScalarField vres = apply(aop, v, 0.0);
        for (int node : q.grid.interior())
            consistency_err = std::max(consistency_err, std::abs(vres[node] - (-2.3 * 4.0)));
    }

    const bool pass = monotonicity_violations == 0 && comparison_violations == 0 &&
                      constants_residual <= 1e-12 && consistency_err <= 1e-10;
    char detail[180];
    std::snprintf(detail, sizeof detail,
                  "monotonicity 0/1000 (%d), comparison 0/100 (%d), constants %.1e <= 1e-12, "
                  "consistency %.1e <= 1e-10",
                  monotonicity_violations, comparison_violations, constants_residual,
                  consistency_err);
    report(9, pass, "scheme property suite", detail);
}

// ---------------------------------------------------------------------------
// 10. Shift covariance of the ergodic pipeline. The substitution
// u -> u + k/delta shifts the Dirichlet rows too, so the shifted run anchors
// its closure at k/delta on every rung.

struct HandLadder {
    double c = 0.0;
    ScalarField chi;
};

HandLadder anchored_ladder(const ProblemSpec& problem, double anchor_times_delta, int length,
                           double tol) {
    HandLadder out;
    ScalarField u;
    double delta = 0.2;
    const int ref = problem.grid.origin_node();
    for (int k = 0; k < length; ++k) {
        const BoundaryClosure closure{ClosureKind::QuadraticBarrierDirichlet, 0.05,
                                      anchor_times_delta / delta};
        const DiscreteOperator op = discretize(problem, closure);
        SolveParams sp;
        sp.tol = tol;
        const DiscountedSolve s = solve_discounted(op, delta, sp, k == 0 ? nullptr : &u);
        u = s.u;
        out.c = -delta * u[ref];
        LadderRung rung;
        rung.delta = delta;
        rung.c_k = out.c;
        rung.residual = s.residual_inf;
        rung.closure_slack = s.closure_slack;
        rung.b1_lhs = s.b1_lhs;
        rung.b1_rhs = s.b1_rhs;
        g_all_rungs.push_back(rung);
        delta *= 0.5;
    }
    out.chi = u;
    const double at_ref = u[ref];
    for (double& v : out.chi.values) v -= at_ref;
    return out;
}

void criterion_10(const ErgodicResult& base_run) {
    Preset shifted = get_preset("paper-example");
    auto base_l = shifted.closures.l;
    shifted.closures.l = [base_l](Point x, int alpha) { return base_l(x, alpha) + 1.0; };
    const ProblemSpec problem = build_problem(shifted, build_grid(1, 6.0, 481));

    Preset base_preset = get_preset("paper-example");
    const ProblemSpec base_problem = build_problem(base_preset, build_grid(1, 6.0, 481));
    // tol sits above the elimination rounding floor (~3e-10 at u ~ 1/delta);
    // the residual enters c through delta and chi through an O(1) gap, so
    // 1e-9 leaves an order of magnitude against both stated tolerances.
    const HandLadder base = anchored_ladder(base_problem, 0.0, 7, 1e-9);
    const HandLadder moved = anchored_ladder(problem, 1.0, 7, 1e-9);

    double chi_diff = 0.0;
    for (int node = 0; node < base.chi.size(); ++node)
        chi_diff = std::max(chi_diff, std::abs(base.chi[node] - moved.chi[node]));
    const bool pass = std::abs((moved.c - base.c) + 1.0) <= 1e-6 && chi_diff <= 1e-8;
    char detail[140];
    std::snprintf(detail, sizeof detail, "c shift error = %.2e <= 1e-6, max |chi difference| = %.2e <= 1e-8",
                  std::abs((moved.c - base.c) + 1.0), chi_diff);
    report(10, pass, "adding 1 to the running cost moves c by -1 and fixes chi", detail);
    (void)base_run;
}

}  // namespace

void guarded(int criterion, const char* what, const std::function<void()>& body) {
    try {
        body();
    } catch (const std::exception& e) {
        report(criterion, false, what, std::string("aborted: ") + e.what());
    }
}

int main() {
    std::printf("acceptance suite (single-threaded)\n");
    ErgodicResult paper;
    guarded(1, "explicit example", [&] { paper = criterion_1(); });
    guarded(3, "pucci oracle", [] { criterion_3(); });
    guarded(4, "radial formula", [] { criterion_4(); });
    guarded(5, "parabolic OU average", [] { criterion_5(); });
    guarded(6, "stabilization constancy", [] { criterion_6(); });
    guarded(7, "uniqueness probe", [] { criterion_7(); });
    guarded(8, "bounded corrector", [] { criterion_8(); });
    guarded(9, "scheme properties", [] { criterion_9(); });
    guarded(10, "shift covariance", [&] { criterion_10(paper); });
    guarded(2, "discounted bound", [] { criterion_2(); });  // aggregates the ladders above
    std::printf("%s: %d criterion(s) failed\n", g_failures == 0 ? "OK" : "FAILED", g_failures);
    return g_failures == 0 ? 0 : 1;
}
