#include "hjb/ergodic.hpp"

#include <cmath>
#include <future>

namespace hjb {

GrowthReport growth_diagnostics(const ScalarField& chi, const std::vector<double>& beta_list,
                                int n_annuli) {
    const Grid& g = chi.grid;
    require(chi.size() == g.node_count(), "growth diagnostics: field size mismatch");

    // Nodes well inside the interior: the closure rows plus the discrete
    // upwind boundary layer occupy the outermost few node layers (for strong
    // inward drift the layer is only 2-3 nodes thick at any spacing).
    const int skin = 4;
    double r_max = 0.0;
    std::vector<std::pair<double, double>> samples;  // (radius, |chi|)
    for (int node = 0; node < g.node_count(); ++node) {
        const auto m = g.multi_index(node);
        bool deep = true;
        for (int d = 0; d < g.dim; ++d)
            deep &= m[d] >= skin && m[d] <= g.n_per_dim - 1 - skin;
        if (!deep) continue;
        const Point x = g.coord(node);
        const double r = std::sqrt(x[0] * x[0] + x[1] * x[1]);
        if (r <= 0.0) continue;
        samples.emplace_back(r, std::abs(chi[node]));
        r_max = std::max(r_max, r);
    }

    int n_ann = n_annuli;
    if (n_ann <= 0) n_ann = std::min(12, static_cast<int>(std::floor(r_max / (2.0 * g.spacing))));
    if (n_ann < 3)
        throw ConfigError("growth diagnostics: grid too small for at least 3 annuli");

    GrowthReport rep;
    rep.beta_list = beta_list;
    rep.annulus_r.assign(static_cast<size_t>(n_ann), 0.0);
    rep.max_abs_chi.assign(static_cast<size_t>(n_ann), 0.0);
    std::vector<char> filled(static_cast<size_t>(n_ann), 0);
    for (const auto& [r, v] : samples) {
        int j = static_cast<int>(std::floor(r / r_max * n_ann));
        if (j >= n_ann) j = n_ann - 1;
        const size_t js = static_cast<size_t>(j);
        rep.annulus_r[js] = std::max(rep.annulus_r[js], r);
        rep.max_abs_chi[js] = std::max(rep.max_abs_chi[js], v);
        filled[js] = 1;
    }
    for (char f : filled)
        if (!f) throw ConfigError("growth diagnostics: empty annulus; reduce the annulus count");

    auto ratios = [&](auto&& wref) {
        std::vector<double> out(static_cast<size_t>(n_ann));
        for (int j = 0; j < n_ann; ++j)
            out[static_cast<size_t>(j)] =
                rep.max_abs_chi[static_cast<size_t>(j)] / wref(rep.annulus_r[static_cast<size_t>(j)]);
        return out;
    };
    rep.ratio_quadratic = ratios([](double r) { return r * r; });
    for (double beta : beta_list)
        rep.ratio_beta.push_back(ratios([beta](double r) { return std::pow(r, beta); }));
    rep.ratio_bounded = ratios([](double) { return 1.0; });

    // Verdicts over the outer half of the annuli: non-increasing within 10%
    // stepwise and cumulatively; "strict" additionally needs a 10% net drop.
    const int half = n_ann / 2;
    auto nonincreasing10 = [&](const std::vector<double>& r) {
        double scale = 0.0;
        for (double v : r) scale = std::max(scale, std::abs(v));
        const double eps = 1e-12 * std::max(1.0, scale);
        for (int j = half; j + 1 < n_ann; ++j)
            if (r[static_cast<size_t>(j + 1)] > 1.1 * r[static_cast<size_t>(j)] + eps) return false;
        return r[static_cast<size_t>(n_ann - 1)] <= 1.1 * r[static_cast<size_t>(half)] + eps;
    };
    auto strict_decay = [&](const std::vector<double>& r) {
        double scale = 0.0;
        for (double v : r) scale = std::max(scale, std::abs(v));
        const double eps = 1e-12 * std::max(1.0, scale);
        return nonincreasing10(r) &&
               r[static_cast<size_t>(n_ann - 1)] <= 0.9 * r[static_cast<size_t>(half)] + eps;
    };
    rep.verdict_subquadratic = strict_decay(rep.ratio_quadratic);
    for (const auto& rb : rep.ratio_beta) rep.verdict_beta_decay.push_back(strict_decay(rb));
    rep.verdict_bounded = nonincreasing10(rep.ratio_bounded);
    return rep;
}

bool detect_oscillation(const std::vector<double>& c_values, double tol) {
    int flips = 0;
    double prev_diff = 0.0;
    bool have_prev = false;
    for (size_t k = 1; k < c_values.size(); ++k) {
        const double d = c_values[k] - c_values[k - 1];
        if (std::abs(d) <= tol) continue;
        if (have_prev && d * prev_diff < 0.0) ++flips;
        prev_diff = d;
        have_prev = true;
    }
    return flips >= 2;
}

ErgodicResult vanishing_discount(const ProblemSpec& problem, const BoundaryClosure& closure,
                                 const LadderParams& params, Point x_ref) {
    require(params.delta0 > 0.0, "vanishing discount needs delta0 > 0");
    require(params.factor > 0.0 && params.factor < 1.0,
            "vanishing discount needs ladder factor in (0, 1)");
    require(params.length >= 1, "vanishing discount needs a nonempty ladder");

    const DiscreteOperator op = discretize(problem, closure);
    ErgodicResult out;
    out.x_ref_node = problem.grid.nearest_node(x_ref);

    ScalarField u(problem.grid);
    double delta = params.delta0;
    for (int k = 0; k < params.length; ++k) {
        DiscountedSolve solve;
        try {
            solve = solve_discounted(op, delta, params.solve, k == 0 ? nullptr : &u);
        } catch (const NumericalError& err) {
            out.completed = false;
            out.failure = err.what();
            return out;
        }
        u = std::move(solve.u);
        LadderRung rung;
        rung.delta = delta;
        rung.c_k = -delta * u[out.x_ref_node];
        rung.residual = solve.residual_inf;
        rung.iterations = solve.iterations;
        rung.sweeps = solve.sweeps;
        rung.closure_slack = solve.closure_slack;
        rung.b1_lhs = solve.b1_lhs;
        rung.b1_rhs = solve.b1_rhs;
        out.ladder.push_back(rung);
        delta *= params.factor;
    }

    std::vector<double> cs;
    for (const auto& r : out.ladder) cs.push_back(r.c_k);
    for (size_t k = 1; k < cs.size(); ++k) out.c_diffs.push_back(std::abs(cs[k] - cs[k - 1]));
    out.c = cs.back();
    out.oscillation = detect_oscillation(cs, 10.0 * params.solve.tol);

    if (cs.size() >= 3) {
        const double d1 = cs[cs.size() - 1] - cs[cs.size() - 2];
        const double d2 = cs[cs.size() - 2] - cs[cs.size() - 3];
        const double den = d1 - d2;
        const double scale = std::max({std::abs(cs.back()), std::abs(d1), 1.0});
        if (std::abs(den) > 1e-14 * scale) {
            out.c_aitken = cs.back() - d1 * d1 / den;
            out.aitken_valid = true;
        }
    }

    out.chi = u;
    const double ref = u[out.x_ref_node];
    for (double& v : out.chi.values) v -= ref;

    try {
        out.growth = growth_diagnostics(out.chi, params.growth_betas);
        out.growth_valid = true;
    } catch (const ConfigError&) {
        out.growth_valid = false;  // grid too small for annuli; diagnostics only
    }

    out.completed = true;
    return out;
}

UniquenessProbe uniqueness_probe(const ProblemSpec& problem, const BoundaryClosure& closure,
                                 const LadderParams& params, Point x_ref_a, Point x_ref_b,
                                 bool parallel) {
    const int node_a = problem.grid.nearest_node(x_ref_a);
    const int node_b = problem.grid.nearest_node(x_ref_b);
    require(node_a != node_b, "uniqueness probe needs two distinct reference nodes");

    UniquenessProbe out;
    if (parallel) {
        auto fa = std::async(std::launch::async, [&] {
            return vanishing_discount(problem, closure, params, x_ref_a);
        });
        out.run_b = vanishing_discount(problem, closure, params, x_ref_b);
        out.run_a = fa.get();
    } else {
        out.run_a = vanishing_discount(problem, closure, params, x_ref_a);
        out.run_b = vanishing_discount(problem, closure, params, x_ref_b);
    }
    if (!out.run_a.completed || !out.run_b.completed) {
        throw NumericalError("uniqueness probe: ladder failed: " +
                             (out.run_a.completed ? out.run_b.failure : out.run_a.failure));
    }

    out.delta_c = std::abs(out.run_a.c - out.run_b.c);
    const auto interior = problem.grid.interior();
    double mean = 0.0;
    for (int node : interior) mean += out.run_a.chi[node] - out.run_b.chi[node];
    mean /= static_cast<double>(interior.size());
    for (int node : interior)
        out.max_dev_from_constant = std::max(
            out.max_dev_from_constant, std::abs(out.run_a.chi[node] - out.run_b.chi[node] - mean));
    return out;
}

}  // namespace hjb
