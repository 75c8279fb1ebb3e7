// Batch front end: condition checks plus discounted, ergodic and parabolic
// pipelines over the named presets, emitting CSV/JSON artifacts.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "hjb/io.hpp"
#include "hjb/presets.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonOpts {
    std::string preset = "ou-1d";
    double grid_l = 0.0;  // 0 = preset default
    int grid_n = 0;
    int dim = 0;
    std::string mode;
    double lambda = -1.0;
    double big_lambda = -1.0;
    std::string coeffs_csv;
    std::string closure_kind;  // empty = per-command default
    double h_bar = 0.05;
    double closure_anchor = 0.0;
    double tol = 1e-8;
    std::string out_dir = "hjb-out";
    uint64_t seed = 1;
    int threads = 1;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->fallthrough();  // lets top-level options like --config follow the subcommand
    cmd->add_option("--preset", o.preset, "problem preset: " + [] {
            std::string s;
            for (const auto& n : hjb::preset_names()) s += n + " ";
            return s;
        }());
    cmd->add_option("--grid-l", o.grid_l, "box halfwidth L (0 = preset default)");
    cmd->add_option("--grid-n", o.grid_n, "odd nodes per dimension (0 = preset default)");
    cmd->add_option("--dim", o.dim, "dimension 1 or 2 (0 = preset default)");
    cmd->add_option("--mode", o.mode, "hjb-inf | hjb-sup | pucci-minus | pucci-plus");
    cmd->add_option("--lambda", o.lambda, "Pucci/ellipticity constant lambda");
    cmd->add_option("--big-lambda", o.big_lambda, "Pucci/ellipticity constant Lambda");
    cmd->add_option("--coeffs-csv", o.coeffs_csv,
                    "import coefficients from CSV (node_index, alpha_index, a_11[,a_12,a_22], "
                    "b_1[,b_2], c0, l) instead of preset closures");
    cmd->add_option("--closure-kind", o.closure_kind, "boundary closure: barrier | frozen");
    cmd->add_option("--h-bar", o.h_bar, "quadratic barrier slope");
    cmd->add_option("--closure-anchor", o.closure_anchor, "closure anchor constant");
    cmd->add_option("--tol", o.tol, "solver residual tolerance");
    cmd->add_option("--out", o.out_dir, "output directory");
    cmd->add_option("--seed", o.seed, "rng seed echoed into the manifest");
    cmd->add_option("--threads", o.threads, "thread count (default 1 for reproducibility)")
        ->check(CLI::Range(1, 64));
}

struct Resolved {
    hjb::Preset preset;
    hjb::Grid grid;
    hjb::ProblemSpec problem;
    hjb::BoundaryClosure closure;
};

Resolved resolve(const CommonOpts& o, hjb::ClosureKind default_kind) {
    Resolved r;
    r.preset = hjb::get_preset(o.preset);
    if (o.grid_l > 0.0) r.preset.grid_l = o.grid_l;
    if (o.grid_n > 0) r.preset.grid_n = o.grid_n;
    if (o.dim > 0) r.preset.dim = o.dim;
    if (!o.mode.empty()) r.preset.mode = hjb::mode_from_string(o.mode);
    if (o.lambda > 0.0) r.preset.lambda = o.lambda;
    if (o.big_lambda > 0.0) r.preset.Lambda = o.big_lambda;

    r.grid = hjb::build_grid(r.preset.dim, r.preset.grid_l, r.preset.grid_n);
    if (!o.coeffs_csv.empty()) {
        r.problem.grid = r.grid;
        r.problem.coeffs = hjb::load_coefficients_csv_file(o.coeffs_csv, r.grid);
        r.problem.controls = hjb::ControlSet{r.problem.coeffs.n_controls, "csv import"};
        r.problem.mode = r.preset.mode;
        r.problem.pucci_lambda = r.preset.lambda;
        r.problem.pucci_Lambda = r.preset.Lambda;
        hjb::validate(r.problem);
    } else {
        r.problem = hjb::build_problem(r.preset, r.grid);
    }

    r.closure.kind = o.closure_kind.empty() ? default_kind
                                            : hjb::closure_kind_from_string(o.closure_kind);
    r.closure.h_bar = o.h_bar;
    r.closure.anchor = o.closure_anchor;
    return r;
}

json common_manifest(const std::string& command, const CommonOpts& o, const Resolved& r) {
    return json{{"command", command},
                {"version", hjb::kVersion},
                {"seed", o.seed},
                {"threads", o.threads},
                {"config",
                 {{"preset", r.preset.name},
                  {"grid_l", r.preset.grid_l},
                  {"grid_n", r.preset.grid_n},
                  {"dim", r.preset.dim},
                  {"mode", hjb::to_string(r.preset.mode)},
                  {"lambda", r.preset.lambda},
                  {"big_lambda", r.preset.Lambda},
                  {"coeffs_csv", o.coeffs_csv},
                  {"closure_kind", hjb::to_string(r.closure.kind)},
                  {"h_bar", r.closure.h_bar},
                  {"closure_anchor", r.closure.anchor},
                  {"tol", o.tol}}}};
}

void emit(const CommonOpts& o, json manifest) {
    fs::create_directories(o.out_dir);
    hjb::write_json_file(o.out_dir + "/manifest.json", manifest);
}

// ---------------------------------------------------------------- check ----

struct CheckOpts {
    CommonOpts common;
    std::vector<std::string> conditions{"C4"};
    std::vector<double> radii;
    int radii_count = 24;
    int angular = 64;
    double big_m = 1.0;
    double beta = 1.0;
    double rho = 1.0;
    double r_anchor = 0.0;
    double c_value = 0.0;
    double l_inf = 0.0;
    double ou_gamma = 1.0;
    double ou_mean = 0.0;
    double strict_eps = 1e-6;
    double ou_tol = 1e-2;
};

int run_check(const CheckOpts& c) {
    Resolved r = resolve(c.common, hjb::ClosureKind::QuadraticBarrierDirichlet);

    std::vector<double> radii = c.radii;
    if (radii.empty()) {
        const double step = r.preset.grid_l / c.radii_count;
        for (int k = 1; k <= c.radii_count; ++k) radii.push_back(step * k);
    }

    hjb::ConditionParams params;
    params.lambda = r.preset.lambda;
    params.Lambda = r.preset.Lambda;
    params.M = c.big_m;
    params.beta = c.beta;
    params.rho = c.rho;
    if (c.r_anchor > 0.0) params.R = c.r_anchor;
    params.c_value = c.c_value;
    params.l_inf = c.l_inf;
    params.gamma = c.ou_gamma;
    params.m_center = {c.ou_mean, 0.0};
    params.strict_eps = c.strict_eps;
    params.ou_tol = c.ou_tol;
    if (r.problem.controls.count == 1 && c.common.coeffs_csv.empty()) {
        // Natural single-control decomposition for C6.5 / C10.
        auto closures = r.preset.closures;
        params.b_bar = [closures](hjb::Point x) { return closures.b(x, 0); };
        params.g = [](hjb::Point) { return 0.0; };
        params.c_bar = [closures](hjb::Point x) { return closures.c0(x, 0); };
    }

    json reports = json::array();
    bool all_hold = true;
    for (const auto& name : c.conditions) {
        const hjb::ConditionId id = hjb::condition_from_string(name);
        const hjb::ConditionReport rep = hjb::check_condition(
            id, r.preset.closures, r.problem.controls.count, r.preset.dim, params, radii,
            c.angular);
        all_hold &= rep.holds;
        reports.push_back(hjb::to_json(rep));
        std::cout << to_string(id) << ": " << (rep.holds ? "holds, R0 = " : "does not hold")
                  << (rep.holds ? std::to_string(rep.R0) : "") << "\n";
    }

    json manifest = common_manifest("check", c.common, r);
    manifest["config"]["conditions"] = c.conditions;
    manifest["config"]["radii"] = radii;
    manifest["config"]["angular"] = c.angular;
    emit(c.common, manifest);
    hjb::write_json_file(c.common.out_dir + "/conditions.json", json{{"reports", reports}});
    return all_hold ? 0 : 1;
}

// ---------------------------------------------------------------- solve ----

struct SolveOpts {
    CommonOpts common;
    double delta = 0.2;
    int max_outer = 500;
    std::string dump_operator;
};

int run_solve(const SolveOpts& s) {
    Resolved r = resolve(s.common, hjb::ClosureKind::QuadraticBarrierDirichlet);
    const hjb::DiscreteOperator op = hjb::discretize(r.problem, r.closure);
    if (!s.dump_operator.empty()) {
        std::ofstream out(s.dump_operator);
        hjb::require(out.good(), "cannot write operator dump: " + s.dump_operator);
        hjb::dump_triplets(op, out);
    }
    hjb::SolveParams sp;
    sp.tol = s.common.tol;
    sp.max_outer = s.max_outer;
    const hjb::DiscountedSolve solve = hjb::solve_discounted(op, s.delta, sp);

    json manifest = common_manifest("solve", s.common, r);
    manifest["config"]["delta"] = s.delta;
    emit(s.common, manifest);
    hjb::write_json_file(s.common.out_dir + "/solve.json", hjb::to_json(solve));
    std::ofstream u_csv(s.common.out_dir + "/u.csv");
    hjb::write_field_csv(u_csv, solve.u);
    std::cout << "delta " << solve.delta << ": residual " << solve.residual_inf << " after "
              << solve.iterations << " policy iterations, u(0) = "
              << solve.u[solve.u.grid.origin_node()] << "\n";
    return 0;
}

// -------------------------------------------------------------- ergodic ----

struct ErgodicOpts {
    CommonOpts common;
    double delta0 = -1.0;
    double ladder_factor = -1.0;
    int ladder_len = 0;
    double x_ref = 0.0;
    double x_ref_b = 0.0;
    bool probe = false;
    bool gnuplot = false;
    std::vector<double> growth_betas{1.0, 2.0};
};

void write_gnuplot(const std::string& dir, const std::string& csv, const std::string& title,
                   const std::vector<std::pair<int, std::string>>& columns) {
    std::string gp = "set datafile separator ','\nset key autotitle columnhead\n";
    gp += "set title '" + title + "'\nplot ";
    bool first = true;
    for (const auto& [col, name] : columns) {
        if (!first) gp += ", ";
        gp += "'" + csv + "' using 1:" + std::to_string(col) + " with lines title '" + name + "'";
        first = false;
    }
    gp += "\npause -1\n";
    hjb::write_text_file(dir + "/plot.gp", gp);
}

int run_ergodic(const ErgodicOpts& e) {
    Resolved r = resolve(e.common, hjb::ClosureKind::QuadraticBarrierDirichlet);
    hjb::LadderParams lp;
    lp.delta0 = e.delta0 > 0.0 ? e.delta0 : r.preset.delta0;
    lp.factor = e.ladder_factor > 0.0 ? e.ladder_factor : r.preset.ladder_factor;
    lp.length = e.ladder_len > 0 ? e.ladder_len : r.preset.ladder_len;
    lp.solve.tol = e.common.tol;
    lp.growth_betas = e.growth_betas;

    json manifest = common_manifest("ergodic", e.common, r);
    manifest["config"]["delta0"] = lp.delta0;
    manifest["config"]["ladder_factor"] = lp.factor;
    manifest["config"]["ladder_len"] = lp.length;
    manifest["config"]["x_ref"] = e.x_ref;
    emit(e.common, manifest);

    if (e.probe) {
        const hjb::UniquenessProbe probe =
            hjb::uniqueness_probe(r.problem, r.closure, lp, {e.x_ref, 0.0}, {e.x_ref_b, 0.0},
                                  e.common.threads > 1);
        json j{{"delta_c", probe.delta_c},
               {"max_dev_from_constant", probe.max_dev_from_constant},
               {"run_a", hjb::to_json(probe.run_a, "chi_a.csv")},
               {"run_b", hjb::to_json(probe.run_b, "chi_b.csv")}};
        hjb::write_json_file(e.common.out_dir + "/ergodic.json", j);
        std::ofstream a(e.common.out_dir + "/chi_a.csv"), b(e.common.out_dir + "/chi_b.csv");
        hjb::write_field_csv(a, probe.run_a.chi);
        hjb::write_field_csv(b, probe.run_b.chi);
        std::cout << "uniqueness probe: |c_a - c_b| = " << probe.delta_c
                  << ", max deviation from constant = " << probe.max_dev_from_constant << "\n";
        return 0;
    }

    const hjb::ErgodicResult result =
        hjb::vanishing_discount(r.problem, r.closure, lp, {e.x_ref, 0.0});
    hjb::write_json_file(e.common.out_dir + "/ergodic.json", hjb::to_json(result, "chi.csv"));
    std::ofstream chi_csv(e.common.out_dir + "/chi.csv");
    hjb::write_field_csv(chi_csv, result.chi);
    if (e.gnuplot)
        write_gnuplot(e.common.out_dir, "chi.csv", "corrector", {{2, "chi"}});
    if (!result.completed) {
        std::cerr << "ergodic ladder aborted: " << result.failure << "\n";
        return 1;
    }
    std::cout << "c = " << result.c;
    if (result.aitken_valid) std::cout << " (aitken " << result.c_aitken << ")";
    std::cout << " after " << result.ladder.size() << " rungs\n";
    return 0;
}

// ------------------------------------------------------------ parabolic ----

struct ParabolicOpts {
    CommonOpts common;
    std::string h0;
    double h0_value = 1.0;
    double dt = 0.0;
    double t_final = 0.0;
    double tail_window = 0.0;
    int snapshots = 9;
    bool gnuplot = false;
};

int run_parabolic(const ParabolicOpts& p) {
    Resolved r = resolve(p.common, hjb::ClosureKind::FrozenValue);
    const std::string h0_name = p.h0.empty() ? r.preset.h0 : p.h0;
    const auto h0_fn = hjb::initial_datum(h0_name, p.h0_value);
    const hjb::ScalarField h0 = hjb::sample_field(r.grid, h0_fn);

    // Default frozen closure anchored at the boundary mean of the datum, so
    // the march stays inside [min h0, max h0].
    if (p.common.closure_kind.empty()) {
        double sum = 0.0;
        int count = 0;
        for (int node = 0; node < r.grid.node_count(); ++node)
            if (r.grid.is_boundary(node)) {
                sum += h0[node];
                ++count;
            }
        r.closure.kind = hjb::ClosureKind::FrozenValue;
        r.closure.anchor = sum / count;
    }

    hjb::ParabolicParams pp;
    pp.dt = p.dt;
    pp.t_final = p.t_final > 0.0 ? p.t_final : r.preset.t_final;
    // explicit flag > preset default, but never wider than t_final/4 rule
    if (p.tail_window > 0.0)
        pp.tail_window = p.tail_window;
    else if (r.preset.tail_window > 0.0 && r.preset.tail_window <= pp.t_final)
        pp.tail_window = r.preset.tail_window;
    pp.snapshot_count = p.snapshots;

    json manifest = common_manifest("parabolic", p.common, r);
    manifest["config"]["h0"] = h0_name;
    manifest["config"]["h0_value"] = p.h0_value;
    manifest["config"]["dt"] = p.dt;
    manifest["config"]["t_final"] = pp.t_final;
    manifest["config"]["tail_window"] = pp.tail_window;
    emit(p.common, manifest);

    const hjb::ParabolicRun run = hjb::march_parabolic(r.problem, r.closure, h0, pp);
    json j = hjb::to_json(run);
    if (r.preset.ou_mean && r.preset.ou_variance && r.grid.dim == 1 &&
        r.problem.controls.count == 1) {
        const double avg = hjb::gaussian_average(
            [&](double y) { return h0_fn({y, 0.0}); }, *r.preset.ou_mean, *r.preset.ou_variance,
            512);
        j["gaussian_average"] = avg;
        j["ubar_deviation"] = std::abs(run.ubar - avg);
    }
    hjb::write_json_file(p.common.out_dir + "/parabolic.json", j);
    std::ofstream snaps(p.common.out_dir + "/snapshots.csv");
    hjb::write_snapshots_csv(snaps, run);
    std::ofstream tail(p.common.out_dir + "/tail.csv");
    hjb::write_tail_csv(tail, run);
    if (p.gnuplot) {
        const int off = r.grid.dim == 2 ? 1 : 0;
        write_gnuplot(p.common.out_dir, "tail.csv", "tail statistics",
                      {{2 + off, "tail sup"}, {3 + off, "tail inf"}});
    }
    if (!run.completed) {
        std::cerr << "parabolic march aborted: " << run.failure << "\n";
        return 1;
    }
    std::cout << "ubar = " << run.ubar << ", ulow = " << run.ulow
              << ", spread(sup) = " << run.spread_sup << ", spread(inf) = " << run.spread_inf
              << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pucci/HJB toolkit: condition checks, discounted and ergodic solves, "
                 "parabolic stabilization runs"};
    app.require_subcommand(1);
    app.set_config("--config", "",
                   "key = value config file; subcommand options live in [sections] or use "
                   "dotted keys (ergodic.grid-n=241); flags override the file");

    CheckOpts check;
    CLI::App* c_check = app.add_subcommand("check", "verify structural conditions over radii");
    add_common(c_check, check.common);
    c_check->add_option("--conditions", check.conditions, "condition ids (comma separated)")
        ->delimiter(',');
    c_check->add_option("--radii", check.radii, "explicit radius samples")->delimiter(',');
    c_check->add_option("--radii-count", check.radii_count, "uniform radius count up to L");
    c_check->add_option("--angular", check.angular, "direction fan size in dim 2");
    c_check->add_option("--big-m", check.big_m, "M for C10strong/C10ou");
    c_check->add_option("--beta", check.beta, "beta for C10ou");
    c_check->add_option("--rho", check.rho, "rho for C10extrastrong/C10lessstrong");
    c_check->add_option("--r-anchor", check.r_anchor, "R for the inverse-power profile");
    c_check->add_option("--c-value", check.c_value, "critical value |c| for C10extrastrong");
    c_check->add_option("--l-inf", check.l_inf, "sup norm of l for C10extrastrong");
    c_check->add_option("--ou-gamma", check.ou_gamma, "gamma for OU-form");
    c_check->add_option("--ou-mean", check.ou_mean, "m for OU-form");
    c_check->add_option("--strict-eps", check.strict_eps, "strictness slack for C4bis");
    c_check->add_option("--ou-tol", check.ou_tol, "tolerance for the OU-form limit");

    SolveOpts solve;
    CLI::App* c_solve = app.add_subcommand("solve", "single discounted solve");
    add_common(c_solve, solve.common);
    c_solve->add_option("--delta", solve.delta, "discount rate")->check(CLI::PositiveNumber);
    c_solve->add_option("--max-outer", solve.max_outer, "policy iteration cap");
    c_solve->add_option("--dump-operator", solve.dump_operator, "triplet dump path");

    ErgodicOpts ergodic;
    CLI::App* c_erg = app.add_subcommand("ergodic", "vanishing-discount ladder");
    add_common(c_erg, ergodic.common);
    c_erg->add_option("--delta0", ergodic.delta0, "initial discount");
    c_erg->add_option("--ladder-factor", ergodic.ladder_factor, "discount decay factor");
    c_erg->add_option("--ladder-len", ergodic.ladder_len, "ladder length");
    c_erg->add_option("--x-ref", ergodic.x_ref, "normalization point");
    c_erg->add_option("--x-ref-b", ergodic.x_ref_b, "second reference (uniqueness probe)")
        ->needs("--x-ref")
        ->each([&](const std::string&) { ergodic.probe = true; });
    c_erg->add_option("--growth-betas", ergodic.growth_betas, "betas for growth diagnostics")
        ->delimiter(',');
    c_erg->add_flag("--gnuplot", ergodic.gnuplot, "also write a plot.gp script");

    ParabolicOpts parabolic;
    CLI::App* c_par = app.add_subcommand("parabolic", "explicit march of the Cauchy problem");
    add_common(c_par, parabolic.common);
    c_par->add_option("--h0", parabolic.h0, "initial datum: const, runge, sine-gauss, gauss");
    c_par->add_option("--h0-value", parabolic.h0_value, "value for the const datum");
    c_par->add_option("--dt", parabolic.dt, "time step (0 = 0.9/CFL)");
    c_par->add_option("--t-final", parabolic.t_final, "final time");
    c_par->add_option("--tail-window", parabolic.tail_window, "tail statistics window");
    c_par->add_option("--snapshots", parabolic.snapshots, "snapshot count");
    c_par->add_flag("--gnuplot", parabolic.gnuplot, "also write a plot.gp script");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (c_check->parsed()) return run_check(check);
        if (c_solve->parsed()) return run_solve(solve);
        if (c_erg->parsed()) return run_ergodic(ergodic);
        if (c_par->parsed()) return run_parabolic(parabolic);
    } catch (const hjb::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const hjb::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
