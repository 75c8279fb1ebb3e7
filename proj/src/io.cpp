#include "hjb/io.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>

namespace hjb {

using nlohmann::json;

json to_json(const ConditionReport& rep) {
    json margins = json::array();
    for (const auto& [r, slack] : rep.margins) margins.push_back({r, slack});
    return json{{"id", to_string(rep.id)},
                {"holds", rep.holds},
                {"R0", rep.holds ? json(rep.R0) : json(nullptr)},
                {"margins", margins},
                {"sampled_evidence", rep.sampled_evidence},
                {"params", rep.params_used}};
}

json to_json(const GrowthReport& rep) {
    json betas = json::object();
    for (size_t i = 0; i < rep.beta_list.size(); ++i)
        betas[std::to_string(rep.beta_list[i])] = {
            {"ratios", rep.ratio_beta[i]},
            {"decays", static_cast<bool>(rep.verdict_beta_decay[i])}};
    return json{{"annulus_r", rep.annulus_r},
                {"max_abs_chi", rep.max_abs_chi},
                {"quadratic_ratios", rep.ratio_quadratic},
                {"bounded_ratios", rep.ratio_bounded},
                {"beta", betas},
                {"verdicts",
                 {{"subquadratic", rep.verdict_subquadratic},
                  {"bounded", rep.verdict_bounded}}}};
}

json to_json(const DiscountedSolve& solve) {
    double sup = -1e300, inf = 1e300;
    for (double v : solve.u.values) {
        sup = std::max(sup, v);
        inf = std::min(inf, v);
    }
    return json{{"delta", solve.delta},
                {"residual", solve.residual_inf},
                {"iterations", solve.iterations},
                {"u0", solve.u[solve.u.grid.origin_node()]},
                {"sup_u", sup},
                {"inf_u", inf},
                {"sweeps", solve.sweeps},
                {"closure_slack", solve.closure_slack},
                {"b1_lhs", solve.b1_lhs},
                {"b1_rhs", solve.b1_rhs}};
}

json to_json(const ErgodicResult& result, const std::string& chi_csv_path) {
    json ladder = json::array();
    for (const auto& rung : result.ladder)
        ladder.push_back({rung.delta, rung.c_k, rung.residual});
    json j{{"ladder", ladder},
           {"c", result.c},
           {"c_aitken", result.aitken_valid ? json(result.c_aitken) : json(nullptr)},
           {"chi_csv_path", chi_csv_path},
           {"c_diffs", result.c_diffs},
           {"oscillation", result.oscillation},
           {"completed", result.completed},
           {"x_ref_node", result.x_ref_node}};
    j["growth"] = result.growth_valid ? to_json(result.growth) : json(nullptr);
    if (!result.completed) j["failure"] = result.failure;
    return j;
}

json to_json(const ParabolicRun& run) {
    return json{{"dt", run.dt},
                {"t_final", run.t_final},
                {"tail_window", run.tail_window},
                {"steps", run.steps},
                {"completed", run.completed},
                {"failure", run.failure},
                {"probes", run.probe_nodes},
                {"ubar", run.ubar},
                {"ulow", run.ulow},
                {"spread_sup", run.spread_sup},
                {"spread_inf", run.spread_inf}};
}

json to_json(const McResult& mc) {
    return json{{"estimate", mc.estimate},
                {"stderr", mc.stderr_est},
                {"n", mc.n_paths},
                {"seed", mc.seed},
                {"dt_warning", mc.dt_warning}};
}

namespace {

void write_coords(std::ostream& out, const Grid& g, int node) {
    const Point x = g.coord(node);
    out << x[0];
    if (g.dim == 2) out << ',' << x[1];
}

}  // namespace

void write_field_csv(std::ostream& out, const ScalarField& field) {
    out << std::setprecision(17);
    out << (field.grid.dim == 2 ? "x,y,value\n" : "x,value\n");
    for (int node = 0; node < field.grid.node_count(); ++node) {
        write_coords(out, field.grid, node);
        out << ',' << field[node] << '\n';
    }
}

void write_snapshots_csv(std::ostream& out, const ParabolicRun& run) {
    out << std::setprecision(17);
    if (run.snapshots.empty()) return;
    const Grid& g = run.snapshots.front().grid;
    out << (g.dim == 2 ? "t,x,y,value\n" : "t,x,value\n");
    for (size_t s = 0; s < run.snapshots.size(); ++s)
        for (int node = 0; node < g.node_count(); ++node) {
            out << run.snap_times[s] << ',';
            write_coords(out, g, node);
            out << ',' << run.snapshots[s][node] << '\n';
        }
}

void write_tail_csv(std::ostream& out, const ParabolicRun& run) {
    out << std::setprecision(17);
    const Grid& g = run.tail_sup.grid;
    out << (g.dim == 2 ? "x,y,tail_sup,tail_inf\n" : "x,tail_sup,tail_inf\n");
    for (int node = 0; node < g.node_count(); ++node) {
        write_coords(out, g, node);
        out << ',' << run.tail_sup[node] << ',' << run.tail_inf[node] << '\n';
    }
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    require(out.good(), "cannot write file: " + path);
    out << content;
    require(out.good(), "failed while writing file: " + path);
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

}  // namespace hjb
