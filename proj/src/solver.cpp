#include "hjb/solver.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <sstream>

namespace hjb {

namespace {

// Frozen-policy system in sweep-ready form. The diagonal is carried in
// extended precision: the discount delta is orders of magnitude below the
// stencil weights, and rounding it into the diagonal perturbs the
// near-kernel response by eps * diag/delta relative, which the vanishing
// discount ladder amplifies into visible solution offsets.
struct FrozenSystem {
    std::vector<double> w0m, w0p, w1m, w1p, rhs, diag, inv_diag;
    std::vector<long double> ldiag;

    void build(const DiscreteOperator& op, const std::vector<int>& policy, double delta) {
        const size_t n = op.interior.size();
        w0m.resize(n);
        w0p.resize(n);
        rhs.resize(n);
        diag.resize(n);
        inv_diag.resize(n);
        ldiag.resize(n);
        if (op.grid.dim == 2) {
            w1m.resize(n);
            w1p.resize(n);
        }
        for (size_t ii = 0; ii < n; ++ii) {
            const int e = policy[ii];
            const size_t k = op.at(static_cast<int>(ii), e);
            w0m[ii] = op.w0m[k];
            w0p[ii] = op.w0p[k];
            long double d = static_cast<long double>(op.w0m[k]) + op.w0p[k];
            if (op.grid.dim == 2) {
                w1m[ii] = op.w1m[k];
                w1p[ii] = op.w1p[k];
                d += static_cast<long double>(op.w1m[k]) + op.w1p[k];
            }
            rhs[ii] = op.l[k];
            ldiag[ii] = static_cast<long double>(delta) + d + op.c0[k];
            diag[ii] = static_cast<double>(ldiag[ii]);
            inv_diag[ii] = 1.0 / diag[ii];
        }
    }

    // Forward Gauss-Seidel sweep in lexicographic node order.
    void sweep(const DiscreteOperator& op, std::vector<double>& u) const {
        const size_t n = op.interior.size();
        const int stride = op.grid.n_per_dim;
        if (op.grid.dim == 1) {
            for (size_t ii = 0; ii < n; ++ii) {
                const size_t node = static_cast<size_t>(op.interior[ii]);
                u[node] = (rhs[ii] + w0m[ii] * u[node - 1] + w0p[ii] * u[node + 1]) * inv_diag[ii];
            }
        } else {
            for (size_t ii = 0; ii < n; ++ii) {
                const size_t node = static_cast<size_t>(op.interior[ii]);
                u[node] = (rhs[ii] + w0m[ii] * u[node - 1] + w0p[ii] * u[node + 1] +
                           w1m[ii] * u[node - static_cast<size_t>(stride)] +
                           w1p[ii] * u[node + static_cast<size_t>(stride)]) *
                          inv_diag[ii];
            }
        }
    }

    double residual_inf(const DiscreteOperator& op, const std::vector<double>& u) const {
        const size_t n = op.interior.size();
        const int stride = op.grid.n_per_dim;
        double worst = 0.0;
        for (size_t ii = 0; ii < n; ++ii) {
            const size_t node = static_cast<size_t>(op.interior[ii]);
            double s = rhs[ii] + w0m[ii] * u[node - 1] + w0p[ii] * u[node + 1];
            if (op.grid.dim == 2)
                s += w1m[ii] * u[node - static_cast<size_t>(stride)] +
                     w1p[ii] * u[node + static_cast<size_t>(stride)];
            worst = std::max(worst, std::abs(diag[ii] * u[node] - s));
        }
        return worst;
    }

    // Direct elimination for the 1d tridiagonal case; the strict diagonal
    // dominance (margin delta) keeps it stable without pivoting. The whole
    // factorization runs in extended precision so that algebraically
    // identical systems solve to matching bits. Solves for the interior in
    // place; u must carry the boundary values.
    void solve_direct_1d(const DiscreteOperator& op, std::vector<double>& u) const {
        const size_t n = op.interior.size();
        static thread_local std::vector<long double> c_prime, d_prime;
        c_prime.resize(n);
        d_prime.resize(n);
        const size_t first = static_cast<size_t>(op.interior.front());
        const size_t last = static_cast<size_t>(op.interior.back());
        {
            c_prime[0] = -static_cast<long double>(w0p[0]) / ldiag[0];
            d_prime[0] = (static_cast<long double>(rhs[0]) +
                          static_cast<long double>(w0m[0]) * u[first - 1]) /
                         ldiag[0];
        }
        for (size_t i = 1; i < n; ++i) {
            const long double sub = -static_cast<long double>(w0m[i]);
            const long double denom = ldiag[i] - sub * c_prime[i - 1];
            c_prime[i] = -static_cast<long double>(w0p[i]) / denom;
            long double ri = rhs[i];
            if (i == n - 1) ri += static_cast<long double>(w0p[i]) * u[last + 1];
            d_prime[i] = (ri - sub * d_prime[i - 1]) / denom;
        }
        long double carry = d_prime[n - 1];
        u[last] = static_cast<double>(carry);
        for (size_t i = n - 1; i-- > 0;) {
            const size_t node = static_cast<size_t>(op.interior[i]);
            carry = d_prime[i] - c_prime[i] * carry;
            u[node] = static_cast<double>(carry);
        }
    }

    // Direct solve plus two passes of mixed-precision iterative refinement:
    // residuals accumulated in extended precision leave the solution
    // correctly rounded at working precision, so algebraically identical
    // systems solve to matching bits. Returns the achieved residual (which
    // bottoms out at the double-evaluation floor eps * |A| |u|).
    double solve_refined_1d(const DiscreteOperator& op, std::vector<double>& u,
                            long* solves) const {
        const size_t n = op.interior.size();
        solve_direct_1d(op, u);
        ++*solves;
        static thread_local std::vector<double> corr, corr_rhs;
        for (int pass = 0; pass < 2; ++pass) {
            corr.assign(u.size(), 0.0);  // zero boundary: correction system
            corr_rhs.resize(n);
            for (size_t i = 0; i < n; ++i) {
                const size_t node = static_cast<size_t>(op.interior[i]);
                const long double row =
                    ldiag[i] * u[node] -
                    (static_cast<long double>(rhs[i]) +
                     static_cast<long double>(w0m[i]) * u[node - 1] +
                     static_cast<long double>(w0p[i]) * u[node + 1]);
                corr_rhs[i] = static_cast<double>(row);
            }
            FrozenSystem tmp;  // reuse the factors, swap rhs for the residual
            tmp.w0m = w0m;
            tmp.w0p = w0p;
            tmp.diag = diag;
            tmp.ldiag = ldiag;
            tmp.inv_diag = inv_diag;
            tmp.rhs = corr_rhs;
            tmp.solve_direct_1d(op, corr);
            ++*solves;
            for (size_t i = 0; i < n; ++i) {
                const size_t node = static_cast<size_t>(op.interior[i]);
                u[node] -= corr[node];
            }
        }
        return residual_inf(op, u);
    }
};

double fresh_residual(const DiscreteOperator& op, const std::vector<double>& u, double delta,
                      std::vector<int>& policy) {
    const size_t n = op.interior.size();
    policy.resize(n);
    double worst = 0.0;
    for (size_t ii = 0; ii < n; ++ii) {
        int arg = 0;
        const double r =
            delta * u[static_cast<size_t>(op.interior[ii])] + op.opt_row(static_cast<int>(ii), u, &arg);
        policy[ii] = arg;
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

uint64_t policy_hash(const std::vector<int>& policy) {
    uint64_t h = 1469598103934665603ULL;
    for (int p : policy) {
        h ^= static_cast<uint64_t>(p) + 0x9e3779b97f4a7c15ULL;
        h *= 1099511628211ULL;
    }
    return h;
}

double boundary_abs_max(const DiscreteOperator& op) {
    double m = 0.0;
    for (int node = 0; node < op.grid.node_count(); ++node)
        if (op.grid.is_boundary(node))
            m = std::max(m, std::abs(op.boundary_value[static_cast<size_t>(node)]));
    return m;
}

double stencil_abs_max_l(const DiscreteOperator& op) {
    double m = 0.0;
    for (double v : op.l) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace

double value_iteration_sweep(const DiscreteOperator& op, ScalarField& u, double delta,
                             double theta) {
    require(theta > 0.0 && theta <= 1.0, "value iteration damping must lie in (0, 1]");
    double worst = 0.0;
    for (size_t ii = 0; ii < op.interior.size(); ++ii) {
        const size_t node = static_cast<size_t>(op.interior[ii]);
        int e = 0;
        const double res = delta * u.values[node] + op.opt_row(static_cast<int>(ii), u.values, &e);
        const size_t k = op.at(static_cast<int>(ii), e);
        const double upd = theta * res / (delta + op.diag(static_cast<int>(ii), e) + op.c0[k]);
        u.values[node] -= upd;
        worst = std::max(worst, std::abs(upd));
    }
    return worst;
}

DiscountedSolve solve_discounted(const DiscreteOperator& op, double delta,
                                 const SolveParams& params, const ScalarField* warm) {
    require(delta > 0.0, "discounted solve needs delta > 0");
    require(params.tol > 0.0, "discounted solve needs tol > 0");

    DiscountedSolve out;
    out.delta = delta;
    out.u = warm ? *warm : ScalarField(op.grid);
    if (warm) require_same_grid(*warm, op.grid, "solve_discounted warm start");
    for (int node = 0; node < op.grid.node_count(); ++node)
        if (op.grid.is_boundary(node))
            out.u[node] = op.boundary_value[static_cast<size_t>(node)];

    FrozenSystem frozen;
    std::vector<int> policy;
    std::deque<std::pair<uint64_t, double>> history;  // (policy hash, residual)

    double res = fresh_residual(op, out.u.values, delta, policy);
    int outer = 0;
    int stagnant_outers = 0;
    while (res > params.tol) {
        if (outer >= params.max_outer || out.sweeps >= params.max_sweeps) {
            std::ostringstream os;
            os << "discounted solve did not converge: residual " << res << " after " << outer
               << " policy iterations and " << out.sweeps << " sweeps (delta " << delta << ")";
            throw NumericalError(os.str());
        }
        ++outer;

        // A policy revisited without residual progress means the outer loop
        // is cycling; damped value sweeps break the cycle.
        const uint64_t h = policy_hash(policy);
        bool cycle = false;
        for (const auto& [ph, pres] : history)
            if (ph == h && res > 0.5 * pres) cycle = true;
        history.emplace_back(h, res);
        if (history.size() > 8) history.pop_front();

        bool inner_stagnant = false;
        if (cycle) {
            out.used_fallback = true;
            for (int s = 0; s < 50 && out.sweeps < params.max_sweeps; ++s) {
                value_iteration_sweep(op, out.u, delta, params.damping);
                ++out.sweeps;
            }
        } else if (op.grid.dim == 1 && !params.gauss_seidel_inner) {
            // The 1d frozen-policy system is tridiagonal: eliminate directly
            // (with refinement) instead of relaxing.
            frozen.build(op, policy, delta);
            const double achieved = frozen.solve_refined_1d(op, out.u.values, &out.sweeps);
            inner_stagnant = achieved > 0.5 * params.tol;
        } else {
            frozen.build(op, policy, delta);
            // Single-control problems have no policy updates: solve the one
            // linear system outright. Otherwise tighten stagewise.
            const double inner_tol = op.n_eff == 1
                                         ? 0.5 * params.tol
                                         : std::max(0.5 * params.tol, 0.02 * res);
            // Demand 0.1% progress per milestone to catch the rounding floor
            // without tripping on slowly converging low-frequency modes.
            double milestone = std::numeric_limits<double>::infinity();
            long next_milestone = out.sweeps + 4096;
            while (out.sweeps < params.max_sweeps) {
                for (int s = 0; s < 16; ++s) {
                    frozen.sweep(op, out.u.values);
                    ++out.sweeps;
                }
                const double fres = frozen.residual_inf(op, out.u.values);
                if (fres <= inner_tol) break;
                if (out.sweeps >= next_milestone) {
                    if (fres > milestone * (1.0 - 1e-3)) {
                        inner_stagnant = true;
                        break;
                    }
                    milestone = fres;
                    next_milestone = out.sweeps + 4096;
                }
            }
        }
        const double prev = res;
        res = fresh_residual(op, out.u.values, delta, policy);
        if (inner_stagnant && res > 0.9 * prev) {
            if (++stagnant_outers >= 2) {
                std::ostringstream os;
                os << "discounted solve stagnated at residual " << res << " above tol "
                   << params.tol
                   << "; this is the rounding floor for the problem scale (delta " << delta
                   << ")";
                throw NumericalError(os.str());
            }
        } else {
            stagnant_outers = 0;
        }
    }

    out.residual_inf = res;
    out.iterations = outer;
    out.policy = std::move(policy);

    const double max_l = stencil_abs_max_l(op);
    out.closure_slack = std::max(0.0, delta * boundary_abs_max(op) - max_l);
    out.b1_lhs = delta * max_abs(out.u);
    out.b1_rhs = max_l + out.closure_slack;
    if (out.b1_lhs > out.b1_rhs + std::max(10.0 * params.tol, 1e-8))
        throw NumericalError("discounted solve violated the discrete sup-norm bound");
    return out;
}

DiscountedSolve solve_discounted(const ProblemSpec& problem, const BoundaryClosure& closure,
                                 double delta, double tol, int max_iter) {
    const DiscreteOperator op = discretize(problem, closure);
    SolveParams sp;
    sp.tol = tol;
    sp.max_outer = max_iter;
    return solve_discounted(op, delta, sp);
}

void parabolic_step(const DiscreteOperator& op, ScalarField& u, double dt) {
    static thread_local std::vector<double> res;
    res.resize(op.interior.size());
    for (size_t ii = 0; ii < op.interior.size(); ++ii)
        res[ii] = op.opt_row(static_cast<int>(ii), u.values);
    for (size_t ii = 0; ii < op.interior.size(); ++ii)
        u.values[static_cast<size_t>(op.interior[ii])] -= dt * res[ii];
}

ParabolicRun march_parabolic(const DiscreteOperator& op, const ScalarField& h0,
                             const ParabolicParams& params) {
    require_same_grid(h0, op.grid, "march_parabolic");
    require_finite(h0, "march_parabolic initial datum");
    require(params.t_final > 0.0, "march needs t_final > 0");

    ParabolicRun run;
    run.dt = params.dt > 0.0 ? params.dt : 0.9 / std::max(op.max_diag_plus_c0, 1e-300);
    if (run.dt * op.max_diag_plus_c0 > 1.0 + 1e-12) {
        std::ostringstream os;
        os << "CFL violation: dt * (max diagonal + c0) = " << run.dt * op.max_diag_plus_c0
           << " > 1 (dt <= " << 1.0 / op.max_diag_plus_c0 << " required)";
        throw NumericalError(os.str());
    }
    run.t_final = params.t_final;
    run.tail_window = params.tail_window > 0.0 ? params.tail_window : params.t_final / 4.0;
    require(run.tail_window <= params.t_final, "tail window cannot exceed t_final");

    std::vector<Point> probes = params.probe_points;
    if (probes.empty()) {
        const double half = op.grid.halfwidth / 2.0;
        probes.push_back({0.0, 0.0});
        probes.push_back({-half, 0.0});
        probes.push_back({half, 0.0});
        if (op.grid.dim == 2) {
            probes.push_back({0.0, -half});
            probes.push_back({0.0, half});
        }
    }
    for (const Point& p : probes) {
        const int node = op.grid.nearest_node(p);
        bool dup = false;
        for (int q : run.probe_nodes) dup |= q == node;
        if (!dup) run.probe_nodes.push_back(node);
    }

    ScalarField u = h0;
    for (int node = 0; node < op.grid.node_count(); ++node)
        if (op.grid.is_boundary(node))
            u[node] = op.boundary_value[static_cast<size_t>(node)];

    const long n_steps = static_cast<long>(std::ceil(params.t_final / run.dt - 1e-9));
    run.steps = n_steps;
    const long snap_every =
        std::max<long>(1, n_steps / std::max(1, params.snapshot_count - 1));
    const double tail_start = params.t_final - run.tail_window;

    run.tail_sup = ScalarField(op.grid, -std::numeric_limits<double>::infinity());
    run.tail_inf = ScalarField(op.grid, std::numeric_limits<double>::infinity());
    auto absorb_tail = [&](const ScalarField& v) {
        for (int i = 0; i < v.size(); ++i) {
            run.tail_sup[i] = std::max(run.tail_sup[i], v[i]);
            run.tail_inf[i] = std::min(run.tail_inf[i], v[i]);
        }
    };

    run.snap_times.push_back(0.0);
    run.snapshots.push_back(u);
    if (0.0 >= tail_start - 1e-12) absorb_tail(u);

    for (long k = 0; k < n_steps; ++k) {
        parabolic_step(op, u, run.dt);
        const double t = (k + 1) * run.dt;

        bool bad = false;
        for (double v : u.values)
            if (!std::isfinite(v) || std::abs(v) > 1e100) bad = true;
        if (bad) {
            std::ostringstream os;
            os << "parabolic march blew up at t = " << t;
            run.failure = os.str();
            run.completed = false;
            return run;
        }
        if (t >= tail_start - 1e-12) absorb_tail(u);
        if ((k + 1) % snap_every == 0 || k + 1 == n_steps) {
            run.snap_times.push_back(t);
            run.snapshots.push_back(u);
        }
    }

    double smax = -std::numeric_limits<double>::infinity();
    double smin = std::numeric_limits<double>::infinity();
    double imax = -std::numeric_limits<double>::infinity();
    double imin = std::numeric_limits<double>::infinity();
    for (int p : run.probe_nodes) {
        smax = std::max(smax, run.tail_sup[p]);
        smin = std::min(smin, run.tail_sup[p]);
        imax = std::max(imax, run.tail_inf[p]);
        imin = std::min(imin, run.tail_inf[p]);
    }
    run.ubar = smax;
    run.ulow = imin;
    run.spread_sup = smax - smin;
    run.spread_inf = imax - imin;
    run.completed = true;
    return run;
}

ParabolicRun march_parabolic(const ProblemSpec& problem, const BoundaryClosure& closure,
                             const ScalarField& h0, const ParabolicParams& params) {
    const DiscreteOperator op = discretize(problem, closure);
    return march_parabolic(op, h0, params);
}

}  // namespace hjb
