#include "hjb/scheme.hpp"

#include <cmath>
#include <ostream>

namespace hjb {

double closure_value(const BoundaryClosure& c, Point x, int dim) {
    if (c.kind == ClosureKind::FrozenValue) return c.anchor;
    const double r2 = x[0] * x[0] + (dim == 2 ? x[1] * x[1] : 0.0);
    return c.anchor + 0.5 * c.h_bar * r2;
}

std::string to_string(ClosureKind k) {
    return k == ClosureKind::QuadraticBarrierDirichlet ? "barrier" : "frozen";
}

ClosureKind closure_kind_from_string(const std::string& s) {
    if (s == "barrier") return ClosureKind::QuadraticBarrierDirichlet;
    if (s == "frozen") return ClosureKind::FrozenValue;
    throw ConfigError("unknown closure kind: " + s + " (expected barrier or frozen)");
}

double DiscreteOperator::row_value(int int_idx, int e, const std::vector<double>& u) const {
    const size_t k = at(int_idx, e);
    const int node = interior[static_cast<size_t>(int_idx)];
    const size_t n = static_cast<size_t>(node);
    const int stride = grid.n_per_dim;
    double v = (diag(int_idx, e) + c0[k]) * u[n] - w0m[k] * u[n - 1] - w0p[k] * u[n + 1];
    if (grid.dim == 2)
        v -= w1m[k] * u[n - static_cast<size_t>(stride)] + w1p[k] * u[n + static_cast<size_t>(stride)];
    return v - l[k];
}

double DiscreteOperator::opt_row(int int_idx, const std::vector<double>& u, int* argopt) const {
    double best = row_value(int_idx, 0, u);
    int best_e = 0;
    for (int e = 1; e < n_eff; ++e) {
        const double v = row_value(int_idx, e, u);
        if (minimize ? v < best : v > best) {
            best = v;
            best_e = e;
        }
    }
    if (argopt) *argopt = best_e;
    return best;
}

DiscreteOperator discretize(const ProblemSpec& problem, const BoundaryClosure& closure) {
    validate(problem);
    if (closure.kind == ClosureKind::QuadraticBarrierDirichlet)
        require(closure.h_bar > 0.0, "barrier closure needs h_bar > 0");
    const Grid& g = problem.grid;
    const bool pucci = is_pucci(problem.mode);
    const int base_k = problem.controls.count;

    DiscreteOperator op;
    op.grid = g;
    op.mode = problem.mode;
    op.minimize = opt_is_min(problem.mode);
    op.n_eff = pucci ? 2 * base_k : base_k;
    op.base_alpha.resize(static_cast<size_t>(op.n_eff));
    for (int e = 0; e < op.n_eff; ++e) op.base_alpha[static_cast<size_t>(e)] = pucci ? e / 2 : e;
    op.closure = closure;

    op.interior = g.interior();
    op.int_index.assign(static_cast<size_t>(g.node_count()), -1);
    for (size_t i = 0; i < op.interior.size(); ++i)
        op.int_index[static_cast<size_t>(op.interior[i])] = static_cast<int>(i);

    const size_t total = op.interior.size() * static_cast<size_t>(op.n_eff);
    op.w0m.assign(total, 0.0);
    op.w0p.assign(total, 0.0);
    if (g.dim == 2) {
        op.w1m.assign(total, 0.0);
        op.w1p.assign(total, 0.0);
    }
    op.c0.assign(total, 0.0);
    op.l.assign(total, 0.0);

    const double h = g.spacing;
    const double inv_h2 = 1.0 / (h * h);
    const double inv_h = 1.0 / h;

    for (size_t ii = 0; ii < op.interior.size(); ++ii) {
        const int node = op.interior[ii];
        for (int e = 0; e < op.n_eff; ++e) {
            const int alpha = op.base_alpha[static_cast<size_t>(e)];
            const int ck = problem.coeffs.at(node, alpha);
            const size_t k = op.at(static_cast<int>(ii), e);

            double add0, add1 = 0.0;  // diffusion coefficients per axis
            if (pucci) {
                add0 = (e % 2 == 0) ? problem.pucci_lambda : problem.pucci_Lambda;
            } else {
                const SymMat& a = problem.coeffs.a[ck];
                if (g.dim == 2) {
                    const double scale = std::max({1.0, std::abs(a.a11), std::abs(a.a22)});
                    if (std::abs(a.a12) > 1e-14 * scale)
                        throw ConfigError(
                            "dim-2 discretization requires diagonal a(node,alpha); "
                            "off-diagonal entry found at node " + std::to_string(node) +
                            ", alpha " + std::to_string(alpha));
                    add1 = a.a22;
                }
                add0 = a.a11;
            }

            const Vec2& b = problem.coeffs.b[ck];
            op.w0m[k] = add0 * inv_h2 + (b.v1 < 0.0 ? -b.v1 * inv_h : 0.0);
            op.w0p[k] = add0 * inv_h2 + (b.v1 > 0.0 ? b.v1 * inv_h : 0.0);
            if (g.dim == 2) {
                op.w1m[k] = add1 * inv_h2 + (b.v2 < 0.0 ? -b.v2 * inv_h : 0.0);
                op.w1p[k] = add1 * inv_h2 + (b.v2 > 0.0 ? b.v2 * inv_h : 0.0);
            }
            op.c0[k] = problem.coeffs.c0[ck];
            op.l[k] = problem.coeffs.l[ck];
            op.max_diag_plus_c0 =
                std::max(op.max_diag_plus_c0, op.diag(static_cast<int>(ii), e) + op.c0[k]);
        }
    }

    op.boundary_value.assign(static_cast<size_t>(g.node_count()), 0.0);
    for (int node = 0; node < g.node_count(); ++node)
        if (g.is_boundary(node))
            op.boundary_value[static_cast<size_t>(node)] = closure_value(closure, g.coord(node), g.dim);
    return op;
}

ScalarField apply(const DiscreteOperator& op, const ScalarField& u, double delta) {
    require_same_grid(u, op.grid, "apply");
    require(delta >= 0.0, "apply needs delta >= 0");
    ScalarField res(op.grid);
    for (int node = 0; node < op.grid.node_count(); ++node) {
        const int ii = op.int_index[static_cast<size_t>(node)];
        if (ii < 0)
            res[node] = u[node] - op.boundary_value[static_cast<size_t>(node)];
        else
            res[node] = delta * u[node] + op.opt_row(ii, u.values);
    }
    return res;
}

void dump_triplets(const DiscreteOperator& op, std::ostream& out) {
    out << "# alpha row col weight (boundary identity rows use alpha -1)\n";
    const int stride = op.grid.n_per_dim;
    for (size_t ii = 0; ii < op.interior.size(); ++ii) {
        const int node = op.interior[ii];
        for (int e = 0; e < op.n_eff; ++e) {
            const size_t k = op.at(static_cast<int>(ii), e);
            out << e << ' ' << node << ' ' << node << ' '
                << op.diag(static_cast<int>(ii), e) + op.c0[k] << '\n';
            out << e << ' ' << node << ' ' << node - 1 << ' ' << -op.w0m[k] << '\n';
            out << e << ' ' << node << ' ' << node + 1 << ' ' << -op.w0p[k] << '\n';
            if (op.grid.dim == 2) {
                out << e << ' ' << node << ' ' << node - stride << ' ' << -op.w1m[k] << '\n';
                out << e << ' ' << node << ' ' << node + stride << ' ' << -op.w1p[k] << '\n';
            }
        }
    }
    for (int node = 0; node < op.grid.node_count(); ++node)
        if (op.grid.is_boundary(node)) out << -1 << ' ' << node << ' ' << node << ' ' << 1.0 << '\n';
}

}  // namespace hjb
