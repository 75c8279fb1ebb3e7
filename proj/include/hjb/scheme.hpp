#pragma once

#include <iosfwd>
#include <vector>

#include "hjb/problem.hpp"

namespace hjb {

enum class ClosureKind { QuadraticBarrierDirichlet, FrozenValue };

// Dirichlet closure on the truncated box: either a quadratic barrier
// anchor + h_bar |x|^2 / 2 or a frozen constant value.
struct BoundaryClosure {
    ClosureKind kind = ClosureKind::QuadraticBarrierDirichlet;
    double h_bar = 0.05;
    double anchor = 0.0;
};

double closure_value(const BoundaryClosure& c, Point x, int dim);

std::string to_string(ClosureKind k);
ClosureKind closure_kind_from_string(const std::string& s);

// Per (interior node, effective control) affine stencil in M-matrix form:
// off-diagonal weights are stored positive (they enter rows as -w <= 0) and
// the diagonal is their sum, so constants are annihilated exactly. Pucci
// modes are expanded over effective controls (alpha, m) with m in
// {lambda, Lambda}; HJB modes have one effective control per alpha.
struct DiscreteOperator {
    Grid grid;
    OperatorMode mode = OperatorMode::HjbInf;
    bool minimize = true;
    int n_eff = 1;                 // effective controls per node
    std::vector<int> base_alpha;   // effective control -> problem alpha

    std::vector<int> interior;     // ascending node indices
    std::vector<int> int_index;    // node -> position in interior, or -1

    // arrays of size interior.size() * n_eff, interior-major
    std::vector<double> w0m, w0p;  // axis-0 neighbor weights (>= 0)
    std::vector<double> w1m, w1p;  // axis-1 neighbor weights (dim 2)
    std::vector<double> c0;
    std::vector<double> l;

    BoundaryClosure closure;
    std::vector<double> boundary_value;  // per node; meaningful on the boundary
    double max_diag_plus_c0 = 0.0;       // CFL quantity

    size_t at(int int_idx, int e) const {
        return static_cast<size_t>(int_idx) * n_eff + e;
    }
    double diag(int int_idx, int e) const {
        const size_t k = at(int_idx, e);
        return w0m[k] + w0p[k] + (grid.dim == 2 ? w1m[k] + w1p[k] : 0.0);
    }
    // (A_e u)(node) - l_e with A_e the stencil row plus the c0 term.
    double row_value(int int_idx, int e, const std::vector<double>& u) const;
    // Optimal row value over effective controls and the attaining index.
    double opt_row(int int_idx, const std::vector<double>& u, int* argopt = nullptr) const;
};

// Monotone upwind discretization: central second differences weighted by the
// diagonal of a, forward/backward first differences keyed to the sign of b.
// Dimension 2 requires diagonal a; Pucci modes require dimension 1.
DiscreteOperator discretize(const ProblemSpec& problem, const BoundaryClosure& closure);

// Residual of delta*u + F_h(u) = 0: interior nodes get the discrete equation,
// boundary nodes get u - closure value.
ScalarField apply(const DiscreteOperator& op, const ScalarField& u, double delta);

// Text triplets (alpha, row, col, weight) for offline inspection; boundary
// rows are emitted as identity rows with alpha = -1.
void dump_triplets(const DiscreteOperator& op, std::ostream& out);

}  // namespace hjb
