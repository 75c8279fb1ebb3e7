#include "hjb/hamiltonian.hpp"

#include <vector>

namespace hjb {

HamiltonianValue hamiltonian_pointwise(std::span<const ControlTerm> terms, double t,
                                       const Vec2& p, const SymMat& x, int dim,
                                       OperatorMode mode, const PucciParams& pucci) {
    require(!terms.empty(), "hamiltonian needs at least one control");
    const bool minimize = opt_is_min(mode);
    const bool use_pucci = is_pucci(mode);

    HamiltonianValue best;
    bool first = true;
    for (int alpha = 0; alpha < static_cast<int>(terms.size()); ++alpha) {
        const ControlTerm& c = terms[alpha];
        double v = -(c.b.v1 * p.v1 + (dim == 2 ? c.b.v2 * p.v2 : 0.0)) + c.c0 * t - c.l;
        if (!use_pucci) v -= trace_product(c.a, x, dim);
        if (first || (minimize ? v < best.value : v > best.value)) {
            best.value = v;
            best.argopt = alpha;
            first = false;
        }
    }
    if (use_pucci)
        best.value += mode == OperatorMode::PucciMinus ? pucci_minus(x, dim, pucci)
                                                       : pucci_plus(x, dim, pucci);
    return best;
}

HamiltonianValue hjb_hamiltonian(int node, double t, const Vec2& p, const SymMat& x,
                                 const Grid& grid, const Coefficients& coeffs,
                                 OperatorMode mode, const PucciParams& pucci) {
    require(node >= 0 && node < grid.node_count(), "node index out of range");
    require(coeffs.n_nodes == grid.node_count(), "coefficients do not cover the grid");
    std::vector<ControlTerm> terms(static_cast<size_t>(coeffs.n_controls));
    for (int alpha = 0; alpha < coeffs.n_controls; ++alpha) {
        const int k = coeffs.at(node, alpha);
        terms[static_cast<size_t>(alpha)] = {coeffs.a[k], coeffs.b[k], coeffs.c0[k], coeffs.l[k]};
    }
    return hamiltonian_pointwise(terms, t, p, x, grid.dim, mode, pucci);
}

}  // namespace hjb
