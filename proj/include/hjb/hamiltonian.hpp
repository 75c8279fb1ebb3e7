#pragma once

#include <span>

#include "hjb/pucci.hpp"
#include "hjb/problem.hpp"

namespace hjb {

// One control's coefficient values at a fixed point.
struct ControlTerm {
    SymMat a;
    Vec2 b;
    double c0 = 0.0;
    double l = 0.0;
};

struct HamiltonianValue {
    double value = 0.0;
    int argopt = 0;  // attaining control index, ties broken to the lowest
};

inline double trace_product(const SymMat& a, const SymMat& x, int dim) {
    if (dim == 1) return a.a11 * x.a11;
    return a.a11 * x.a11 + 2.0 * a.a12 * x.a12 + a.a22 * x.a22;
}

// F(x, t, p, X) over a finite control sample. HJB modes evaluate
//   opt_alpha { -tr(a X) - b.p + c0 t - l },
// Pucci modes replace the trace term with the extremal operator:
//   M-+(X) + opt_alpha { -b.p + c0 t - l }.
HamiltonianValue hamiltonian_pointwise(std::span<const ControlTerm> terms, double t,
                                       const Vec2& p, const SymMat& x, int dim,
                                       OperatorMode mode, const PucciParams& pucci = {});

// Same, reading tabulated coefficients at a grid node.
HamiltonianValue hjb_hamiltonian(int node, double t, const Vec2& p, const SymMat& x,
                                 const Grid& grid, const Coefficients& coeffs,
                                 OperatorMode mode, const PucciParams& pucci = {});

}  // namespace hjb
