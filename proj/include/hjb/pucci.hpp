#pragma once

#include <array>
#include <functional>
#include <string>

#include "hjb/problem.hpp"

namespace hjb {

// Ellipticity constants 0 < lambda <= Lambda.
struct PucciParams {
    double lambda = 1.0;
    double Lambda = 1.0;
};

void validate(const PucciParams& p);

// Builds a SymMat from full entries, rejecting non-symmetric input.
SymMat sym_from_entries(double a11, double a12, double a21, double a22);

// Eigenvalues by closed form (trace/determinant); ascending order.
// In dimension 1 the second slot is unused and returned as 0.
std::array<double, 2> sym_eigenvalues(const SymMat& x, int dim);

// Pucci minimal operator: inf{-tr(MX) : lambda I <= M <= Lambda I}
//   = -Lambda * (sum of positive eigenvalues) - lambda * (sum of negative ones).
double pucci_minus(const SymMat& x, int dim, const PucciParams& p);

// Pucci maximal operator, the sup counterpart.
double pucci_plus(const SymMat& x, int dim, const PucciParams& p);

// Same closed forms on a precomputed eigenvalue list (any length).
double pucci_minus_eigs(const double* eigs, int count, const PucciParams& p);
double pucci_plus_eigs(const double* eigs, int count, const PucciParams& p);

// Radial profile Phi(r) with analytic first and second derivatives,
// used to build Lyapunov candidates w(x) = Phi(|x|).
struct RadialProfile {
    std::string name;
    std::function<double(double)> phi;
    std::function<double(double)> dphi;
    std::function<double(double)> d2phi;
};

// Eigenvalues of the Hessian of w(x) = Phi(|x|) at radius r: Phi''(r) is
// simple, Phi'(r)/r has multiplicity dim-1.
struct RadialHessian {
    double radial = 0.0;      // Phi''(r)
    double tangential = 0.0;  // Phi'(r)/r
    int multiplicity = 0;     // dim - 1
};

RadialHessian radial_hessian_eigs(const RadialProfile& profile, double r, int dim);

RadialProfile quadratic_profile();                            // r^2/2
RadialProfile log_profile();                                  // log r
RadialProfile power_profile(double beta);                     // r^beta/beta
RadialProfile inverse_power_profile(double rho, double big_r);  // R^-rho - r^-rho

}  // namespace hjb
