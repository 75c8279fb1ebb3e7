#include "hjb/pucci.hpp"

#include <cmath>

namespace hjb {

void validate(const PucciParams& p) {
    require(p.lambda > 0.0 && p.lambda <= p.Lambda,
            "Pucci constants must satisfy 0 < lambda <= Lambda");
}

SymMat sym_from_entries(double a11, double a12, double a21, double a22) {
    const double scale = std::max({1.0, std::abs(a12), std::abs(a21)});
    require(std::abs(a12 - a21) <= 1e-12 * scale, "matrix is not symmetric");
    return SymMat{a11, a12, a22};
}

std::array<double, 2> sym_eigenvalues(const SymMat& x, int dim) {
    require(dim == 1 || dim == 2, "eigenvalues supported for dim 1 and 2 only");
    if (dim == 1) return {x.a11, 0.0};
    const double tr = x.a11 + x.a22;
    const double diff = x.a11 - x.a22;
    const double disc = std::sqrt(diff * diff + 4.0 * x.a12 * x.a12);
    return {0.5 * (tr - disc), 0.5 * (tr + disc)};
}

double pucci_minus_eigs(const double* eigs, int count, const PucciParams& p) {
    double out = 0.0;
    for (int i = 0; i < count; ++i) {
        const double e = eigs[i];
        out -= e > 0.0 ? p.Lambda * e : p.lambda * e;
    }
    return out;
}

double pucci_plus_eigs(const double* eigs, int count, const PucciParams& p) {
    double out = 0.0;
    for (int i = 0; i < count; ++i) {
        const double e = eigs[i];
        out -= e > 0.0 ? p.lambda * e : p.Lambda * e;
    }
    return out;
}

double pucci_minus(const SymMat& x, int dim, const PucciParams& p) {
    validate(p);
    const auto e = sym_eigenvalues(x, dim);
    return pucci_minus_eigs(e.data(), dim, p);
}

double pucci_plus(const SymMat& x, int dim, const PucciParams& p) {
    validate(p);
    const auto e = sym_eigenvalues(x, dim);
    return pucci_plus_eigs(e.data(), dim, p);
}

RadialHessian radial_hessian_eigs(const RadialProfile& profile, double r, int dim) {
    require(r > 0.0, "radial Hessian is singular at r = 0");
    require(dim == 1 || dim == 2, "radial Hessian supported for dim 1 and 2 only");
    RadialHessian h;
    h.radial = profile.d2phi(r);
    h.tangential = profile.dphi(r) / r;
    h.multiplicity = dim - 1;
    require(std::isfinite(h.radial) && std::isfinite(h.tangential),
            "radial profile derivatives must be finite at queried radii");
    return h;
}

RadialProfile quadratic_profile() {
    return {"r^2/2", [](double r) { return 0.5 * r * r; }, [](double r) { return r; },
            [](double) { return 1.0; }};
}

RadialProfile log_profile() {
    return {"log r", [](double r) { return std::log(r); }, [](double r) { return 1.0 / r; },
            [](double r) { return -1.0 / (r * r); }};
}

RadialProfile power_profile(double beta) {
    require(beta != 0.0, "power profile needs beta != 0");
    return {"r^beta/beta",
            [beta](double r) { return std::pow(r, beta) / beta; },
            [beta](double r) { return std::pow(r, beta - 1.0); },
            [beta](double r) { return (beta - 1.0) * std::pow(r, beta - 2.0); }};
}

RadialProfile inverse_power_profile(double rho, double big_r) {
    require(rho > 0.0, "inverse power profile needs rho > 0");
    require(big_r > 0.0, "inverse power profile needs R > 0");
    const double base = std::pow(big_r, -rho);
    return {"R^-rho - r^-rho",
            [base, rho](double r) { return base - std::pow(r, -rho); },
            [rho](double r) { return rho * std::pow(r, -rho - 1.0); },
            [rho](double r) { return -rho * (rho + 1.0) * std::pow(r, -rho - 2.0); }};
}

}  // namespace hjb
