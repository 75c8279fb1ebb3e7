#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "hjb/grid.hpp"

namespace hjb {

// Finite sample of the control space A; controls are dense indices 0..count-1.
struct ControlSet {
    int count = 1;
    std::string description;
};

// Symmetric matrix, at most 2x2. Dimension 1 uses a11 only.
struct SymMat {
    double a11 = 0.0, a12 = 0.0, a22 = 0.0;
};

// General 2x2 block, used for the diffusion factor sigma (N x m, N,m <= 2).
struct Mat2 {
    double m11 = 0.0, m12 = 0.0, m21 = 0.0, m22 = 0.0;
};

struct Vec2 {
    double v1 = 0.0, v2 = 0.0;
};

inline double dot(const Vec2& a, const Point& x, int dim) {
    return a.v1 * x[0] + (dim == 2 ? a.v2 * x[1] : 0.0);
}
inline double trace(const SymMat& a, int dim) {
    return a.a11 + (dim == 2 ? a.a22 : 0.0);
}

// sigma * sigma^T for the PSD consistency check.
SymMat sigma_squared(const Mat2& s, int dim);

// min eigenvalue of a (1x1 or 2x2) symmetric matrix, closed form.
double min_eigenvalue(const SymMat& a, int dim);

// Pointwise coefficient functions over (coordinate, control index).
// sigma may be left empty when no diffusion factor is available.
struct CoefficientClosures {
    std::function<SymMat(Point, int)> a;
    std::function<Vec2(Point, int)> b;
    std::function<double(Point, int)> c0;
    std::function<double(Point, int)> l;
    std::function<Mat2(Point, int)> sigma;  // optional
};

// Coefficient tables over (node, control), node-major layout.
struct Coefficients {
    int n_nodes = 0;
    int n_controls = 0;
    std::vector<SymMat> a;
    std::vector<Vec2> b;
    std::vector<double> c0;
    std::vector<double> l;
    std::vector<Mat2> sigma;  // empty when absent

    int at(int node, int alpha) const { return node * n_controls + alpha; }
    bool has_sigma() const { return !sigma.empty(); }
    double max_abs_l() const;
};

Coefficients sample_coefficients(const CoefficientClosures& c, const Grid& g,
                                 const ControlSet& controls);

// CSV columns: node_index, alpha_index, a_11[,a_12,a_22], b_1[,b_2], c0, l.
// A header row is accepted and skipped. Every (node, alpha) pair must appear
// exactly once; the control count is inferred from the data.
Coefficients load_coefficients_csv(std::istream& in, const Grid& g);
Coefficients load_coefficients_csv_file(const std::string& path, const Grid& g);

enum class OperatorMode { HjbInf, HjbSup, PucciMinus, PucciPlus };

std::string to_string(OperatorMode m);
OperatorMode mode_from_string(const std::string& s);

inline bool is_pucci(OperatorMode m) {
    return m == OperatorMode::PucciMinus || m == OperatorMode::PucciPlus;
}
// True when the operator takes the lower envelope over controls.
inline bool opt_is_min(OperatorMode m) {
    return m == OperatorMode::HjbInf || m == OperatorMode::PucciMinus;
}

// Full problem model: grid, control sample, coefficient tables and operator
// mode. pucci_lambda/pucci_Lambda are used only in the Pucci modes.
struct ProblemSpec {
    Grid grid;
    ControlSet controls;
    Coefficients coeffs;
    OperatorMode mode = OperatorMode::HjbInf;
    double pucci_lambda = 1.0;
    double pucci_Lambda = 1.0;
};

void validate(const ProblemSpec& p);

}  // namespace hjb
