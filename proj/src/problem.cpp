#include "hjb/problem.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace hjb {

SymMat sigma_squared(const Mat2& s, int dim) {
    SymMat out;
    if (dim == 1) {
        out.a11 = s.m11 * s.m11 + s.m12 * s.m12;
        return out;
    }
    out.a11 = s.m11 * s.m11 + s.m12 * s.m12;
    out.a12 = s.m11 * s.m21 + s.m12 * s.m22;
    out.a22 = s.m21 * s.m21 + s.m22 * s.m22;
    return out;
}

double min_eigenvalue(const SymMat& a, int dim) {
    if (dim == 1) return a.a11;
    const double tr = a.a11 + a.a22;
    const double diff = a.a11 - a.a22;
    const double disc = std::sqrt(diff * diff + 4.0 * a.a12 * a.a12);
    return 0.5 * (tr - disc);
}

double Coefficients::max_abs_l() const {
    double m = 0.0;
    for (double v : l) m = std::max(m, std::abs(v));
    return m;
}

namespace {

std::string node_label(const Grid& g, int node) {
    Point x = g.coord(node);
    std::ostringstream os;
    os << "node " << node << " (x = " << x[0];
    if (g.dim == 2) os << ", " << x[1];
    os << ")";
    return os.str();
}

void check_entry(const Grid& g, const Coefficients& c, int node, int alpha) {
    const int k = c.at(node, alpha);
    const double scale =
        std::max({1.0, std::abs(c.a[k].a11), std::abs(c.a[k].a12), std::abs(c.a[k].a22)});
    if (min_eigenvalue(c.a[k], g.dim) < -1e-12 * scale)
        throw ConfigError("diffusion matrix a is not positive semidefinite at " +
                          node_label(g, node) + ", alpha " + std::to_string(alpha));
    if (c.c0[k] < 0.0)
        throw ConfigError("zeroth-order coefficient c0 is negative at " + node_label(g, node) +
                          ", alpha " + std::to_string(alpha));
    if (!std::isfinite(c.a[k].a11) || !std::isfinite(c.a[k].a12) ||
        !std::isfinite(c.a[k].a22) || !std::isfinite(c.b[k].v1) || !std::isfinite(c.b[k].v2) ||
        !std::isfinite(c.c0[k]) || !std::isfinite(c.l[k]))
        throw ConfigError("non-finite coefficient at " + node_label(g, node) + ", alpha " +
                          std::to_string(alpha));
    if (c.has_sigma()) {
        const SymMat ss = sigma_squared(c.sigma[k], g.dim);
        const double d11 = std::abs(c.a[k].a11 - ss.a11);
        const double d12 = g.dim == 2 ? std::abs(c.a[k].a12 - ss.a12) : 0.0;
        const double d22 = g.dim == 2 ? std::abs(c.a[k].a22 - ss.a22) : 0.0;
        if (std::max({d11, d12, d22}) > 1e-10)
            throw ConfigError("a != sigma*sigma^T at " + node_label(g, node) + ", alpha " +
                              std::to_string(alpha));
    }
}

}  // namespace

Coefficients sample_coefficients(const CoefficientClosures& c, const Grid& g,
                                 const ControlSet& controls) {
    require(controls.count >= 1, "control set must be nonempty");
    require(static_cast<bool>(c.a) && static_cast<bool>(c.b) && static_cast<bool>(c.c0) &&
                static_cast<bool>(c.l),
            "coefficient closures a, b, c0, l must all be set");
    Coefficients out;
    out.n_nodes = g.node_count();
    out.n_controls = controls.count;
    const size_t total = static_cast<size_t>(out.n_nodes) * out.n_controls;
    out.a.resize(total);
    out.b.resize(total);
    out.c0.resize(total);
    out.l.resize(total);
    if (c.sigma) out.sigma.resize(total);
    for (int node = 0; node < out.n_nodes; ++node) {
        const Point x = g.coord(node);
        for (int alpha = 0; alpha < out.n_controls; ++alpha) {
            const int k = out.at(node, alpha);
            out.a[k] = c.a(x, alpha);
            out.b[k] = c.b(x, alpha);
            out.c0[k] = c.c0(x, alpha);
            out.l[k] = c.l(x, alpha);
            if (c.sigma) out.sigma[k] = c.sigma(x, alpha);
            check_entry(g, out, node, alpha);
        }
    }
    return out;
}

Coefficients load_coefficients_csv(std::istream& in, const Grid& g) {
    const int want_cols = g.dim == 1 ? 6 : 9;
    std::string line;
    std::vector<std::vector<double>> rows;
    int max_alpha = -1;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<double> vals;
        std::string cell;
        std::istringstream ls(line);
        bool numeric = true;
        while (std::getline(ls, cell, ',')) {
            try {
                size_t pos = 0;
                vals.push_back(std::stod(cell, &pos));
            } catch (...) {
                numeric = false;
                break;
            }
        }
        if (!numeric) {
            if (line_no == 1) continue;  // header row
            throw ConfigError("coefficients CSV: non-numeric data at line " +
                              std::to_string(line_no));
        }
        if (static_cast<int>(vals.size()) != want_cols)
            throw ConfigError("coefficients CSV: expected " + std::to_string(want_cols) +
                              " columns for dim " + std::to_string(g.dim) + ", got " +
                              std::to_string(vals.size()) + " at line " + std::to_string(line_no));
        max_alpha = std::max(max_alpha, static_cast<int>(vals[1]));
        rows.push_back(std::move(vals));
    }
    require(!rows.empty(), "coefficients CSV: no data rows");
    const int n_controls = max_alpha + 1;
    const int n_nodes = g.node_count();

    Coefficients out;
    out.n_nodes = n_nodes;
    out.n_controls = n_controls;
    const size_t total = static_cast<size_t>(n_nodes) * n_controls;
    out.a.resize(total);
    out.b.resize(total);
    out.c0.resize(total);
    out.l.resize(total);
    std::vector<char> seen(total, 0);
    for (const auto& r : rows) {
        const int node = static_cast<int>(r[0]);
        const int alpha = static_cast<int>(r[1]);
        require(node >= 0 && node < n_nodes, "coefficients CSV: node_index out of range");
        require(alpha >= 0 && alpha < n_controls, "coefficients CSV: alpha_index out of range");
        const int k = out.at(node, alpha);
        require(!seen[k], "coefficients CSV: duplicate (node, alpha) pair");
        seen[k] = 1;
        if (g.dim == 1) {
            out.a[k] = SymMat{r[2], 0.0, 0.0};
            out.b[k] = Vec2{r[3], 0.0};
            out.c0[k] = r[4];
            out.l[k] = r[5];
        } else {
            out.a[k] = SymMat{r[2], r[3], r[4]};
            out.b[k] = Vec2{r[5], r[6]};
            out.c0[k] = r[7];
            out.l[k] = r[8];
        }
    }
    for (size_t k = 0; k < total; ++k)
        require(seen[k] != 0, "coefficients CSV: missing (node, alpha) pairs");
    for (int node = 0; node < n_nodes; ++node)
        for (int alpha = 0; alpha < n_controls; ++alpha) check_entry(g, out, node, alpha);
    return out;
}

Coefficients load_coefficients_csv_file(const std::string& path, const Grid& g) {
    std::ifstream in(path);
    require(in.good(), "cannot open coefficients CSV: " + path);
    return load_coefficients_csv(in, g);
}

std::string to_string(OperatorMode m) {
    switch (m) {
        case OperatorMode::HjbInf: return "hjb-inf";
        case OperatorMode::HjbSup: return "hjb-sup";
        case OperatorMode::PucciMinus: return "pucci-minus";
        case OperatorMode::PucciPlus: return "pucci-plus";
    }
    return "?";
}

OperatorMode mode_from_string(const std::string& s) {
    if (s == "hjb-inf") return OperatorMode::HjbInf;
    if (s == "hjb-sup") return OperatorMode::HjbSup;
    if (s == "pucci-minus") return OperatorMode::PucciMinus;
    if (s == "pucci-plus") return OperatorMode::PucciPlus;
    throw ConfigError("unknown operator mode: " + s +
                      " (expected hjb-inf, hjb-sup, pucci-minus or pucci-plus)");
}

void validate(const ProblemSpec& p) {
    require(p.controls.count >= 1, "control set must be nonempty");
    require(p.coeffs.n_nodes == p.grid.node_count() && p.coeffs.n_controls == p.controls.count,
            "coefficient tables do not cover the grid and control set");
    if (is_pucci(p.mode)) {
        require(p.pucci_lambda > 0.0 && p.pucci_lambda <= p.pucci_Lambda,
                "Pucci constants must satisfy 0 < lambda <= Lambda");
        require(p.grid.dim == 1, "Pucci modes are supported in dimension 1 only");
    }
}

}  // namespace hjb
