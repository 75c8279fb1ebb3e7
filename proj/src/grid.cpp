#include "hjb/grid.hpp"

#include <cmath>
#include <string>

namespace hjb {

Grid build_grid(int dim, double halfwidth, int n_per_dim) {
    require(dim == 1 || dim == 2, "grid dim must be 1 or 2, got " + std::to_string(dim));
    require(halfwidth > 0.0, "grid halfwidth must be positive");
    require(n_per_dim >= 3, "grid needs at least 3 nodes per dimension");
    require(n_per_dim % 2 == 1,
            "n_per_dim must be odd so the origin is a node, got " + std::to_string(n_per_dim));
    Grid g;
    g.dim = dim;
    g.halfwidth = halfwidth;
    g.n_per_dim = n_per_dim;
    g.spacing = 2.0 * halfwidth / (n_per_dim - 1);
    return g;
}

ScalarField sample_field(const Grid& g, const std::function<double(Point)>& f) {
    ScalarField u(g);
    for (int i = 0; i < g.node_count(); ++i) u[i] = f(g.coord(i));
    return u;
}

void require_same_grid(const ScalarField& u, const Grid& g, const char* what) {
    if (!(u.grid == g))
        throw ConfigError(std::string(what) + ": field grid does not match operator grid");
}

void require_finite(const ScalarField& u, const char* what) {
    for (double v : u.values)
        if (!std::isfinite(v))
            throw ConfigError(std::string(what) + ": field contains non-finite values");
}

double max_abs(const ScalarField& u) {
    double m = 0.0;
    for (double v : u.values) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace hjb
