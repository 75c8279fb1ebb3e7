#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "hjb/errors.hpp"

namespace hjb {

// A point in the state space. Dimension 1 problems use only x[0].
using Point = std::array<double, 2>;

// Uniform tensor grid on the box [-L, L]^dim, dim in {1, 2}.
// n_per_dim is odd so that the origin is a node; nodes are indexed
// lexicographically (axis 0 fastest). Cheap to copy by value.
struct Grid {
    int dim = 1;
    double halfwidth = 1.0;   // L
    int n_per_dim = 3;
    double spacing = 1.0;     // 2L/(n-1)

    int node_count() const { return dim == 1 ? n_per_dim : n_per_dim * n_per_dim; }
    int mid() const { return (n_per_dim - 1) / 2; }

    std::array<int, 2> multi_index(int node) const {
        if (dim == 1) return {node, 0};
        return {node % n_per_dim, node / n_per_dim};
    }
    int node_of(int i, int j = 0) const {
        return dim == 1 ? i : i + n_per_dim * j;
    }

    // coord is exact at the origin: offsets are measured from the center node.
    double axis_coord(int k) const { return spacing * (k - mid()); }
    Point coord(int node) const {
        auto m = multi_index(node);
        return {axis_coord(m[0]), dim == 2 ? axis_coord(m[1]) : 0.0};
    }

    bool is_boundary(int node) const {
        auto m = multi_index(node);
        for (int d = 0; d < dim; ++d)
            if (m[d] == 0 || m[d] == n_per_dim - 1) return true;
        return false;
    }

    int origin_node() const { return node_of(mid(), dim == 2 ? mid() : 0); }

    int nearest_axis_index(double x) const {
        int k = static_cast<int>(std::lround(x / spacing)) + mid();
        if (k < 0) k = 0;
        if (k >= n_per_dim) k = n_per_dim - 1;
        return k;
    }
    int nearest_node(Point p) const {
        return node_of(nearest_axis_index(p[0]),
                       dim == 2 ? nearest_axis_index(p[1]) : 0);
    }

    std::vector<int> interior() const {
        std::vector<int> out;
        out.reserve(node_count());
        for (int i = 0; i < node_count(); ++i)
            if (!is_boundary(i)) out.push_back(i);
        return out;
    }

    bool operator==(const Grid&) const = default;
};

Grid build_grid(int dim, double halfwidth, int n_per_dim);

// Node-indexed scalar data bound to a grid.
struct ScalarField {
    Grid grid;
    std::vector<double> values;

    ScalarField() = default;
    explicit ScalarField(const Grid& g, double fill = 0.0)
        : grid(g), values(static_cast<size_t>(g.node_count()), fill) {}

    double& operator[](int i) { return values[static_cast<size_t>(i)]; }
    double operator[](int i) const { return values[static_cast<size_t>(i)]; }
    int size() const { return static_cast<int>(values.size()); }
};

ScalarField sample_field(const Grid& g, const std::function<double(Point)>& f);

void require_same_grid(const ScalarField& u, const Grid& g, const char* what);
void require_finite(const ScalarField& u, const char* what);

double max_abs(const ScalarField& u);

}  // namespace hjb
