#include <doctest.h>

#include "hjb/grid.hpp"

using namespace hjb;

TEST_CASE("smallest 1d grid has nodes -1, 0, 1") {
    const Grid g = build_grid(1, 1.0, 3);
    CHECK(g.node_count() == 3);
    CHECK(g.spacing == doctest::Approx(1.0));
    CHECK(g.coord(0)[0] == doctest::Approx(-1.0));
    CHECK(g.coord(1)[0] == 0.0);
    CHECK(g.coord(2)[0] == doctest::Approx(1.0));
    CHECK(g.is_boundary(0));
    CHECK(!g.is_boundary(1));
    CHECK(g.is_boundary(2));
}

TEST_CASE("production-size 1d grid") {
    const Grid g = build_grid(1, 6.0, 481);
    CHECK(g.node_count() == 481);
    CHECK(g.spacing == doctest::Approx(0.025).epsilon(1e-14));
    CHECK(g.coord(g.origin_node())[0] == 0.0);  // origin is exact
}

TEST_CASE("2d grid node and interior counts") {
    const Grid g = build_grid(2, 2.0, 5);
    CHECK(g.node_count() == 25);
    CHECK(g.interior().size() == 9);
    CHECK(g.coord(g.origin_node())[0] == 0.0);
    CHECK(g.coord(g.origin_node())[1] == 0.0);
}

TEST_CASE("grid construction rejects bad parameters") {
    CHECK_THROWS_AS(build_grid(1, 1.0, 4), ConfigError);   // even: origin missing
    CHECK_THROWS_AS(build_grid(1, -1.0, 5), ConfigError);  // non-positive halfwidth
    CHECK_THROWS_AS(build_grid(1, 0.0, 5), ConfigError);
    CHECK_THROWS_AS(build_grid(3, 1.0, 5), ConfigError);   // dim cap
    CHECK_THROWS_AS(build_grid(1, 1.0, 1), ConfigError);
}

TEST_CASE("node to coordinate round trip is exact for every index") {
    for (const Grid g : {build_grid(1, 6.0, 481), build_grid(2, 2.5, 21)}) {
        for (int node = 0; node < g.node_count(); ++node)
            CHECK(g.nearest_node(g.coord(node)) == node);
    }
}

TEST_CASE("boundary mask matches extreme multi-indices") {
    const Grid g = build_grid(2, 1.0, 5);
    int boundary = 0;
    for (int node = 0; node < g.node_count(); ++node) boundary += g.is_boundary(node);
    CHECK(boundary == 16);
}

TEST_CASE("field helpers") {
    const Grid g = build_grid(1, 2.0, 5);
    const ScalarField u = sample_field(g, [](Point x) { return 3.0 * x[0]; });
    CHECK(u[0] == doctest::Approx(-6.0));
    CHECK(max_abs(u) == doctest::Approx(6.0));
    ScalarField bad = u;
    bad.values[2] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(require_finite(bad, "test"), ConfigError);
    CHECK_NOTHROW(require_finite(u, "test"));
    CHECK_THROWS_AS(require_same_grid(u, build_grid(1, 2.0, 7), "test"), ConfigError);
}
