#include "hjb/presets.hpp"

#include <cmath>

namespace hjb {

namespace {

CoefficientClosures unit_diffusion_closures(std::function<double(double)> drift,
                                            std::function<double(double)> cost) {
    CoefficientClosures c;
    c.a = [](Point, int) { return SymMat{1.0, 0.0, 1.0}; };
    c.sigma = [](Point, int) { return Mat2{1.0, 0.0, 0.0, 1.0}; };
    c.b = [drift](Point x, int) { return Vec2{drift(x[0]), drift(x[1])}; };
    c.c0 = [](Point, int) { return 0.0; };
    c.l = [cost](Point x, int) { return cost(x[0]); };
    return c;
}

}  // namespace

Preset get_preset(const std::string& name) {
    Preset p;
    p.name = name;
    if (name == "paper-example") {
        // 1D problem with a known critical value 0 and corrector log(1+x^2).
        p.summary = "a=1, b=-x, l=2(x^4+2x^2-1)/(x^2+1)^2; c=0, chi=log(1+x^2)";
        p.grid_l = 6.0;
        p.grid_n = 481;
        p.closures = unit_diffusion_closures(
            [](double x) { return -x; },
            [](double x) {
                const double x2 = x * x;
                const double d = x2 + 1.0;
                return 2.0 * (x2 * x2 + 2.0 * x2 - 1.0) / (d * d);
            });
        return p;
    }
    if (name == "ou-1d") {
        p.summary = "Ornstein-Uhlenbeck drift b=-x with zero running cost";
        p.grid_l = 6.0;
        p.grid_n = 241;
        p.closures = unit_diffusion_closures([](double x) { return -x; },
                                             [](double) { return 0.0; });
        return p;
    }
    if (name == "ou-linear") {
        p.summary = "linear OU (gamma=1, m=0, sigma=1) for the parabolic average";
        p.grid_l = 8.0;
        p.grid_n = 321;
        p.closures = unit_diffusion_closures([](double x) { return -x; },
                                             [](double) { return 0.0; });
        p.ou_mean = 0.0;
        p.ou_variance = 1.0;  // sigma^2 / gamma
        return p;
    }
    if (name == "pucci-ou") {
        p.summary = "Pucci minimal operator (lambda=1, Lambda=2) with drift -x";
        p.grid_l = 6.0;
        p.grid_n = 241;
        p.mode = OperatorMode::PucciMinus;
        p.lambda = 1.0;
        p.Lambda = 2.0;
        p.h0 = "sine-gauss";
        p.closures = unit_diffusion_closures([](double x) { return -x; },
                                             [](double) { return 0.0; });
        return p;
    }
    if (name == "strong-drift") {
        p.summary = "b=-x^3 with bounded cost; the corrector stays bounded";
        p.grid_l = 12.0;
        p.grid_n = 961;
        p.closures = unit_diffusion_closures(
            [](double x) { return -x * x * x; },
            [](double x) { return 1.0 / (1.0 + x * x); });
        return p;
    }
    if (name == "constant-cost") {
        p.summary = "l = 2 everywhere; the critical value is exactly -2";
        p.grid_l = 6.0;
        p.grid_n = 241;
        p.closures = unit_diffusion_closures([](double x) { return -x; },
                                             [](double) { return 2.0; });
        return p;
    }
    throw ConfigError("unknown preset: " + name);
}

std::vector<std::string> preset_names() {
    return {"paper-example", "ou-1d", "ou-linear", "pucci-ou", "strong-drift", "constant-cost"};
}

std::function<double(Point)> initial_datum(const std::string& name, double const_value) {
    if (name == "const") return [const_value](Point) { return const_value; };
    if (name == "runge")
        return [](Point x) { return 1.0 / (1.0 + x[0] * x[0] + x[1] * x[1]); };
    if (name == "sine-gauss")
        return [](Point x) {
            return std::sin(3.0 * x[0]) * std::exp(-(x[0] * x[0] + x[1] * x[1]));
        };
    if (name == "gauss")
        return [](Point x) { return std::exp(-(x[0] * x[0] + x[1] * x[1])); };
    throw ConfigError("unknown initial datum: " + name);
}

std::vector<std::string> initial_datum_names() { return {"const", "runge", "sine-gauss", "gauss"}; }

ProblemSpec build_problem(const Preset& preset, const Grid& grid) {
    ProblemSpec problem;
    problem.grid = grid;
    problem.controls = ControlSet{preset.n_controls, preset.name};
    problem.coeffs = sample_coefficients(preset.closures, grid, problem.controls);
    problem.mode = preset.mode;
    problem.pucci_lambda = preset.lambda;
    problem.pucci_Lambda = preset.Lambda;
    validate(problem);
    return problem;
}

}  // namespace hjb
