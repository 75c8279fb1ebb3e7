#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hjb/problem.hpp"

namespace hjb {

// Named problem families runnable from the CLI. Grid parameters are defaults
// and can be overridden by flags; closures are fixed per preset.
struct Preset {
    std::string name;
    std::string summary;
    int dim = 1;
    double grid_l = 6.0;
    int grid_n = 241;
    OperatorMode mode = OperatorMode::HjbInf;
    double lambda = 1.0, Lambda = 1.0;
    int n_controls = 1;
    CoefficientClosures closures;

    double delta0 = 0.2;
    double ladder_factor = 0.5;
    int ladder_len = 7;
    double t_final = 40.0;
    double tail_window = 10.0;
    std::string h0 = "runge";

    // Set for linear OU presets; enables the invariant-measure comparison.
    std::optional<double> ou_mean;
    std::optional<double> ou_variance;
};

Preset get_preset(const std::string& name);
std::vector<std::string> preset_names();

// Named initial data for the parabolic runs.
std::function<double(Point)> initial_datum(const std::string& name, double const_value);
std::vector<std::string> initial_datum_names();

ProblemSpec build_problem(const Preset& preset, const Grid& grid);

}  // namespace hjb
