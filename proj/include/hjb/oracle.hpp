#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "hjb/problem.hpp"
#include "hjb/pucci.hpp"

namespace hjb {

// Deterministic xorshift-free uniform/normal generators on top of a fixed
// 64-bit state; hand-rolled so results are bitwise stable across platforms.
struct Rng {
    uint64_t state[4];

    explicit Rng(uint64_t seed);
    uint64_t next_u64();
    double uniform();                      // [0, 1)
    double uniform(double lo, double hi);  // [lo, hi)
    double normal();                       // standard normal, Box-Muller
  private:
    bool have_spare_ = false;
    double spare_ = 0.0;
};

struct PucciSampleResult {
    double min_val = 0.0;
    double max_val = 0.0;
};

// Samples admissible matrices M = Q diag(d) Q^T with Q a random rotation and
// d uniform in [lambda, Lambda]^dim, and returns the sampled extrema of
// -tr(MX). min_val >= pucci_minus(X) holds exactly for every sample count.
PucciSampleResult pucci_sampling(const SymMat& x, int dim, const PucciParams& params,
                                 int n_samples, uint64_t seed);

struct McResult {
    double estimate = 0.0;
    double stderr_est = 0.0;
    long n_paths = 0;
    uint64_t seed = 0;
    bool dt_warning = false;  // dt * max|b'| > 0.5 heuristic tripped
};

// Monte Carlo value of the discounted single-control problem at x0:
// Euler-Maruyama paths of dX = b dt + sqrt(2) sigma dW, discounted quadrature
// of l along each path with exact exponential weights, truncated at horizon
// 8/delta with the tail closed by freezing l at the final state.
McResult mc_discounted_value(const CoefficientClosures& closures, Point x0, int dim,
                             double delta, long n_paths, double dt, uint64_t seed);

// Self-normalized composite trapezoid quadrature of h against the Gaussian
// density N(mean, variance) over [mean - 8 sd, mean + 8 sd]. n_quad is the
// starting panel count; it is doubled until the result moves by < 1e-10.
double gaussian_average(const std::function<double(double)>& h, double mean, double variance,
                        int n_quad);

// Direct elimination with partial pivoting for systems up to 500 unknowns.
// a is row-major n x n. Verifies the residual to 1e-10 * ||rhs||.
std::vector<double> dense_solve(std::vector<double> a, std::vector<double> rhs);

}  // namespace hjb
