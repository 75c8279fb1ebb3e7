#include "hjb/oracle.hpp"

#include <cmath>

namespace hjb {

// xoshiro256++ with splitmix64 seeding.
namespace {

uint64_t splitmix64(uint64_t& s) {
    s += 0x9e3779b97f4a7c15ULL;
    uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Rng::Rng(uint64_t seed) {
    uint64_t s = seed;
    for (auto& w : state) w = splitmix64(s);
}

uint64_t Rng::next_u64() {
    const uint64_t result = rotl(state[0] + state[3], 23) + state[0];
    const uint64_t t = state[1] << 17;
    state[2] ^= state[0];
    state[3] ^= state[1];
    state[1] ^= state[2];
    state[0] ^= state[3];
    state[2] ^= t;
    state[3] = rotl(state[3], 45);
    return result;
}

double Rng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double mag = std::sqrt(-2.0 * std::log(u1));
    spare_ = mag * std::sin(2.0 * M_PI * u2);
    have_spare_ = true;
    return mag * std::cos(2.0 * M_PI * u2);
}

PucciSampleResult pucci_sampling(const SymMat& x, int dim, const PucciParams& params,
                                 int n_samples, uint64_t seed) {
    validate(params);
    require(dim == 1 || dim == 2, "pucci sampling supports dim 1 and 2");
    require(n_samples >= 1, "pucci sampling needs at least one sample");
    Rng rng(seed);
    PucciSampleResult out;
    bool first = true;
    // The eigenvalue bounds are attained at the cube corners d in {lambda,
    // Lambda}^N, and plain uniform draws land near a corner too rarely for
    // the sampled envelope to tighten at practical sample counts. A quarter
    // of the draws therefore snap d to a random corner; every sample remains
    // an admissible matrix, so min_val >= pucci_minus stays exact.
    auto draw_d = [&] {
        if (rng.uniform() < 0.25)
            return rng.uniform() < 0.5 ? params.lambda : params.Lambda;
        return rng.uniform(params.lambda, params.Lambda);
    };
    for (int s = 0; s < n_samples; ++s) {
        double v;
        if (dim == 1) {
            v = -draw_d() * x.a11;
        } else {
            // Rotation by theta is exact Haar measure on SO(2).
            const double theta = rng.uniform(0.0, 2.0 * M_PI);
            const double d1 = draw_d();
            const double d2 = draw_d();
            const double c = std::cos(theta), sn = std::sin(theta);
            const double q1 = x.a11 * c * c + 2.0 * x.a12 * c * sn + x.a22 * sn * sn;
            const double q2 = x.a11 * sn * sn - 2.0 * x.a12 * c * sn + x.a22 * c * c;
            v = -(d1 * q1 + d2 * q2);
        }
        if (first) {
            out.min_val = out.max_val = v;
            first = false;
        } else {
            out.min_val = std::min(out.min_val, v);
            out.max_val = std::max(out.max_val, v);
        }
    }
    return out;
}

namespace {

// Batched path simulation; per-batch seeds keep the reduction order fixed
// independently of how batches might be scheduled.
constexpr long kMcBatch = 1024;

double estimate_max_drift_derivative(const CoefficientClosures& closures, Point x0, int dim) {
    double out = 0.0;
    const double span = std::max(2.0 * std::max(std::abs(x0[0]), std::abs(x0[1])), 10.0);
    const double eps = 1e-4 * span;
    for (int k = -20; k <= 20; ++k) {
        Point x = x0;
        x[0] += span * k / 20.0;
        const Vec2 bp = closures.b({x[0] + eps, x[1]}, 0);
        const Vec2 bm = closures.b({x[0] - eps, x[1]}, 0);
        out = std::max(out, std::abs(bp.v1 - bm.v1) / (2.0 * eps));
        if (dim == 2) out = std::max(out, std::abs(bp.v2 - bm.v2) / (2.0 * eps));
    }
    return out;
}

}  // namespace

McResult mc_discounted_value(const CoefficientClosures& closures, Point x0, int dim,
                             double delta, long n_paths, double dt, uint64_t seed) {
    require(dim == 1 || dim == 2, "mc oracle supports dim 1 and 2");
    require(delta > 0.0, "mc oracle needs delta > 0");
    require(dt > 0.0, "mc oracle needs dt > 0");
    require(n_paths >= 1, "mc oracle needs at least one path");
    require(static_cast<bool>(closures.sigma), "mc oracle needs the sigma closure (a = sigma sigma^T)");
    require(static_cast<bool>(closures.b) && static_cast<bool>(closures.l),
            "mc oracle needs b and l closures");

    const double horizon = 8.0 / delta;
    const long n_steps = static_cast<long>(std::ceil(horizon / dt));
    const double sq2dt = std::sqrt(2.0 * dt);

    McResult out;
    out.n_paths = n_paths;
    out.seed = seed;
    out.dt_warning = dt * estimate_max_drift_derivative(closures, x0, dim) > 0.5;

    double sum = 0.0, sumsq = 0.0;
    const long n_batches = (n_paths + kMcBatch - 1) / kMcBatch;
    for (long batch = 0; batch < n_batches; ++batch) {
        Rng rng(seed + static_cast<uint64_t>(batch));
        const long count = std::min(kMcBatch, n_paths - batch * kMcBatch);
        double bsum = 0.0, bsumsq = 0.0;
        for (long p = 0; p < count; ++p) {
            Point x = x0;
            double value = 0.0;
            double disc = 1.0;  // e^{-delta t_k}
            const double decay = std::exp(-delta * dt);
            for (long k = 0; k < n_steps; ++k) {
                value += disc * (1.0 - decay) / delta * closures.l(x, 0);
                const Vec2 b = closures.b(x, 0);
                const Mat2 s = closures.sigma(x, 0);
                const double z1 = rng.normal();
                const double z2 = dim == 2 ? rng.normal() : 0.0;
                x[0] += b.v1 * dt + sq2dt * (s.m11 * z1 + s.m12 * z2);
                if (dim == 2) x[1] += b.v2 * dt + sq2dt * (s.m21 * z1 + s.m22 * z2);
                disc *= decay;
            }
            value += disc / delta * closures.l(x, 0);  // frozen tail beyond the horizon
            bsum += value;
            bsumsq += value * value;
        }
        sum += bsum;
        sumsq += bsumsq;
    }
    const double n = static_cast<double>(n_paths);
    out.estimate = sum / n;
    const double var = std::max(0.0, sumsq / n - out.estimate * out.estimate);
    out.stderr_est = n > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
    return out;
}

double gaussian_average(const std::function<double(double)>& h, double mean, double variance,
                        int n_quad) {
    require(variance > 0.0, "gaussian average needs variance > 0");
    require(n_quad >= 8, "gaussian average needs at least 8 panels");
    const double sd = std::sqrt(variance);
    const double lo = mean - 8.0 * sd, hi = mean + 8.0 * sd;

    auto pass = [&](int n) {
        const double step = (hi - lo) / n;
        double num = 0.0, den = 0.0;
        for (int i = 0; i <= n; ++i) {
            const double y = lo + step * i;
            const double z = (y - mean) / sd;
            double w = std::exp(-0.5 * z * z);
            if (i == 0 || i == n) w *= 0.5;
            num += w * h(y);
            den += w;
        }
        return num / den;
    };

    double prev = pass(n_quad);
    for (int n = 2 * n_quad; n <= (1 << 24); n *= 2) {
        const double cur = pass(n);
        if (std::abs(cur - prev) < 1e-10) return cur;
        prev = cur;
    }
    throw NumericalError("gaussian average quadrature did not settle to 1e-10");
}

std::vector<double> dense_solve(std::vector<double> a, std::vector<double> rhs) {
    const size_t n = rhs.size();
    require(n >= 1 && n <= 500, "dense solve supports 1..500 unknowns");
    require(a.size() == n * n, "dense solve: matrix/rhs size mismatch");
    const std::vector<double> a0 = a;
    const std::vector<double> rhs0 = rhs;

    std::vector<size_t> perm(n);
    for (size_t i = 0; i < n; ++i) perm[i] = i;

    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        double best = std::abs(a[perm[col] * n + col]);
        for (size_t r = col + 1; r < n; ++r) {
            const double v = std::abs(a[perm[r] * n + col]);
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        double scale = 0.0;
        for (size_t c = 0; c < n; ++c) scale = std::max(scale, std::abs(a0[perm[piv] * n + c]));
        if (best <= 1e-14 * std::max(1.0, scale))
            throw NumericalError("dense solve: matrix is singular to working tolerance");
        std::swap(perm[col], perm[piv]);
        const double d = a[perm[col] * n + col];
        for (size_t r = col + 1; r < n; ++r) {
            const double f = a[perm[r] * n + col] / d;
            if (f == 0.0) continue;
            a[perm[r] * n + col] = 0.0;
            for (size_t c = col + 1; c < n; ++c) a[perm[r] * n + c] -= f * a[perm[col] * n + c];
            rhs[perm[r]] -= f * rhs[perm[col]];
        }
    }
    std::vector<double> x(n, 0.0);
    for (size_t i = n; i-- > 0;) {
        double s = rhs[perm[i]];
        for (size_t c = i + 1; c < n; ++c) s -= a[perm[i] * n + c] * x[c];
        x[i] = s / (a[perm[i] * n + i]);
    }

    double rnorm = 0.0, bnorm = 0.0;
    for (size_t r = 0; r < n; ++r) {
        double s = -rhs0[r];
        for (size_t c = 0; c < n; ++c) s += a0[r * n + c] * x[c];
        rnorm = std::max(rnorm, std::abs(s));
        bnorm = std::max(bnorm, std::abs(rhs0[r]));
    }
    if (rnorm > 1e-10 * std::max(1.0, bnorm))
        throw NumericalError("dense solve: residual check failed");
    return x;
}

}  // namespace hjb
