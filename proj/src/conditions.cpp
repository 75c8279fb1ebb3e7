#include "hjb/conditions.hpp"

#include <algorithm>
#include <cmath>

namespace hjb {

std::string to_string(ConditionId id) {
    switch (id) {
        case ConditionId::C4: return "C4";
        case ConditionId::C4bis: return "C4bis";
        case ConditionId::OuForm: return "OU-form";
        case ConditionId::C5: return "C5";
        case ConditionId::C6_5: return "C6.5";
        case ConditionId::C4QL: return "C4QL";
        case ConditionId::C10: return "C10";
        case ConditionId::C10strong: return "C10strong";
        case ConditionId::C10ou: return "C10ou";
        case ConditionId::C10extrastrong: return "C10extrastrong";
        case ConditionId::C10lessstrong: return "C10lessstrong";
    }
    return "?";
}

ConditionId condition_from_string(const std::string& s) {
    for (ConditionId id : all_conditions())
        if (to_string(id) == s) return id;
    throw ConfigError("unknown condition id: " + s);
}

std::vector<ConditionId> all_conditions() {
    return {ConditionId::C4,    ConditionId::C4bis,     ConditionId::OuForm,
            ConditionId::C5,    ConditionId::C6_5,      ConditionId::C4QL,
            ConditionId::C10,   ConditionId::C10strong, ConditionId::C10ou,
            ConditionId::C10extrastrong, ConditionId::C10lessstrong};
}

namespace {

double need(const std::optional<double>& v, const char* name, ConditionId id) {
    if (!v)
        throw ConfigError(std::string("condition ") + to_string(id) +
                          " needs parameter " + name);
    return *v;
}

std::vector<Point> direction_fan(int dim, int angular_samples) {
    std::vector<Point> dirs;
    if (dim == 1) {
        dirs.push_back({1.0, 0.0});
        dirs.push_back({-1.0, 0.0});
    } else {
        require(angular_samples >= 1, "need at least one angular sample");
        for (int j = 0; j < angular_samples; ++j) {
            const double th = 2.0 * M_PI * j / angular_samples;
            dirs.push_back({std::cos(th), std::sin(th)});
        }
    }
    return dirs;
}

}  // namespace

ConditionReport check_condition(ConditionId id, const CoefficientClosures& closures,
                                int n_controls, int dim, const ConditionParams& params,
                                const std::vector<double>& radii, int angular_samples) {
    require(!radii.empty(), "check_condition needs a nonempty radius sample");
    require(n_controls >= 1, "check_condition needs a nonempty control sample");
    require(dim == 1 || dim == 2, "check_condition supports dim 1 and 2");
    std::vector<double> rs = radii;
    std::sort(rs.begin(), rs.end());
    require(rs.front() > 0.0, "sampled radii must be positive");

    ConditionReport rep;
    rep.id = id;
    rep.sampled_evidence = id == ConditionId::C4bis || id == ConditionId::OuForm;

    const int big_n = dim;
    auto dirs = direction_fan(dim, angular_samples);

    // Records the parameters the margin actually used, for the report.
    auto use = [&](const char* name, double v) { rep.params_used[name] = v; };

    // margin(x) >= 0 iff the condition's inequality holds at x.
    std::function<double(Point, double)> margin;
    switch (id) {
        case ConditionId::C4:
            margin = [&](Point x, double r) {
                double lhs = -1e300;
                for (int al = 0; al < n_controls; ++al)
                    lhs = std::max(lhs, trace(closures.a(x, al), dim) + dot(closures.b(x, al), x, dim) -
                                            closures.c0(x, al) * r * r / 2.0);
                return -lhs;
            };
            break;
        case ConditionId::C4bis:
            use("strict_eps", params.strict_eps);
            margin = [&](Point x, double) {
                double lhs = -1e300;
                for (int al = 0; al < n_controls; ++al)
                    lhs = std::max(lhs, trace(closures.a(x, al), dim) + dot(closures.b(x, al), x, dim));
                return -lhs - params.strict_eps;
            };
            break;
        case ConditionId::OuForm: {
            const double gamma = need(params.gamma, "gamma", id);
            use("gamma", gamma);
            use("m1", params.m_center[0]);
            if (dim == 2) use("m2", params.m_center[1]);
            use("ou_tol", params.ou_tol);
            margin = [&, gamma](Point x, double r) {
                double lhs = 0.0;
                for (int al = 0; al < n_controls; ++al) {
                    Vec2 tb = closures.b(x, al);
                    tb.v1 -= gamma * (params.m_center[0] - x[0]);
                    if (dim == 2) tb.v2 -= gamma * (params.m_center[1] - x[1]);
                    lhs = std::max(lhs, std::abs(dot(tb, x, dim)) / (r * r));
                }
                return params.ou_tol - lhs;
            };
            break;
        }
        case ConditionId::C5: {
            const double lam = need(params.lambda, "lambda", id);
            const double big = need(params.Lambda, "Lambda", id);
            use("lambda", lam);
            use("Lambda", big);
            margin = [&, lam, big](Point x, double r) {
                double lhs = -1e300;
                for (int al = 0; al < n_controls; ++al)
                    lhs = std::max(lhs, dot(closures.b(x, al), x, dim) -
                                            closures.c0(x, al) * r * r * std::log(r));
                return lam - (big_n - 1) * big - lhs;
            };
            break;
        }
        case ConditionId::C6_5: {
            const double lam = need(params.lambda, "lambda", id);
            const double big = need(params.Lambda, "Lambda", id);
            require(static_cast<bool>(params.b_bar) && static_cast<bool>(params.g) &&
                        static_cast<bool>(params.c_bar),
                    "condition C6.5 needs the b_bar, g, c_bar decomposition closures");
            use("lambda", lam);
            use("Lambda", big);
            margin = [&, lam, big](Point x, double r) {
                return params.c_bar(x) * r * r * std::log(r) + lam - (big_n - 1) * big -
                       dot(params.b_bar(x), x, dim) - params.g(x) * r;
            };
            break;
        }
        case ConditionId::C4QL:
            margin = [&](Point x, double r) {
                double sig2 = -1e300, lhs = -1e300;
                for (int al = 0; al < n_controls; ++al) {
                    sig2 = std::max(sig2, trace(closures.a(x, al), dim));
                    lhs = std::max(lhs, dot(closures.b(x, al), x, dim) -
                                            closures.c0(x, al) * r * r / 2.0);
                }
                return -(sig2 + lhs);
            };
            break;
        case ConditionId::C10: {
            const double lam = need(params.lambda, "lambda", id);
            const double big = need(params.Lambda, "Lambda", id);
            require(static_cast<bool>(params.b_bar) && static_cast<bool>(params.g),
                    "condition C10 needs the b_bar and g decomposition closures");
            use("lambda", lam);
            use("Lambda", big);
            margin = [&, lam, big](Point x, double r) {
                return lam - (big_n - 1) * big - dot(params.b_bar(x), x, dim) - params.g(x) * r;
            };
            break;
        }
        case ConditionId::C10strong: {
            const double m = need(params.M, "M", id);
            use("M", m);
            margin = [&, m](Point x, double) {
                double lhs = -1e300;
                for (int al = 0; al < n_controls; ++al)
                    lhs = std::max(lhs, trace(closures.a(x, al), dim) + dot(closures.b(x, al), x, dim));
                return -m - lhs;
            };
            break;
        }
        case ConditionId::C10ou: {
            const double m = need(params.M, "M", id);
            const double beta = need(params.beta, "beta", id);
            require(beta > 0.0 && beta < 2.0, "condition C10ou needs beta in (0, 2)");
            use("M", m);
            use("beta", beta);
            margin = [&, m, beta](Point x, double r) {
                double lhs = -1e300;
                for (int al = 0; al < n_controls; ++al)
                    lhs = std::max(lhs, trace(closures.a(x, al), dim) + dot(closures.b(x, al), x, dim));
                return -m * std::pow(r, 2.0 - beta) - lhs;
            };
            break;
        }
        case ConditionId::C10extrastrong:
        case ConditionId::C10lessstrong: {
            const double rho = need(params.rho, "rho", id);
            const double cv = need(params.c_value, "c_value", id);
            const double li = need(params.l_inf, "l_inf", id);
            require(rho > 0.0, "needs rho > 0");
            use("rho", rho);
            use("c_value", cv);
            use("l_inf", li);
            double shift = 0.0;
            if (id == ConditionId::C10lessstrong) {
                const double lam = need(params.lambda, "lambda", id);
                use("lambda", lam);
                shift = lam * (2.0 + rho);
            }
            const double rate = (2.0 * std::abs(cv) + li) / rho;
            margin = [&, rate, rho, shift](Point x, double r) {
                double lhs = -1e300;
                for (int al = 0; al < n_controls; ++al)
                    lhs = std::max(lhs, trace(closures.a(x, al), dim) +
                                            dot(closures.b(x, al), x, dim) - shift);
                return -rate * std::pow(r, 2.0 + rho) - lhs;
            };
            break;
        }
    }

    for (double r : rs) {
        double worst = 1e300;
        for (const Point& d : dirs) {
            const Point x = {r * d[0], dim == 2 ? r * d[1] : 0.0};
            worst = std::min(worst, margin(x, r));
        }
        rep.margins.emplace_back(r, worst);
    }

    // Smallest sampled radius from which the slack stays nonnegative.
    int from = -1;
    for (int i = static_cast<int>(rep.margins.size()) - 1; i >= 0; --i) {
        if (rep.margins[static_cast<size_t>(i)].second >= 0.0)
            from = i;
        else
            break;
    }
    if (from >= 0) {
        rep.holds = true;
        rep.R0 = rep.margins[static_cast<size_t>(from)].first;
    }
    return rep;
}

RadialProfile suggest_lyapunov(ConditionId id, const ConditionParams& params) {
    switch (id) {
        case ConditionId::C4:
        case ConditionId::C4bis:
        case ConditionId::OuForm:
        case ConditionId::C4QL:
        case ConditionId::C10strong:
            return quadratic_profile();
        case ConditionId::C5:
        case ConditionId::C6_5:
        case ConditionId::C10:
            return log_profile();
        case ConditionId::C10ou:
            return power_profile(need(params.beta, "beta", id));
        case ConditionId::C10extrastrong:
        case ConditionId::C10lessstrong:
            return inverse_power_profile(need(params.rho, "rho", id), need(params.R, "R", id));
    }
    throw ConfigError("no Lyapunov profile paired with this condition");
}

double verify_supersolution(const RadialProfile& profile, const CoefficientClosures& closures,
                            int n_controls, int dim, OperatorMode mode,
                            const PucciParams& pucci, const std::vector<double>& radii,
                            int angular_samples) {
    require(!radii.empty(), "verify_supersolution needs a nonempty radius sample");
    for (double r : radii) require(r > 0.0, "verify_supersolution: radius 0 is singular");
    require(dim == 1 || dim == 2, "verify_supersolution supports dim 1 and 2");

    // Fold sup-type operators onto their concave companions: G~[-w] = -G[w].
    OperatorMode eval_mode = mode;
    if (mode == OperatorMode::HjbSup) eval_mode = OperatorMode::HjbInf;
    if (mode == OperatorMode::PucciPlus) eval_mode = OperatorMode::PucciMinus;

    auto dirs = direction_fan(dim, angular_samples);
    std::vector<ControlTerm> terms(static_cast<size_t>(n_controls));
    double worst = 1e300;
    for (double r : radii) {
        const RadialHessian eig = radial_hessian_eigs(profile, r, dim);
        const double dphi = profile.dphi(r);
        const double w_val = profile.phi(r);
        for (const Point& d : dirs) {
            const Point x = {r * d[0], dim == 2 ? r * d[1] : 0.0};
            const Vec2 p = {dphi * d[0], dim == 2 ? dphi * d[1] : 0.0};
            SymMat hess;
            if (dim == 1) {
                hess.a11 = eig.radial;
            } else {
                hess.a11 = eig.radial * d[0] * d[0] + eig.tangential * d[1] * d[1];
                hess.a22 = eig.radial * d[1] * d[1] + eig.tangential * d[0] * d[0];
                hess.a12 = (eig.radial - eig.tangential) * d[0] * d[1];
            }
            for (int al = 0; al < n_controls; ++al)
                terms[static_cast<size_t>(al)] = {closures.a(x, al), closures.b(x, al),
                                                  closures.c0(x, al), 0.0};
            const HamiltonianValue v =
                hamiltonian_pointwise(terms, w_val, p, hess, dim, eval_mode, pucci);
            worst = std::min(worst, v.value);
        }
    }
    return worst;
}

}  // namespace hjb
