#include "spectrafrac/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace spectrafrac {

const double kDefaultProfileRatio = std::pow(2.0, 0.25);

double tent_eval(double t, double x, double y) {
    if (!(t > 0.0)) throw std::domain_error("tent_eval: t must be > 0");
    double d = std::abs(x - y);
    if (d <= 1.0 / t) return 1.0;
    if (d >= 2.0 / t) return 0.0;
    return std::min(1.0, std::max(0.0, 2.0 - t * d));
}

double v_t(const DiscreteMeasure& mu, double t, double x) {
    if (!(t > 0.0)) throw std::domain_error("v_t: t must be > 0");
    const double reach = 2.0 / t;
    std::size_t lo = mu.upper_index(x - reach);
    std::size_t hi = mu.lower_index(x + reach);
    const auto& pos = mu.positions();
    const auto& w = mu.weights();
    const double inner = 1.0 / t;
    double acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
        double d = std::abs(x - pos[i]);
        if (d <= inner)
            acc += w[i];
        else
            acc += w[i] * std::min(1.0, std::max(0.0, 2.0 - t * d));
    }
    return acc;
}

std::vector<std::pair<double, double>> profile_grid(const DiscreteMeasure& mu, double x, double s,
                                                    double t_max, double ratio) {
    if (!(s > 0.0) || !(t_max > s)) throw std::domain_error("profile_grid: need 0 < s < t_max");
    if (!(ratio > 1.0)) throw std::domain_error("profile_grid: ratio must be > 1");
    const double cap = t_max * (1.0 + 1e-12);
    std::vector<std::pair<double, double>> rows;
    std::size_t count = 0;
    for (double t = s; t <= cap; t *= ratio) {
        if (++count > 1000000) throw resource_error("profile_grid: more than 1e6 grid points");
        rows.emplace_back(t, v_t(mu, t, x));
    }
    return rows;
}

ScalingProfile scaling_profile(const DiscreteMeasure& mu, double alpha, double x, double s,
                               double t_max, double ratio) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::domain_error("scaling_profile: alpha outside [0,1]");
    ScalingProfile p;
    p.x = x;
    p.alpha = alpha;
    p.s_min = s;
    p.t_max = t_max;
    p.ratio = ratio;
    auto grid = profile_grid(mu, x, s, t_max, ratio);
    p.rows.reserve(grid.size());
    p.gamma_h = -1.0;
    p.gamma_p = std::numeric_limits<double>::infinity();
    for (const auto& [t, v] : grid) {
        double scaled = std::pow(t, alpha) * v;
        p.rows.push_back({t, v, scaled});
        if (scaled > p.gamma_h) {
            p.gamma_h = scaled;
            p.gamma_h_at = t;
        }
        if (scaled < p.gamma_p) {
            p.gamma_p = scaled;
            p.gamma_p_at = t;
        }
    }
    return p;
}

std::string profile_to_csv(const ScalingProfile& p) {
    std::string out;
    char buf[160];
    std::snprintf(buf, sizeof buf, "# x=%.17g alpha=%.17g s=%.17g t_max=%.17g ratio=%.17g\n", p.x,
                  p.alpha, p.s_min, p.t_max, p.ratio);
    out += buf;
    for (const auto& r : p.rows) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", r.t, r.v, r.scaled);
        out += buf;
    }
    return out;
}

}  // namespace spectrafrac
