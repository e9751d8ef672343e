#include "spectrafrac/local_dims.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include <json.hpp>

#include "spectrafrac/parallel.hpp"
#include "spectrafrac/rng.hpp"

namespace spectrafrac {

LocalDimEstimate local_dim_bounds(const DiscreteMeasure& mu, double x, double eps_min,
                                  double eps_max, int n_scales) {
    if (!(eps_min > 0.0) || !(eps_min < eps_max))
        throw std::domain_error("local_dim_bounds: need 0 < eps_min < eps_max");
    if (n_scales < 4) throw std::domain_error("local_dim_bounds: need at least 4 scales");
    if (!(ball_mass(mu, x, eps_max) > 0.0))
        throw std::domain_error("local_dim_bounds: outside support (zero mass at eps_max)");

    const double step = std::pow(eps_max / eps_min, 1.0 / (n_scales - 1));
    std::vector<double> eps(static_cast<std::size_t>(n_scales)), mass(eps.size());
    for (int j = 0; j < n_scales; ++j) {
        eps[static_cast<std::size_t>(j)] = eps_min * std::pow(step, j);
        mass[static_cast<std::size_t>(j)] = ball_mass(mu, x, eps[static_cast<std::size_t>(j)]);
    }

    const double inf = std::numeric_limits<double>::infinity();
    LocalDimEstimate est;
    est.x = x;
    est.eps_min = eps_min;
    est.eps_max = eps_max;
    est.n_scales = n_scales;
    double lo = inf, hi = -inf;
    bool saw_zero = false;
    for (int j = 0; j + 2 < n_scales; ++j) {
        double m0 = mass[static_cast<std::size_t>(j)], m1 = mass[static_cast<std::size_t>(j + 2)];
        if (m0 <= 0.0 || m1 <= 0.0) {
            saw_zero = true;
            continue;
        }
        double slope = std::log(m1 / m0) / std::log(eps[static_cast<std::size_t>(j + 2)] /
                                                    eps[static_cast<std::size_t>(j)]);
        lo = std::min(lo, slope);
        hi = std::max(hi, slope);
    }
    est.d_lower = (lo == inf) ? inf : lo;
    est.d_upper = saw_zero ? inf : hi;
    if (est.d_upper < est.d_lower) est.d_upper = est.d_lower;
    return est;
}

namespace {

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

// Nearest-rank quantile on a sorted vector; monotone in q.
double quantile_sorted(const std::vector<double>& sorted, double q) {
    std::size_t n = sorted.size();
    auto idx = static_cast<std::size_t>(std::min<double>(static_cast<double>(n - 1), std::floor(q * static_cast<double>(n))));
    return sorted[idx];
}

}  // namespace

MeasureDimReport measure_dims(const DiscreteMeasure& mu, const MeasureDimParams& params,
                              std::vector<PointDetail>* detail) {
    if (mu.empty()) throw std::domain_error("measure_dims: empty measure");
    if (!(params.quantile > 0.5 && params.quantile < 1.0))
        throw std::domain_error("measure_dims: quantile must lie in (0.5, 1)");
    if (params.n_sample < 1) throw std::domain_error("measure_dims: n_sample must be >= 1");

    const std::size_t n = static_cast<std::size_t>(params.n_sample);
    std::vector<std::size_t> picks(n);
    const double total = mu.total_mass();
    for (std::size_t i = 0; i < n; ++i) {
        SplitMix64 g(derive_stream(params.seed, i));
        // inverse CDF; atoms always carry their own weight, so ball_mass at a
        // sampled position is strictly positive
        picks[i] = mu.index_for_mass(g.next_double() * total);
    }

    std::vector<double> dls(n), dus(n);
    std::vector<PointDetail> rows(n);
    parallel_for(n, params.jobs, [&](std::size_t i) {
        std::size_t k = picks[i];
        LocalDimEstimate est =
            local_dim_bounds(mu, mu.position(k), params.eps_min, params.eps_max, params.n_scales);
        dls[i] = est.d_lower;
        dus[i] = est.d_upper;
        rows[i] = {mu.position(k), mu.weight(k), est.d_lower, est.d_upper};
    });
    if (detail) *detail = rows;

    std::sort(dls.begin(), dls.end());
    std::sort(dus.begin(), dus.end());
    MeasureDimReport rep;
    rep.dim_h_upper = clamp01(quantile_sorted(dls, params.quantile));
    rep.dim_p_lower = clamp01(quantile_sorted(dus, 1.0 - params.quantile));
    rep.quantile = params.quantile;
    rep.sample_points = params.n_sample;
    rep.eps_min = params.eps_min;
    rep.eps_max = params.eps_max;
    rep.n_scales = params.n_scales;
    rep.seed = params.seed;
    return rep;
}

ClassificationReport classify_mass(const DiscreteMeasure& mu, double alpha, double r, double s,
                                   double t_max, double ratio, unsigned jobs) {
    if (!(r > 0.0) || !(s > 0.0) || !(t_max > s))
        throw std::domain_error("classify_mass: need r > 0, 0 < s < t_max");
    std::vector<char> below(mu.size());
    parallel_for(mu.size(), jobs, [&](std::size_t i) {
        auto grid = profile_grid(mu, mu.position(i), s, t_max, ratio);
        double gamma_h = 0.0;
        for (const auto& [t, v] : grid) gamma_h = std::max(gamma_h, std::pow(t, alpha) * v);
        below[i] = gamma_h <= r ? 1 : 0;
    });
    double kc = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i)
        if (below[i]) kc += mu.weight(i);
    ClassificationReport rep;
    rep.alpha = alpha;
    rep.threshold_r = r;
    rep.s = s;
    rep.t_max = t_max;
    rep.kc_mass = kc;
    rep.ks_mass = mu.total_mass() - kc;
    return rep;
}

std::string report_to_json(const MeasureDimReport& rep) {
    nlohmann::json j;
    j["format"] = 1;
    j["dim_H_upper"] = rep.dim_h_upper;
    j["dim_P_lower"] = rep.dim_p_lower;
    j["quantile"] = rep.quantile;
    j["sample_points"] = rep.sample_points;
    j["window"] = {rep.eps_min, rep.eps_max};
    j["n_scales"] = rep.n_scales;
    j["seed"] = rep.seed;
    return j.dump();
}

std::string classification_to_json(const ClassificationReport& rep) {
    nlohmann::json j;
    j["format"] = 1;
    j["alpha"] = rep.alpha;
    j["threshold_r"] = rep.threshold_r;
    j["s"] = rep.s;
    j["t_max"] = rep.t_max;
    j["kc_mass"] = rep.kc_mass;
    j["ks_mass"] = rep.ks_mass;
    return j.dump();
}

std::string detail_to_csv(const std::vector<PointDetail>& detail) {
    std::string out = "x,weight,d_lower,d_upper\n";
    char buf[160];
    for (const auto& d : detail) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", d.x, d.weight, d.d_lower,
                      d.d_upper);
        out += buf;
    }
    return out;
}

}  // namespace spectrafrac
