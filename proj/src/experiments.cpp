#include "spectrafrac/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "spectrafrac/parallel.hpp"
#include "spectrafrac/rng.hpp"

namespace spectrafrac {

const char* kToolVersion = "spectrafrac 0.1.0";

namespace {

double median_spacing(const DiscreteMeasure& mu) {
    const auto& pos = mu.positions();
    if (pos.size() < 2) return 0.0;
    std::vector<double> gaps(pos.size() - 1);
    for (std::size_t i = 0; i + 1 < pos.size(); ++i) gaps[i] = pos[i + 1] - pos[i];
    std::nth_element(gaps.begin(), gaps.begin() + static_cast<std::ptrdiff_t>(gaps.size() / 2), gaps.end());
    return gaps[gaps.size() / 2];
}

// Applies the restriction and the eps floor, then runs measure_dims.
MeasureDimReport dims_of_measure(const DiscreteMeasure& full, const ExperimentConfig& cfg,
                                 std::uint64_t seed, double* eps_min_used, double* eps_max_used) {
    DiscreteMeasure mu = cfg.restrict_to.empty() ? full : restrict_measure(full, cfg.restrict_to);
    if (mu.empty()) throw std::domain_error("experiment: restricted measure is empty");
    double floor = 10.0 * median_spacing(full);
    MeasureDimParams p;
    p.eps_min = std::max(cfg.dims.eps_min, floor);
    if (p.eps_min <= 0.0) p.eps_min = 1e-6;
    p.eps_max = cfg.dims.eps_max;
    if (p.eps_max <= p.eps_min) p.eps_max = p.eps_min * 16.0;
    p.n_scales = cfg.dims.n_scales;
    p.quantile = cfg.dims.quantile;
    p.n_sample = cfg.dims.n_sample;
    p.seed = seed;
    p.jobs = cfg.jobs;
    *eps_min_used = p.eps_min;
    *eps_max_used = p.eps_max;
    return measure_dims(mu, p);
}

}  // namespace

std::vector<WonderlandRow> wonderland_scan(const ExperimentConfig& cfg) {
    if (cfg.grid.empty()) throw std::domain_error("wonderland_scan: empty lambda grid");
    if (!std::is_sorted(cfg.grid.begin(), cfg.grid.end()))
        throw std::domain_error("wonderland_scan: grid must be sorted");
    for (double l : cfg.grid)
        if (l < 0.0 || l > 1.0) throw std::domain_error("wonderland_scan: lambda outside [0,1]");
    if (cfg.endpoint_ac.bound != cfg.endpoint_pp.bound)
        throw std::domain_error("wonderland_scan: endpoints must share the bound r");

    JacobiTruncation base = build_truncation(cfg.endpoint_ac, cfg.n);
    JacobiTruncation target = build_truncation(cfg.endpoint_pp, cfg.n);

    std::vector<WonderlandRow> rows(cfg.grid.size());
    for (std::size_t gi = 0; gi < cfg.grid.size(); ++gi) {
        double lambda = cfg.grid[gi];
        JacobiTruncation m = base;
        for (std::size_t i = 0; i < m.diagonal.size(); ++i)
            m.diagonal[i] = (1.0 - lambda) * base.diagonal[i] + lambda * target.diagonal[i];
        SpectralResult sr = spectral_measure_from_truncation(m, cfg.psi);

        WonderlandRow row;
        row.lambda = lambda;
        row.support_width = sr.measure.positions().back() - sr.measure.positions().front();
        MeasureDimReport rep = dims_of_measure(sr.measure, cfg, derive_stream(cfg.dims.seed, gi),
                                               &row.eps_min, &row.eps_max);
        row.dim_h_upper = rep.dim_h_upper;
        row.dim_p_lower = rep.dim_p_lower;
        rows[gi] = row;
    }
    return rows;
}

std::vector<LimitPeriodicRow> limit_periodic_scan(const ExperimentConfig& cfg) {
    if (cfg.depths.empty()) throw std::domain_error("limit_periodic_scan: empty depth list");
    int max_depth = cfg.series.max_depth();
    for (int k : cfg.depths)
        if (k > max_depth)
            throw std::domain_error("limit_periodic_scan: requested depth beyond the series");
    const double shared_bound = std::max(sampling_sup_norm(cfg.series), 1e-300);

    std::vector<LimitPeriodicRow> rows(cfg.depths.size());
    for (std::size_t di = 0; di < cfg.depths.size(); ++di) {
        int k = cfg.depths[di];
        SamplingFunction gk = cfg.series.truncated(k);
        PotentialSpec spec = PotentialSpec::limit_periodic(gk, OdometerState::zeros(cfg.kappa_depth),
                                                           shared_bound);
        SpectralRequest req{spec, cfg.n, cfg.psi, {}};
        SpectralResult sr = spectral_measure(req);

        LimitPeriodicRow row;
        row.depth = k;
        row.period = 1LL << k;
        MeasureDimReport rep = dims_of_measure(sr.measure, cfg, derive_stream(cfg.dims.seed, di),
                                               &row.eps_min, &row.eps_max);
        row.dim_h_upper = rep.dim_h_upper;
        row.dim_p_lower = rep.dim_p_lower;
        rows[di] = row;
    }
    return rows;
}

std::vector<AlphaRow> alpha_sweep(const DiscreteMeasure& mu, const std::vector<double>& alphas,
                                  double r, double s, double t_max, double ratio, unsigned jobs) {
    if (alphas.empty()) throw std::domain_error("alpha_sweep: empty alpha grid");
    if (!(r > 0.0) || !(s > 0.0) || !(t_max > s))
        throw std::domain_error("alpha_sweep: need r > 0, 0 < s < t_max");

    // (t, V_t) rows per atom are alpha-independent; compute them once
    std::vector<std::vector<std::pair<double, double>>> grids(mu.size());
    parallel_for(mu.size(), jobs, [&](std::size_t i) {
        grids[i] = profile_grid(mu, mu.position(i), s, t_max, ratio);
    });

    std::vector<AlphaRow> rows;
    rows.reserve(alphas.size());
    for (double alpha : alphas) {
        std::vector<double> tpow(grids.empty() || grids[0].empty() ? 0 : grids[0].size());
        for (std::size_t j = 0; j < tpow.size(); ++j) tpow[j] = std::pow(grids[0][j].first, alpha);
        double kc = 0.0;
        for (std::size_t i = 0; i < mu.size(); ++i) {
            double gamma_h = 0.0;
            for (std::size_t j = 0; j < grids[i].size(); ++j)
                gamma_h = std::max(gamma_h, tpow[j] * grids[i][j].second);
            if (gamma_h <= r) kc += mu.weight(i);
        }
        rows.push_back({alpha, kc, mu.total_mass() - kc});
    }
    return rows;
}

std::vector<double> decomposition_alpha_grid() {
    std::vector<double> alphas;
    for (int k = 2; k <= 10; ++k) {
        alphas.push_back(1.0 / k);
        alphas.push_back(1.0 - 1.0 / k);
    }
    std::sort(alphas.begin(), alphas.end());
    alphas.erase(std::unique(alphas.begin(), alphas.end()), alphas.end());
    return alphas;
}

std::vector<double> gamma_h_per_atom(const DiscreteMeasure& mu, double alpha, double s,
                                     double t_max, double ratio, unsigned jobs) {
    std::vector<double> out(mu.size());
    parallel_for(mu.size(), jobs, [&](std::size_t i) {
        auto grid = profile_grid(mu, mu.position(i), s, t_max, ratio);
        double gamma_h = 0.0;
        for (const auto& [t, v] : grid) gamma_h = std::max(gamma_h, std::pow(t, alpha) * v);
        out[i] = gamma_h;
    });
    return out;
}

double weighted_quantile(std::vector<std::pair<double, double>> value_weight, double q) {
    if (value_weight.empty()) throw std::domain_error("weighted_quantile: empty input");
    std::sort(value_weight.begin(), value_weight.end());
    double total = 0.0;
    for (const auto& [v, w] : value_weight) total += w;
    double target = q * total, acc = 0.0;
    for (const auto& [v, w] : value_weight) {
        acc += w;
        if (acc >= target) return v;
    }
    return value_weight.back().first;
}

std::string wonderland_to_csv(const std::vector<WonderlandRow>& rows, const ExperimentConfig& cfg) {
    std::string out =
        "lambda,dim_H_upper,dim_P_lower,support_width,n,psi,quantile,n_sample,n_scales,eps_min,"
        "eps_max,seed\n";
    char buf[320];
    const char* psi = cfg.psi == PsiKind::Delta0 ? "delta0" : "delta1";
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%d,%s,%.17g,%d,%d,%.17g,%.17g,%llu\n",
                      r.lambda, r.dim_h_upper, r.dim_p_lower, r.support_width, cfg.n, psi,
                      cfg.dims.quantile, cfg.dims.n_sample, cfg.dims.n_scales, r.eps_min, r.eps_max,
                      static_cast<unsigned long long>(cfg.dims.seed));
        out += buf;
    }
    return out;
}

std::string limit_periodic_to_csv(const std::vector<LimitPeriodicRow>& rows,
                                  const ExperimentConfig& cfg) {
    std::string out =
        "depth,period,dim_H_upper,dim_P_lower,n,psi,quantile,n_sample,n_scales,eps_min,eps_max,"
        "seed\n";
    char buf[320];
    const char* psi = cfg.psi == PsiKind::Delta0 ? "delta0" : "delta1";
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%d,%lld,%.17g,%.17g,%d,%s,%.17g,%d,%d,%.17g,%.17g,%llu\n",
                      r.depth, r.period, r.dim_h_upper, r.dim_p_lower, cfg.n, psi,
                      cfg.dims.quantile, cfg.dims.n_sample, cfg.dims.n_scales, r.eps_min, r.eps_max,
                      static_cast<unsigned long long>(cfg.dims.seed));
        out += buf;
    }
    return out;
}

std::string alpha_sweep_to_csv(const std::vector<AlphaRow>& rows, double r, double s,
                               double t_max) {
    std::string out = "alpha,kc_mass,ks_mass,r,s,t_max\n";
    char buf[240];
    for (const auto& row : rows) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", row.alpha,
                      row.kc_mass, row.ks_mass, r, s, t_max);
        out += buf;
    }
    return out;
}

namespace {

nlohmann::json dims_to_json(const DimEstimatorConfig& d) {
    return {{"eps_min", d.eps_min}, {"eps_max", d.eps_max},   {"n_scales", d.n_scales},
            {"quantile", d.quantile}, {"n_sample", d.n_sample}, {"seed", d.seed}};
}

DimEstimatorConfig dims_from_json(const nlohmann::json& j) {
    DimEstimatorConfig d;
    d.eps_min = j.value("eps_min", 0.0);
    d.eps_max = j.value("eps_max", 0.45);
    d.n_scales = j.value("n_scales", 6);
    d.quantile = j.value("quantile", 0.9);
    d.n_sample = j.value("n_sample", 400);
    d.seed = j.value("seed", std::uint64_t{1});
    return d;
}

nlohmann::json restrict_to_json(const RestrictionSet& r) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [a, b] : r.intervals) arr.push_back({a, b});
    return arr;
}

}  // namespace

std::string experiment_config_to_json(const ExperimentConfig& cfg) {
    nlohmann::json j;
    j["format"] = 1;
    j["kind"] = cfg.kind;
    j["n"] = cfg.n;
    j["psi"] = cfg.psi == PsiKind::Delta0 ? "delta0" : "delta1";
    j["restrict"] = restrict_to_json(cfg.restrict_to);
    j["dims"] = dims_to_json(cfg.dims);
    if (cfg.kind == "wonderland") {
        j["endpoint_ac"] = nlohmann::json::parse(spec_to_json(cfg.endpoint_ac));
        j["endpoint_pp"] = nlohmann::json::parse(spec_to_json(cfg.endpoint_pp));
        j["grid"] = cfg.grid;
    } else {
        nlohmann::json terms = nlohmann::json::array();
        for (const auto& t : cfg.series.terms) terms.push_back({{"depth", t.depth}, {"table", t.table}});
        j["terms"] = terms;
        j["kappa_depth"] = cfg.kappa_depth;
        j["depths"] = cfg.depths;
    }
    return j.dump(2);
}

ExperimentConfig experiment_config_from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    ExperimentConfig cfg;
    cfg.kind = j.at("kind").get<std::string>();
    cfg.n = j.value("n", 1001);
    std::string psi = j.value("psi", "delta0");
    if (psi == "delta0")
        cfg.psi = PsiKind::Delta0;
    else if (psi == "delta1")
        cfg.psi = PsiKind::Delta1;
    else
        throw std::invalid_argument("experiment config: psi must be delta0 or delta1");
    if (j.contains("restrict")) {
        std::vector<std::pair<double, double>> ivs;
        for (const auto& iv : j["restrict"]) ivs.emplace_back(iv.at(0).get<double>(), iv.at(1).get<double>());
        cfg.restrict_to = RestrictionSet(std::move(ivs));
    }
    if (j.contains("dims")) cfg.dims = dims_from_json(j["dims"]);
    if (cfg.kind == "wonderland") {
        cfg.endpoint_ac = spec_from_json(j.at("endpoint_ac").dump());
        cfg.endpoint_pp = spec_from_json(j.at("endpoint_pp").dump());
        cfg.grid = j.at("grid").get<std::vector<double>>();
    } else if (cfg.kind == "limit_periodic") {
        for (const auto& t : j.at("terms")) {
            CylinderTerm term;
            term.depth = t.at("depth").get<int>();
            term.table = t.at("table").get<std::vector<double>>();
            cfg.series.terms.push_back(std::move(term));
        }
        cfg.kappa_depth = j.value("kappa_depth", 16);
        cfg.depths = j.at("depths").get<std::vector<int>>();
    } else {
        throw std::invalid_argument("experiment config: unknown kind " + cfg.kind);
    }
    return cfg;
}

std::string run_manifest_json(const ExperimentConfig& cfg, const std::vector<std::string>& outputs,
                              double seconds) {
    nlohmann::json j;
    j["format"] = 1;
    j["tool"] = kToolVersion;
    j["config"] = nlohmann::json::parse(experiment_config_to_json(cfg));
    j["outputs"] = outputs;
    j["timings"] = {{"total_seconds", seconds}};
    return j.dump(2);
}

}  // namespace spectrafrac
