#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spectrafrac/local_dims.hpp"
#include "spectrafrac/spectral.hpp"

namespace spectrafrac {

// Dimension-estimator knobs shared by the experiment recipes. eps_min = 0
// asks for the automatic floor at 10x the median eigenvalue spacing of the
// computed measure (truncations look atomic below that scale).
struct DimEstimatorConfig {
    double eps_min = 0.0;
    double eps_max = 0.45;
    int n_scales = 6;
    double quantile = 0.9;
    int n_sample = 400;
    std::uint64_t seed = 1;
};

struct ExperimentConfig {
    std::string kind;  // "wonderland" or "limit_periodic"
    // wonderland: interpolation endpoints (must share the declared bound r)
    PotentialSpec endpoint_ac = PotentialSpec::periodic({0.0});
    PotentialSpec endpoint_pp = PotentialSpec::periodic({0.0});
    std::vector<double> grid;  // lambda values in [0,1], sorted
    // limit-periodic: full series and the truncation depths to scan
    SamplingFunction series;
    int kappa_depth = 16;
    std::vector<int> depths;

    int n = 1001;
    PsiKind psi = PsiKind::Delta0;
    RestrictionSet restrict_to;  // empty = whole line
    DimEstimatorConfig dims;
    unsigned jobs = 0;
};

struct WonderlandRow {
    double lambda = 0.0;
    double dim_h_upper = 0.0;
    double dim_p_lower = 0.0;
    double support_width = 0.0;
    double eps_min = 0.0;  // window actually used (after flooring)
    double eps_max = 0.0;
};

// Dimension profile along V(lambda) = (1-lambda) V_ac + lambda V_pp. The
// pure-point pole is a strong-coupling random potential standing in for the
// dense pure-point families; outputs are finite-scale profiles, not claims
// about the infinite-volume operators.
std::vector<WonderlandRow> wonderland_scan(const ExperimentConfig& cfg);

struct LimitPeriodicRow {
    int depth = 0;
    long long period = 0;
    double dim_h_upper = 0.0;
    double dim_p_lower = 0.0;
    double eps_min = 0.0;
    double eps_max = 0.0;
};

// Dimension profile of the series truncated after its depth-k terms (a
// periodic potential of period dividing 2^k) for each k in cfg.depths.
std::vector<LimitPeriodicRow> limit_periodic_scan(const ExperimentConfig& cfg);

struct AlphaRow {
    double alpha = 0.0;
    double kc_mass = 0.0;
    double ks_mass = 0.0;
};

// classify_mass across an alpha grid; the (t, V_t) rows are computed once
// per atom and shared across alphas.
std::vector<AlphaRow> alpha_sweep(const DiscreteMeasure& mu, const std::vector<double>& alphas,
                                  double r, double s, double t_max,
                                  double ratio = kDefaultProfileRatio, unsigned jobs = 0);

// Canonical grid for decomposition sweeps: {1/k} and {1 - 1/k}, k = 2..10,
// sorted and deduplicated.
std::vector<double> decomposition_alpha_grid();

// Per-atom gamma_h values at a fixed alpha (same grid); used to choose the
// threshold r from the observed band of scaled values.
std::vector<double> gamma_h_per_atom(const DiscreteMeasure& mu, double alpha, double s,
                                     double t_max, double ratio = kDefaultProfileRatio,
                                     unsigned jobs = 0);

// mu-weighted quantile of per-atom values (values paired with atom weights).
double weighted_quantile(std::vector<std::pair<double, double>> value_weight, double q);

// CSV emitters; every row echoes the parameter set that produced it.
std::string wonderland_to_csv(const std::vector<WonderlandRow>& rows, const ExperimentConfig& cfg);
std::string limit_periodic_to_csv(const std::vector<LimitPeriodicRow>& rows,
                                  const ExperimentConfig& cfg);
std::string alpha_sweep_to_csv(const std::vector<AlphaRow>& rows, double r, double s, double t_max);

std::string experiment_config_to_json(const ExperimentConfig& cfg);
ExperimentConfig experiment_config_from_json(const std::string& text);

// Run manifest: config echo, tool version, output names, wall times.
std::string run_manifest_json(const ExperimentConfig& cfg, const std::vector<std::string>& outputs,
                              double seconds);

extern const char* kToolVersion;

}  // namespace spectrafrac
