#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spectrafrac/kernels.hpp"
#include "spectrafrac/measures.hpp"

namespace spectrafrac {

// Windowed log-log slopes of ball masses at a point. d_lower estimates the
// liminf of log mu(B(x,eps)) / log eps (the Hausdorff-side exponent),
// d_upper the limsup (packing side). Zero masses inside the window are
// reported through the +inf sentinel on d_upper.
struct LocalDimEstimate {
    double x = 0.0;
    double d_lower = 0.0;
    double d_upper = 0.0;
    double eps_min = 0.0;
    double eps_max = 0.0;
    int n_scales = 0;
};

// Ball masses on a geometric eps grid, slopes over two-grid-step windows,
// d_lower = min slope, d_upper = max slope. Requires positive mass at
// eps_max ("outside support" otherwise) and n_scales >= 4.
LocalDimEstimate local_dim_bounds(const DiscreteMeasure& mu, double x, double eps_min,
                                  double eps_max, int n_scales);

struct MeasureDimParams {
    int n_sample = 400;
    double quantile = 0.95;  // in (0.5, 1)
    double eps_min = 0.0;
    double eps_max = 0.0;
    int n_scales = 11;
    std::uint64_t seed = 1;
    unsigned jobs = 0;  // 0 = all cores
};

struct MeasureDimReport {
    double dim_h_upper = 0.0;  // estimate of dim_H^+(mu), clamped to [0,1]
    double dim_p_lower = 0.0;  // estimate of dim_P^-(mu), clamped to [0,1]
    double quantile = 0.0;
    int sample_points = 0;
    double eps_min = 0.0;
    double eps_max = 0.0;
    int n_scales = 0;
    std::uint64_t seed = 0;
};

struct PointDetail {
    double x;
    double weight;
    double d_lower;
    double d_upper;
};

// Importance-samples atom positions proportionally to weight (splitmix64
// stream per index, so the report is reproducible regardless of the job
// count), then takes the q-quantile of the d_lower values as dim_H^+ and the
// (1-q)-quantile of the d_upper values as dim_P^-.
MeasureDimReport measure_dims(const DiscreteMeasure& mu, const MeasureDimParams& params,
                              std::vector<PointDetail>* detail = nullptr);

// Finite-horizon realization of mu(Z_mu(r,s)): kc_mass collects the atoms
// whose gamma_h over the grid [s, t_max] stays <= r, ks_mass the rest.
struct ClassificationReport {
    double alpha = 0.0;
    double threshold_r = 0.0;
    double s = 0.0;
    double t_max = 0.0;
    double kc_mass = 0.0;
    double ks_mass = 0.0;
};

ClassificationReport classify_mass(const DiscreteMeasure& mu, double alpha, double r, double s,
                                   double t_max, double ratio = kDefaultProfileRatio,
                                   unsigned jobs = 0);

std::string report_to_json(const MeasureDimReport& rep);
std::string classification_to_json(const ClassificationReport& rep);
std::string detail_to_csv(const std::vector<PointDetail>& detail);

}  // namespace spectrafrac
