#pragma once

#include <string>
#include <vector>

#include "spectrafrac/measures.hpp"

namespace spectrafrac {

// Default geometric grid step for t; t_max should stay below one fifth of the
// reciprocal measure resolution, or atomicity dominates the scaled values.
extern const double kDefaultProfileRatio;  // 2^(1/4)

// Tent kernel f_{t,x}(y): 1 on |x-y| <= 1/t, 0 beyond 2/t, linear ramp
// 2 - t|x-y| in between. Clamped to [0,1] so the ramp never exceeds the
// plateau under rounding.
double tent_eval(double t, double x, double y);

// V_t(mu, x) = integral of f_{t,x} d(mu). Sums atom contributions left to
// right over (x-2/t, x+2/t); together with ball_mass this makes the sandwich
//   ball_mass(mu,x,1/t) <= v_t <= ball_mass(mu,x,2/t)
// hold exactly in floating point, not just up to rounding.
double v_t(const DiscreteMeasure& mu, double t, double x);

struct ProfileRow {
    double t;
    double v;       // V_t(mu, x)
    double scaled;  // t^alpha * v
};

// Finite-horizon surrogate of the gamma functionals: rows on the geometric
// grid t_j = s * ratio^j (built by repeated multiplication, so profiles
// started at a grid point of a coarser profile share its t values exactly),
// gamma_h = sup and gamma_p = inf of the scaled column, each with the
// achieving t recorded.
struct ScalingProfile {
    double x = 0.0;
    double alpha = 0.0;
    double s_min = 0.0;
    double t_max = 0.0;
    double ratio = 0.0;
    std::vector<ProfileRow> rows;
    double gamma_h = 0.0;
    double gamma_p = 0.0;
    double gamma_h_at = 0.0;  // t achieving gamma_h
    double gamma_p_at = 0.0;
};

// Grid values (t, V_t) shared by scaling_profile and the alpha sweep; the
// rows do not depend on alpha. Throws resource_error beyond 1e6 grid points.
std::vector<std::pair<double, double>> profile_grid(const DiscreteMeasure& mu, double x, double s,
                                                    double t_max, double ratio);

ScalingProfile scaling_profile(const DiscreteMeasure& mu, double alpha, double x, double s,
                               double t_max, double ratio = kDefaultProfileRatio);

// CSV: `# x=... alpha=... s=... t_max=...` header, then t,v,scaled rows.
std::string profile_to_csv(const ScalingProfile& p);

}  // namespace spectrafrac
