#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "spectrafrac/errors.hpp"

namespace spectrafrac {

// Finite union of disjoint closed intervals; stands in for the restriction
// sets F (closed) and O (open, bookkept as finite unions of intervals).
struct RestrictionSet {
    std::vector<std::pair<double, double>> intervals;  // sorted, disjoint

    RestrictionSet() = default;
    explicit RestrictionSet(std::vector<std::pair<double, double>> ivs);

    bool empty() const { return intervals.empty(); }
    bool contains(double x) const;
};

// Sorted atomic sub-probability measure on the line. Atoms closer than the
// dedup tolerance (1e-12) are merged at construction, keeping the leftmost
// position and summing weights. Total mass must stay in [0, 1].
class DiscreteMeasure {
public:
    static constexpr double kDedupTol = 1e-12;

    DiscreteMeasure() = default;

    // Sorts, merges near-duplicates, validates weights > 0 and mass <= 1.
    static DiscreteMeasure from_atoms(std::vector<std::pair<double, double>> atoms);

    std::size_t size() const { return pos_.size(); }
    bool empty() const { return pos_.empty(); }
    double position(std::size_t i) const { return pos_[i]; }
    double weight(std::size_t i) const { return w_[i]; }
    double total_mass() const { return total_mass_; }
    const std::vector<double>& positions() const { return pos_; }
    const std::vector<double>& weights() const { return w_; }

    // F(x) = mu((-inf, x]), and the strict variant mu((-inf, x)).
    double cdf(double x) const;
    double mass_below(double x) const;

    // Index of the first atom with position >= x (or > x).
    std::size_t lower_index(double x) const;
    std::size_t upper_index(double x) const;

    // Inverse-CDF lookup for u in [0, total_mass): the atom whose cumulative
    // weight interval contains u. Used for weight-proportional sampling.
    std::size_t index_for_mass(double u) const;

private:
    std::vector<double> pos_;
    std::vector<double> w_;
    std::vector<double> cum_;  // cum_[i] = sum of first i weights
    double total_mass_ = 0.0;
};

// mu(B(x, eps)) with the open ball B = {y : |x-y| < eps}. Summation is a
// single left-to-right pass over the covered atoms; see v_t in kernels.hpp,
// whose sandwich inequality against ball_mass then holds exactly in floating
// point (monotone rounding of nonnegative partial sums).
double ball_mass(const DiscreteMeasure& mu, double x, double eps);

// mu_{;A}: keeps exactly the atoms lying in the union of closed intervals.
DiscreteMeasure restrict_measure(const DiscreteMeasure& mu, const RestrictionSet& r);

// One-dimensional Levy metric on sub-distribution functions,
//   inf{ h > 0 : F_mu(x-h) - h <= F_nu(x) <= F_mu(x+h) + h  for all x },
// evaluated exactly over atom positions and bisected on h. Metrizes weak
// convergence on sub-probability measures; CDFs are not renormalized.
double levy_distance(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

// Same metric against a continuous nondecreasing CDF oracle (F(-inf)=0,
// F(+inf)=f_total); used to compare spectral measures with closed-form laws.
double levy_distance_to_cdf(const DiscreteMeasure& mu, const std::function<double(double)>& F,
                            double f_total = 1.0);

// Oracle generators -----------------------------------------------------

// 2^depth atoms of weight 2^-depth at the left endpoints of the depth-level
// middle-thirds intervals. Positions are m * 3^-depth with integer m, exact
// up to one rounding.
DiscreteMeasure cantor_measure(int depth);

// n equally spaced midpoint atoms of weight 1/n on [a, b].
DiscreteMeasure uniform_measure(double a, double b, int n_atoms);

// Serialization ----------------------------------------------------------
// CSV: header line `# total_mass=<m>`, then position,weight rows.
// JSON: {"format":1, "atoms":[[p,w],...]}.

std::string measure_to_csv(const DiscreteMeasure& mu);
DiscreteMeasure measure_from_csv(std::istream& in);
DiscreteMeasure measure_from_csv_file(const std::string& path);
std::string measure_to_json(const DiscreteMeasure& mu);
DiscreteMeasure measure_from_json(const std::string& text);

}  // namespace spectrafrac
