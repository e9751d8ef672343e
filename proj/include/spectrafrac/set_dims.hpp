#pragma once

#include <string>
#include <utility>
#include <vector>

#include "spectrafrac/errors.hpp"

namespace spectrafrac {

// Finite representation of a subset of the line: either finitely many points
// or a finite union of disjoint closed intervals, with the smallest scale at
// which the representation is meaningful.
struct SetRep {
    enum class Kind { Points, Intervals };
    Kind kind = Kind::Points;
    std::vector<double> points;                         // sorted, deduped
    std::vector<std::pair<double, double>> intervals;   // sorted, disjoint
    double resolution = 0.0;

    static SetRep from_points(std::vector<double> pts, double resolution);
    static SetRep from_intervals(std::vector<std::pair<double, double>> ivs, double resolution);
    bool empty() const;
};

// Upper estimate of the delta-covering infimum: closed grid cells of length
// delta, best of 8 grid shifts, returns (occupied cells) * delta^alpha.
// One-sided by construction (a valid covering, never below the infimum
// before the shift minimum is taken).
double hausdorff_value(const SetRep& s, double alpha, double delta);

// Lower estimate of P^alpha_delta via greedy packing: closed balls of radius
// delta/2 centered in S, leftmost admissible center first, strictly disjoint.
// Returns (ball count) * delta^alpha.
double packing_value(const SetRep& s, double alpha, double delta);

// Least-squares slope of log N(eps) against log(1/eps) over the given
// scales, N(eps) = occupied cells of the eps-grid anchored at 0.
double box_dimension(const SetRep& s, const std::vector<double>& scales);

// Union of the 2^depth closed level-depth middle-thirds intervals; the
// depth-level prefractal, resolution 3^-depth.
SetRep cantor_set(int depth);

std::string set_to_json(const SetRep& s);
SetRep set_from_json(const std::string& text);

}  // namespace spectrafrac
