#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "spectrafrac/errors.hpp"

namespace spectrafrac {

// Element of the dyadic odometer group, truncated to depth L. Digits are
// stored least significant first: digits[0] is the coordinate that flips on
// every translation step.
struct OdometerState {
    std::vector<std::uint8_t> digits;

    static OdometerState zeros(int depth);
    int depth() const { return static_cast<int>(digits.size()); }
    bool operator==(const OdometerState&) const = default;
};

struct OdometerStep {
    OdometerState state;
    bool wrapped;  // carry ran off the end: the state wrapped to all-zeros
};

// Add-one-with-carry (the minimal translation tau) and its inverse.
OdometerStep odometer_translate(const OdometerState& k);
OdometerStep odometer_translate_inverse(const OdometerState& k);

// tau^n via binary addition of n modulo 2^depth.
OdometerState odometer_add(const OdometerState& k, long long n);

// Cylinder function of the first `depth` digits: table indexed by
// digits[0] + 2*digits[1] + ... + 2^(depth-1)*digits[depth-1].
struct CylinderTerm {
    int depth;
    std::vector<double> table;  // size 2^depth
};

// Finite sum of cylinder terms; dense in C(Omega, R) and the computational
// stand-in for a continuous sampling function.
struct SamplingFunction {
    std::vector<CylinderTerm> terms;

    int max_depth() const;
    double eval(const OdometerState& k) const;
    double eval_prefix(std::uint32_t prefix) const;  // prefix bits, LSB = first digit

    // Terms of depth <= k only; dropping the tail of the series.
    SamplingFunction truncated(int k) const;
};

// Exact sup norm: max |g| over the 2^K cylinders, K = max term depth.
// K > 20 is refused (resource cap).
double sampling_sup_norm(const SamplingFunction& g);

struct ExplicitPotential {
    std::vector<double> values;
    long long first_index = 0;  // site index of values[0]; sites outside are 0
};

struct PeriodicPotential {
    std::vector<double> cell;  // V_n = cell[n mod size]
};

struct RandomPotential {
    std::uint64_t seed = 0;
    double bound = 1.0;  // i.i.d. uniform on [-bound, bound]
};

struct LimitPeriodicPotential {
    SamplingFunction g;
    OdometerState kappa;
};

// Declarative potential with its declared sup bound r (the X^r constraint
// |V_n| <= r, checked whenever values are generated).
struct PotentialSpec {
    std::variant<ExplicitPotential, PeriodicPotential, RandomPotential, LimitPeriodicPotential>
        variant;
    double bound = 0.0;

    static PotentialSpec explicit_values(std::vector<double> values, long long first_index = 0,
                                         double bound = 0.0);
    static PotentialSpec periodic(std::vector<double> cell, double bound = 0.0);
    static PotentialSpec random(std::uint64_t seed, double bound);
    static PotentialSpec limit_periodic(SamplingFunction g, OdometerState kappa,
                                        double bound = 0.0);
};

// V_n over the inclusive window [lo, hi]. Random uses one splitmix64 stream
// for n >= 0 and a second (seed xor constant) for n < 0; LimitPeriodic
// iterates the odometer from tau^lo(kappa). Throws invariant_error if any
// value exceeds the declared bound.
std::vector<double> sample_potential(const PotentialSpec& spec, long long lo, long long hi);

// Symmetric tridiagonal window of the operator: unit off-diagonals, diagonal
// V_n over sites [window_lo, window_lo + N - 1], site 0 at center_index.
struct JacobiTruncation {
    std::vector<double> diagonal;
    long long window_lo = 0;
    int center_index = 0;
    double bound = 0.0;

    int size() const { return static_cast<int>(diagonal.size()); }
};

JacobiTruncation build_truncation(const PotentialSpec& spec, int n);

// ||g - g'||_inf exactly over joint cylinders when both specs are
// limit-periodic with the same kappa; otherwise sup_n |V_n - V'_n| over the
// window (an upper approximation of any whole-line metric only).
double potential_distance(const PotentialSpec& a, const PotentialSpec& b, long long lo,
                          long long hi);

// Second operator-space metric option, computed on truncations:
// D(T, T') = sum_l min(2^-l, ||(T - T')xi_l||) with xi_l enumerating
// delta_0, delta_1, delta_-1, ... from the window center.
double truncation_metric(const JacobiTruncation& a, const JacobiTruncation& b);

std::string spec_to_json(const PotentialSpec& spec);
PotentialSpec spec_from_json(const std::string& text);
std::string truncation_to_csv(const JacobiTruncation& m);

}  // namespace spectrafrac
