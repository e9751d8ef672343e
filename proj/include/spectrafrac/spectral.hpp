#pragma once

#include <string>
#include <utility>
#include <vector>

#include "spectrafrac/measures.hpp"
#include "spectrafrac/operators.hpp"

namespace spectrafrac {

// Full orthonormal eigendecomposition of a symmetric tridiagonal truncation.
// Eigenvalues ascending; vectors column-major (vector k at data()[k*n .. ]).
struct TridiagEigen {
    int n = 0;
    std::vector<double> values;
    std::vector<double> vectors;
    double residual_max = 0.0;

    const double* vec(int k) const { return vectors.data() + static_cast<std::size_t>(k) * n; }
};

// Backed by LAPACK dstevd. Checks the Gershgorin bound |lambda| <= 2 + r and
// the per-pair residual ||Tv - lambda v|| <= 1e-10 * ||T||; failures raise
// numeric_error with the offending index.
TridiagEigen tridiag_eigen(const JacobiTruncation& m);

// Eigenvalues only (ascending); cheaper when no vectors are needed.
std::vector<double> tridiag_eigenvalues(const JacobiTruncation& m);

enum class PsiKind { Delta0, Delta1, Explicit };

struct SpectralRequest {
    PotentialSpec spec;
    int n = 0;
    PsiKind psi_kind = PsiKind::Delta0;
    std::vector<double> psi;  // window coordinates, used when psi_kind == Explicit
};

struct SpectralResult {
    DiscreteMeasure measure;  // atoms (lambda_k, |<psi, v_k>|^2)
    int n = 0;
    std::string method;
    double residual_max = 0.0;
    double dropped_mass = 0.0;  // weights below 1e-16 removed
};

SpectralResult spectral_measure(const SpectralRequest& req);

// Same computation starting from an already-built truncation (used by the
// experiment recipes, whose interpolated potentials have no spec of their own).
SpectralResult spectral_measure_from_truncation(const JacobiTruncation& m, PsiKind psi_kind,
                                                const std::vector<double>& psi_explicit = {});

// Smoothed spectral density Im <delta_0, (T - x - i eta)^-1 delta_0> / pi at
// the window center, via the two-sided continued-fraction recursion; O(N)
// per evaluation point.
double green_density(const PotentialSpec& spec, int n, double x, double eta);

// (min eigenvalue, max eigenvalue) of the truncation.
std::pair<double, double> spectrum_support(const PotentialSpec& spec, int n);

// Levy distances of the measures at each size to the finest one (last
// entry is identically zero and kept for the record).
std::vector<std::pair<int, double>> resolvent_convergence_scan(const PotentialSpec& spec,
                                                               const std::vector<int>& sizes,
                                                               PsiKind psi = PsiKind::Delta0);

// Free-operator oracle: the arcsine law, spectral measure of delta_0 for the
// zero-potential whole-line operator. Density 1/(pi sqrt(4-x^2)) on (-2,2).
double arcsine_cdf(double x);
// Quantile atomization of the arcsine law into n equal-weight atoms.
DiscreteMeasure arcsine_measure(int n_atoms);

// JSON sidecar for a stored result: n, psi tag, spec hash, residual_max,
// dropped mass.
std::string spectral_sidecar_json(const SpectralResult& res, const PotentialSpec& spec,
                                  const std::string& psi_tag);

}  // namespace spectrafrac
