#include "spectrafrac/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include <json.hpp>
#include <lapacke.h>

namespace spectrafrac {

TridiagEigen tridiag_eigen(const JacobiTruncation& m) {
    const int n = m.size();
    if (n < 2) throw std::domain_error("tridiag_eigen: N must be >= 2");
    TridiagEigen out;
    out.n = n;
    out.values = m.diagonal;
    std::vector<double> off(static_cast<std::size_t>(n - 1), 1.0);
    out.vectors.assign(static_cast<std::size_t>(n) * n, 0.0);
    int info = LAPACKE_dstevd(LAPACK_COL_MAJOR, 'V', n, out.values.data(), off.data(),
                              out.vectors.data(), n);
    if (info != 0) throw numeric_error("tridiag_eigen: dstevd failed to converge", info);

    const double edge = 2.0 + m.bound;
    const double norm_bound = edge;  // Gershgorin bound on ||T||
    double rmax = 0.0;
    for (int k = 0; k < n; ++k) {
        double lam = out.values[static_cast<std::size_t>(k)];
        if (std::abs(lam) > edge + 1e-8 * (1.0 + edge))
            throw numeric_error("tridiag_eigen: eigenvalue outside the Gershgorin interval", k);
        const double* v = out.vec(k);
        double rss = 0.0;
        for (int i = 0; i < n; ++i) {
            double tv = m.diagonal[static_cast<std::size_t>(i)] * v[i];
            if (i > 0) tv += v[i - 1];
            if (i + 1 < n) tv += v[i + 1];
            double r = tv - lam * v[i];
            rss += r * r;
        }
        double res = std::sqrt(rss);
        rmax = std::max(rmax, res);
        if (res > 1e-10 * norm_bound)
            throw numeric_error("tridiag_eigen: residual above 1e-10 * ||T||", k);
    }
    out.residual_max = rmax;
    return out;
}

std::vector<double> tridiag_eigenvalues(const JacobiTruncation& m) {
    const int n = m.size();
    if (n < 2) throw std::domain_error("tridiag_eigenvalues: N must be >= 2");
    std::vector<double> d = m.diagonal;
    std::vector<double> off(static_cast<std::size_t>(n - 1), 1.0);
    int info = LAPACKE_dstevd(LAPACK_COL_MAJOR, 'N', n, d.data(), off.data(), nullptr, n);
    if (info != 0) throw numeric_error("tridiag_eigenvalues: dstevd failed to converge", info);
    return d;
}

namespace {

std::vector<double> resolve_psi(const SpectralRequest& req, int n, int center) {
    std::vector<double> psi(static_cast<std::size_t>(n), 0.0);
    switch (req.psi_kind) {
        case PsiKind::Delta0:
            psi[static_cast<std::size_t>(center)] = 1.0;
            break;
        case PsiKind::Delta1:
            if (center + 1 >= n) throw std::domain_error("spectral_measure: delta_1 outside window");
            psi[static_cast<std::size_t>(center + 1)] = 1.0;
            break;
        case PsiKind::Explicit: {
            if (req.psi.size() != static_cast<std::size_t>(n))
                throw std::domain_error("spectral_measure: explicit psi must have length N");
            double nrm = std::sqrt(
                std::inner_product(req.psi.begin(), req.psi.end(), req.psi.begin(), 0.0));
            if (!(nrm > 0.0)) throw std::domain_error("spectral_measure: psi must be nonzero");
            for (int i = 0; i < n; ++i) psi[static_cast<std::size_t>(i)] = req.psi[static_cast<std::size_t>(i)] / nrm;
            break;
        }
    }
    return psi;
}

}  // namespace

SpectralResult spectral_measure_from_truncation(const JacobiTruncation& m, PsiKind psi_kind,
                                                const std::vector<double>& psi_explicit) {
    TridiagEigen eig = tridiag_eigen(m);
    SpectralRequest stub;
    stub.psi_kind = psi_kind;
    stub.psi = psi_explicit;
    std::vector<double> psi = resolve_psi(stub, eig.n, m.center_index);

    std::vector<std::pair<double, double>> atoms;
    atoms.reserve(static_cast<std::size_t>(eig.n));
    double dropped = 0.0;
    for (int k = 0; k < eig.n; ++k) {
        const double* v = eig.vec(k);
        double a = 0.0;
        for (int i = 0; i < eig.n; ++i) a += psi[static_cast<std::size_t>(i)] * v[i];
        double w = a * a;
        if (w < 1e-16) {
            dropped += w;  // keeps logs finite downstream; the loss is recorded
            continue;
        }
        atoms.emplace_back(eig.values[static_cast<std::size_t>(k)], w);
    }
    SpectralResult res;
    res.measure = DiscreteMeasure::from_atoms(std::move(atoms));
    res.n = m.size();
    res.method = "dstevd";
    res.residual_max = eig.residual_max;
    res.dropped_mass = dropped;
    if (std::abs(res.measure.total_mass() + dropped - 1.0) > 1e-9)
        throw numeric_error("spectral_measure: total mass deviates from 1");
    return res;
}

SpectralResult spectral_measure(const SpectralRequest& req) {
    JacobiTruncation m = build_truncation(req.spec, req.n);
    return spectral_measure_from_truncation(m, req.psi_kind, req.psi);
}

double green_density(const PotentialSpec& spec, int n, double x, double eta) {
    if (!(eta > 0.0)) throw std::domain_error("green_density: eta must be > 0");
    if (eta < 1e-12) throw std::domain_error("green_density: eta below 1e-12");
    JacobiTruncation m = build_truncation(spec, n);
    const int c = m.center_index;
    const std::complex<double> z(x, eta);
    // f(i) = corner Green's function of the block ending at i; the recursion
    // keeps Im f > 0 so denominators stay at distance >= eta from zero
    std::complex<double> left(0.0, 0.0);
    for (int i = 0; i < c; ++i) left = 1.0 / (m.diagonal[static_cast<std::size_t>(i)] - z - left);
    std::complex<double> right(0.0, 0.0);
    for (int i = m.size() - 1; i > c; --i)
        right = 1.0 / (m.diagonal[static_cast<std::size_t>(i)] - z - right);
    std::complex<double> g = 1.0 / (m.diagonal[static_cast<std::size_t>(c)] - z - left - right);
    return g.imag() / M_PI;
}

std::pair<double, double> spectrum_support(const PotentialSpec& spec, int n) {
    auto d = tridiag_eigenvalues(build_truncation(spec, n));
    return {d.front(), d.back()};
}

std::vector<std::pair<int, double>> resolvent_convergence_scan(const PotentialSpec& spec,
                                                               const std::vector<int>& sizes,
                                                               PsiKind psi) {
    if (sizes.size() < 2) throw std::domain_error("resolvent_convergence_scan: need >= 2 sizes");
    if (!std::is_sorted(sizes.begin(), sizes.end()))
        throw std::domain_error("resolvent_convergence_scan: sizes must increase");
    std::vector<DiscreteMeasure> measures;
    measures.reserve(sizes.size());
    for (int n : sizes) {
        SpectralRequest req{spec, n, psi, {}};
        measures.push_back(spectral_measure(req).measure);
    }
    std::vector<std::pair<int, double>> out;
    for (std::size_t i = 0; i < sizes.size(); ++i)
        out.emplace_back(sizes[i], levy_distance(measures[i], measures.back()));
    return out;
}

double arcsine_cdf(double x) {
    if (x <= -2.0) return 0.0;
    if (x >= 2.0) return 1.0;
    return 0.5 + std::asin(0.5 * x) / M_PI;
}

DiscreteMeasure arcsine_measure(int n_atoms) {
    if (n_atoms < 1) throw std::domain_error("arcsine_measure: need n_atoms >= 1");
    std::vector<std::pair<double, double>> atoms;
    atoms.reserve(static_cast<std::size_t>(n_atoms));
    const double w = 1.0 / n_atoms;
    for (int i = 0; i < n_atoms; ++i) {
        double u = (i + 0.5) / n_atoms;
        atoms.emplace_back(2.0 * std::sin(M_PI * (u - 0.5)), w);
    }
    return DiscreteMeasure::from_atoms(std::move(atoms));
}

std::string spectral_sidecar_json(const SpectralResult& res, const PotentialSpec& spec,
                                  const std::string& psi_tag) {
    // FNV-1a of the canonical spec JSON, recorded so results can be matched
    // to the exact potential that produced them
    std::string canon = spec_to_json(spec);
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char ch : canon) {
        h ^= ch;
        h *= 0x100000001B3ULL;
    }
    nlohmann::json j;
    j["format"] = 1;
    j["n"] = res.n;
    j["psi"] = psi_tag;
    j["method"] = res.method;
    j["spec_hash"] = h;
    j["residual_max"] = res.residual_max;
    j["dropped_mass"] = res.dropped_mass;
    return j.dump();
}

}  // namespace spectrafrac
