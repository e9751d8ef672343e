#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "spectrafrac/local_dims.hpp"
#include "spectrafrac/rng.hpp"

using namespace spectrafrac;

namespace {
const double kAlphaC = std::log(2.0) / std::log(3.0);
}

TEST_CASE("local_dim_bounds on a single atom") {
    auto atom = DiscreteMeasure::from_atoms({{0.3, 1.0}});
    auto est = local_dim_bounds(atom, 0.3, 1e-4, 1e-1, 8);
    CHECK(est.d_lower == 0.0);  // ball mass constant in eps
    CHECK(est.d_upper == 0.0);
}

TEST_CASE("local_dim_bounds on the Lebesgue oracle") {
    // mu(B(0.5, eps)) = 2 eps exactly, so every windowed slope is 1
    auto u = uniform_measure(0.0, 1.0, 100000);
    auto est = local_dim_bounds(u, 0.5, 1e-3, 1e-1, 11);
    CHECK(std::abs(est.d_lower - 1.0) <= 0.05);
    CHECK(std::abs(est.d_upper - 1.0) <= 0.05);
    CHECK(est.d_lower <= est.d_upper);
}

TEST_CASE("local_dim_bounds on the Cantor oracle") {
    // radii on exact powers of three see the exact ball masses 2^-j
    auto c = cantor_measure(14);
    auto est = local_dim_bounds(c, 0.0, std::pow(3.0, -12), std::pow(3.0, -2), 11);
    CHECK(std::abs(est.d_lower - kAlphaC) <= 0.05);
    CHECK(std::abs(est.d_upper - kAlphaC) <= 0.05);
}

TEST_CASE("local_dim_bounds error paths and sentinel") {
    auto atom = DiscreteMeasure::from_atoms({{5.0, 1.0}});
    CHECK_THROWS_AS(local_dim_bounds(atom, 0.0, 1e-3, 1e-1, 8), std::domain_error);  // outside support
    CHECK_THROWS_AS(local_dim_bounds(atom, 5.0, 1e-1, 1e-3, 8), std::domain_error);
    CHECK_THROWS_AS(local_dim_bounds(atom, 5.0, 1e-3, 1e-1, 3), std::domain_error);

    // mass appears only at the largest scales: +inf sentinel on d_upper
    auto far = DiscreteMeasure::from_atoms({{1.0, 1.0}});
    auto est = local_dim_bounds(far, 0.0, 0.5, 2.0, 5);
    CHECK(std::isinf(est.d_upper));
}

TEST_CASE("measure_dims extremes") {
    std::vector<std::pair<double, double>> atoms;
    for (int i = 0; i < 10; ++i) atoms.emplace_back(static_cast<double>(i), 0.1);
    auto pp = DiscreteMeasure::from_atoms(std::move(atoms));
    MeasureDimParams p;
    p.n_sample = 100;
    p.eps_min = 1e-3;
    p.eps_max = 0.3;  // below the atom separation
    p.n_scales = 8;
    p.seed = 7;
    auto rep = measure_dims(pp, p);
    CHECK(rep.dim_h_upper == 0.0);
    CHECK(rep.dim_p_lower == 0.0);

    auto u = uniform_measure(0.0, 1.0, 100000);
    MeasureDimParams q = p;
    q.n_sample = 300;
    q.eps_max = 0.1;
    q.n_scales = 11;
    auto rep_u = measure_dims(u, q);
    CHECK(rep_u.dim_h_upper >= 0.95);
    CHECK(rep_u.dim_p_lower >= 0.95);

    auto c = cantor_measure(14);
    MeasureDimParams pc = p;
    pc.n_sample = 300;
    pc.eps_min = std::pow(3.0, -12);
    pc.eps_max = std::pow(3.0, -2);
    pc.n_scales = 11;
    auto rep_c = measure_dims(c, pc);
    CHECK(std::abs(rep_c.dim_h_upper - kAlphaC) <= 0.05);
    CHECK(std::abs(rep_c.dim_p_lower - kAlphaC) <= 0.05);

    CHECK_THROWS_AS(measure_dims(DiscreteMeasure{}, p), std::domain_error);
}

TEST_CASE("measure_dims quantile monotonicity and clamping") {
    SplitMix64 g(31);
    std::vector<std::pair<double, double>> atoms;
    for (int i = 0; i < 200; ++i) atoms.emplace_back(g.next_double(), 0.005);
    auto mu = DiscreteMeasure::from_atoms(std::move(atoms));
    MeasureDimParams p;
    p.n_sample = 200;
    p.eps_min = 1e-3;
    p.eps_max = 0.2;
    p.n_scales = 8;
    p.seed = 99;
    double prev = -1.0;
    for (double q : {0.55, 0.7, 0.85, 0.95}) {
        p.quantile = q;
        auto rep = measure_dims(mu, p);
        CHECK(rep.dim_h_upper >= prev);  // raising q never decreases dim_H_upper
        CHECK(rep.dim_h_upper >= 0.0);
        CHECK(rep.dim_h_upper <= 1.0);
        CHECK(rep.dim_p_lower >= 0.0);
        CHECK(rep.dim_p_lower <= 1.0);
        prev = rep.dim_h_upper;
    }
    p.quantile = 0.5;
    CHECK_THROWS_AS(measure_dims(mu, p), std::domain_error);
}

TEST_CASE("measure_dims detail rows and determinism") {
    auto c = cantor_measure(10);
    MeasureDimParams p;
    p.n_sample = 50;
    p.eps_min = std::pow(3.0, -8);
    p.eps_max = std::pow(3.0, -2);
    p.n_scales = 7;
    p.seed = 123;
    std::vector<PointDetail> d1, d2;
    auto r1 = measure_dims(c, p, &d1);
    p.jobs = 1;
    auto r2 = measure_dims(c, p, &d2);
    CHECK(r1.dim_h_upper == r2.dim_h_upper);
    CHECK(detail_to_csv(d1) == detail_to_csv(d2));
    CHECK(d1.size() == 50);
}

TEST_CASE("classify_mass on a single atom") {
    auto atom = DiscreteMeasure::from_atoms({{0.0, 1.0}});
    // gamma_h = t_max^alpha exactly on an atom when the grid hits t_max
    double r_eq = std::pow(16.0, 0.5);
    auto rep = classify_mass(atom, 0.5, r_eq, 1.0, 16.0, 2.0);
    CHECK(rep.kc_mass == 1.0);
    CHECK(rep.ks_mass == 0.0);

    auto rep2 = classify_mass(atom, 0.5, 0.99, 1.0, 16.0, 2.0);  // r below s^alpha
    CHECK(rep2.kc_mass == 0.0);
    CHECK(rep2.ks_mass == 1.0);

    CHECK_THROWS_AS(classify_mass(atom, 0.5, -1.0, 1.0, 16.0), std::domain_error);
}

TEST_CASE("classify_mass on the Lebesgue oracle") {
    // interior points have t * V_t = 3 exactly (tent integral against unit
    // density); the grid ratio 10 keeps 1/t on whole atom spacings so the
    // discrete sums reproduce it to ~1e-12, and r carries matching slack
    auto u = uniform_measure(0.0, 1.0, 100000);
    for (std::size_t i : {30000u, 50000u, 64321u}) {
        for (double t : {10.0, 100.0, 1000.0})
            CHECK(t * v_t(u, t, u.position(i)) == doctest::Approx(3.0).epsilon(1e-9));
    }
    auto rep = classify_mass(u, 1.0, 3.0 * (1 + 1e-9), 10.0, 1000.0, 10.0, 0);
    CHECK(rep.kc_mass >= 0.95);
    CHECK(rep.kc_mass + rep.ks_mass == doctest::Approx(u.total_mass()).epsilon(1e-9));
}

TEST_CASE("classify_mass monotonicity in r and in s") {
    auto c = cantor_measure(8);
    double prev = -1.0;
    for (double r : {0.5, 1.0, 1.5, 2.0, 3.0}) {
        auto rep = classify_mass(c, kAlphaC, r, 3.0, 243.0, 2.0);
        CHECK(rep.kc_mass >= prev);
        prev = rep.kc_mass;
    }
    // nested horizons: raising s along the grid never loses kc mass
    double kc_s = classify_mass(c, kAlphaC, 1.5, 3.0, 243.0, 3.0).kc_mass;
    double kc_s2 = classify_mass(c, kAlphaC, 1.5, 9.0, 243.0, 3.0).kc_mass;
    CHECK(kc_s2 >= kc_s);
}

TEST_CASE("classification consistent with the density proposition on oracles") {
    // below log2/log3 the Cantor measure is alpha-continuous, above it
    // singular; the kc mass collapses as the horizon grows
    auto c = cantor_measure(12);
    const double s = 3.0;
    double band_r = 2.0;
    auto low = classify_mass(c, kAlphaC - 0.1, band_r, s, std::pow(3.0, 9.0));
    CHECK(low.kc_mass >= 0.99);
    double prev = 1.1;
    for (double tm : {std::pow(3.0, 5.0), std::pow(3.0, 7.0), std::pow(3.0, 9.0)}) {
        auto high = classify_mass(c, kAlphaC + 0.1, band_r, s, tm);
        CHECK(high.kc_mass <= prev + 1e-12);
        prev = high.kc_mass;
    }
    CHECK(prev <= 0.01);
}

TEST_CASE("report serialization") {
    auto u = uniform_measure(0.0, 1.0, 1000);
    MeasureDimParams p;
    p.n_sample = 20;
    p.eps_min = 1e-2;
    p.eps_max = 0.2;
    p.n_scales = 6;
    auto rep = measure_dims(u, p);
    auto js = report_to_json(rep);
    CHECK(js.find("\"dim_H_upper\"") != std::string::npos);
    CHECK(js.find("\"window\"") != std::string::npos);
    auto cl = classify_mass(u, 0.5, 1.0, 1.0, 64.0);
    CHECK(classification_to_json(cl).find("\"kc_mass\"") != std::string::npos);
}
