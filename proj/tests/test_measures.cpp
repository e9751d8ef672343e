#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "spectrafrac/measures.hpp"
#include "spectrafrac/rng.hpp"

using namespace spectrafrac;

namespace {

// Brute-force oracles, kept independent of the library's summation paths.

double ball_mass_oracle(const DiscreteMeasure& mu, double x, double eps) {
    double m = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i)
        if (std::abs(mu.position(i) - x) < eps) m += mu.weight(i);
    return m;
}

double cdf_oracle(const DiscreteMeasure& mu, double x) {
    double m = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i)
        if (mu.position(i) <= x) m += mu.weight(i);
    return m;
}

bool levy_feasible_oracle(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double h) {
    for (std::size_t i = 0; i < nu.size(); ++i) {
        double x = nu.position(i);
        if (cdf_oracle(nu, x) - cdf_oracle(mu, x + h) > h) return false;
    }
    for (std::size_t i = 0; i < mu.size(); ++i) {
        double x = mu.position(i);
        if (cdf_oracle(mu, x) - cdf_oracle(nu, x + h) > h) return false;
    }
    return std::abs(nu.total_mass() - mu.total_mass()) <= h;
}

double levy_grid_search(const DiscreteMeasure& mu, const DiscreteMeasure& nu, int steps = 4000) {
    for (int i = 0; i <= steps; ++i) {
        double h = static_cast<double>(i) / steps;
        if (levy_feasible_oracle(mu, nu, h)) return h;
    }
    return 1.0;
}

DiscreteMeasure unit_mass_at(double p) { return DiscreteMeasure::from_atoms({{p, 1.0}}); }

DiscreteMeasure random_measure(SplitMix64& g, int max_atoms = 30) {
    int n = 1 + static_cast<int>(g.next_u64() % static_cast<std::uint64_t>(max_atoms));
    std::vector<std::pair<double, double>> atoms;
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        atoms.emplace_back(g.next_symmetric(3.0), g.next_double() + 1e-3);
        total += atoms.back().second;
    }
    double scale = (0.1 + 0.9 * g.next_double()) / total;  // random mass in (0.1, 1]
    for (auto& [p, w] : atoms) w *= scale;
    return DiscreteMeasure::from_atoms(std::move(atoms));
}

DiscreteMeasure translate(const DiscreteMeasure& mu, double delta) {
    std::vector<std::pair<double, double>> atoms;
    for (std::size_t i = 0; i < mu.size(); ++i)
        atoms.emplace_back(mu.position(i) + delta, mu.weight(i));
    return DiscreteMeasure::from_atoms(std::move(atoms));
}

}  // namespace

TEST_CASE("construction: dedup, ordering, mass cap") {
    auto m = DiscreteMeasure::from_atoms({{1.0, 0.25}, {0.0, 0.25}, {1.0 + 5e-13, 0.25}});
    CHECK(m.size() == 2);
    CHECK(m.position(0) == 0.0);
    CHECK(m.position(1) == 1.0);           // leftmost survivor of the merged pair
    CHECK(m.weight(1) == doctest::Approx(0.5));
    CHECK(m.total_mass() == doctest::Approx(0.75));
    CHECK_THROWS_AS(DiscreteMeasure::from_atoms({{0.0, -1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(DiscreteMeasure::from_atoms({{0.0, 0.6}, {1.0, 0.6}}), std::invalid_argument);
}

TEST_CASE("ball_mass examples") {
    CHECK(ball_mass(unit_mass_at(0.0), 0.0, 0.5) == 1.0);

    auto c8 = cantor_measure(8);
    CHECK(ball_mass(c8, 0.5, 0.1) == 0.0);  // the middle-thirds gap carries no mass
    CHECK(ball_mass(c8, 0.5, 0.1) == ball_mass_oracle(c8, 0.5, 0.1));

    // self-similarity: mass 2^-j inside radius 3^-j at the left edge
    auto c12 = cantor_measure(12);
    for (int j = 1; j < 12; ++j) {
        double eps = std::pow(3.0, -j) + 1e-15;
        CHECK(ball_mass(c12, 0.0, eps) == doctest::Approx(std::ldexp(1.0, -j)).epsilon(1e-12));
        CHECK(ball_mass(c12, 0.0, eps) == ball_mass_oracle(c12, 0.0, eps));
    }

    CHECK_THROWS_AS(ball_mass(c8, 0.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(ball_mass(c8, 0.0, -1.0), std::domain_error);
}

TEST_CASE("ball_mass nondecreasing in eps") {
    SplitMix64 g(11);
    for (int rep = 0; rep < 50; ++rep) {
        auto mu = random_measure(g);
        double x = g.next_symmetric(3.5);
        double prev = 0.0;
        for (double eps = 1e-3; eps < 8.0; eps *= 1.7) {
            double m = ball_mass(mu, x, eps);
            CHECK(m >= prev);
            prev = m;
        }
    }
}

TEST_CASE("restrict examples and idempotence") {
    auto mu = DiscreteMeasure::from_atoms({{0.0, 0.5}, {1.0, 0.5}});
    auto r = RestrictionSet({{-0.1, 0.1}});
    auto res = restrict_measure(mu, r);
    CHECK(res.size() == 1);
    CHECK(res.position(0) == 0.0);

    CHECK(restrict_measure(mu, RestrictionSet{}).total_mass() == 0.0);

    auto c8 = cantor_measure(8);
    CHECK(restrict_measure(c8, RestrictionSet({{0.0, 1.0 / 3.0}})).total_mass() ==
          doctest::Approx(0.5));

    SplitMix64 g(12);
    for (int rep = 0; rep < 20; ++rep) {
        auto m = random_measure(g);
        RestrictionSet rs({{-2.0, -0.5}, {0.25, 1.75}});
        auto once = restrict_measure(m, rs);
        auto twice = restrict_measure(once, rs);
        CHECK(once.positions() == twice.positions());
        CHECK(once.weights() == twice.weights());
    }
}

TEST_CASE("levy_distance point-mass examples") {
    CHECK(levy_distance(unit_mass_at(0.3), unit_mass_at(0.3)) == 0.0);
    // grid-search oracle: inf h = min(a, 1) for unit masses at distance a
    for (double a : {0.25, 0.5, 0.75}) {
        double d = levy_distance(unit_mass_at(0.0), unit_mass_at(a));
        CHECK(d == doctest::Approx(a).epsilon(1e-9));
        CHECK(std::abs(d - levy_grid_search(unit_mass_at(0.0), unit_mass_at(a))) <= 1.0 / 4000 + 1e-12);
    }
    CHECK(levy_distance(unit_mass_at(0.0), unit_mass_at(5.0)) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("levy_distance agrees with grid search on random pairs") {
    SplitMix64 g(13);
    for (int rep = 0; rep < 25; ++rep) {
        auto a = random_measure(g), b = random_measure(g);
        double d = levy_distance(a, b);
        double gs = levy_grid_search(a, b);
        CHECK(std::abs(d - gs) <= 1.0 / 4000 + 1e-12);
        CHECK(d == doctest::Approx(levy_distance(b, a)).epsilon(1e-12));  // symmetry
    }
}

TEST_CASE("levy_distance triangle inequality") {
    SplitMix64 g(14);
    for (int rep = 0; rep < 40; ++rep) {
        auto a = random_measure(g), b = random_measure(g), c = random_measure(g);
        CHECK(levy_distance(a, c) <= levy_distance(a, b) + levy_distance(b, c) + 1e-12);
    }
}

TEST_CASE("levy_distance under translation") {
    SplitMix64 g(15);
    for (int rep = 0; rep < 25; ++rep) {
        auto mu = random_measure(g);
        double w1 = mu.weight(0);
        double delta = 0.9 * w1 * g.next_double();  // below the first atom's weight
        if (delta <= 0.0) continue;
        CHECK(levy_distance(mu, translate(mu, delta)) == doctest::Approx(delta).epsilon(1e-9));
        // and against a fixed nu the distance moves by at most delta
        auto nu = random_measure(g);
        double before = levy_distance(mu, nu);
        double after = levy_distance(translate(mu, delta), nu);
        CHECK(std::abs(after - before) <= delta + 1e-9);
    }
}

TEST_CASE("cantor_measure construction") {
    auto c1 = cantor_measure(1);
    REQUIRE(c1.size() == 2);
    CHECK(c1.position(0) == 0.0);
    CHECK(c1.position(1) == doctest::Approx(2.0 / 3.0));
    CHECK(c1.weight(0) == 0.5);

    auto c10 = cantor_measure(10);
    CHECK(c10.size() == 1024);
    for (std::size_t i = 0; i < c10.size(); ++i) CHECK(c10.weight(i) == std::ldexp(1.0, -10));
    CHECK(c10.total_mass() == doctest::Approx(1.0));

    // consecutive depths are weakly close: levy <= 3^-k
    for (int k = 1; k <= 8; ++k) {
        CHECK(levy_distance(cantor_measure(k + 1), cantor_measure(k)) <=
              std::pow(3.0, -k) + 1e-12);
    }
    CHECK_THROWS_AS(cantor_measure(25), resource_error);
}

TEST_CASE("uniform_measure examples") {
    auto u1 = uniform_measure(0.0, 1.0, 1);
    REQUIRE(u1.size() == 1);
    CHECK(u1.position(0) == 0.5);
    CHECK(u1.weight(0) == 1.0);

    auto u4 = uniform_measure(0.0, 1.0, 4);
    REQUIRE(u4.size() == 4);
    CHECK(u4.position(0) == doctest::Approx(1.0 / 8));
    CHECK(u4.position(3) == doctest::Approx(7.0 / 8));

    auto u1000 = uniform_measure(0.0, 1.0, 1000);
    CHECK(std::abs(ball_mass(u1000, 0.5, 0.25) - 0.5) <= 2.0 / 1000);

    CHECK_THROWS_AS(uniform_measure(1.0, 0.0, 5), std::domain_error);
}

TEST_CASE("serialization round trips") {
    SplitMix64 g(16);
    for (int rep = 0; rep < 10; ++rep) {
        auto mu = random_measure(g);
        std::istringstream csv(measure_to_csv(mu));
        auto back = measure_from_csv(csv);
        CHECK(back.positions() == mu.positions());
        CHECK(back.weights() == mu.weights());
        auto jback = measure_from_json(measure_to_json(mu));
        CHECK(jback.positions() == mu.positions());
        CHECK(jback.weights() == mu.weights());
    }
}
