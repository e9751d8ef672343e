#include "spectrafrac/measures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace spectrafrac {

RestrictionSet::RestrictionSet(std::vector<std::pair<double, double>> ivs) : intervals(std::move(ivs)) {
    for (const auto& [a, b] : intervals) {
        if (!(a <= b)) throw std::domain_error("RestrictionSet: interval with a > b");
    }
    std::sort(intervals.begin(), intervals.end());
    for (std::size_t i = 1; i < intervals.size(); ++i) {
        if (intervals[i].first <= intervals[i - 1].second)
            throw std::domain_error("RestrictionSet: intervals overlap");
    }
}

bool RestrictionSet::contains(double x) const {
    auto it = std::upper_bound(intervals.begin(), intervals.end(), x,
                               [](double v, const std::pair<double, double>& iv) { return v < iv.first; });
    if (it == intervals.begin()) return false;
    --it;
    return x >= it->first && x <= it->second;
}

DiscreteMeasure DiscreteMeasure::from_atoms(std::vector<std::pair<double, double>> atoms) {
    std::sort(atoms.begin(), atoms.end());
    DiscreteMeasure m;
    m.pos_.reserve(atoms.size());
    m.w_.reserve(atoms.size());
    for (const auto& [p, w] : atoms) {
        if (!std::isfinite(p) || !std::isfinite(w))
            throw std::invalid_argument("DiscreteMeasure: non-finite atom");
        if (w <= 0.0) throw std::invalid_argument("DiscreteMeasure: weight must be > 0");
        if (!m.pos_.empty() && p - m.pos_.back() <= kDedupTol) {
            m.w_.back() += w;  // merge, keep the leftmost position
        } else {
            m.pos_.push_back(p);
            m.w_.push_back(w);
        }
    }
    m.cum_.resize(m.w_.size() + 1);
    m.cum_[0] = 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < m.w_.size(); ++i) {
        acc += m.w_[i];
        m.cum_[i + 1] = acc;
    }
    m.total_mass_ = acc;
    if (m.total_mass_ > 1.0 + 1e-6)
        throw std::invalid_argument("DiscreteMeasure: total mass exceeds 1");
    return m;
}

std::size_t DiscreteMeasure::lower_index(double x) const {
    return static_cast<std::size_t>(std::lower_bound(pos_.begin(), pos_.end(), x) - pos_.begin());
}

std::size_t DiscreteMeasure::upper_index(double x) const {
    return static_cast<std::size_t>(std::upper_bound(pos_.begin(), pos_.end(), x) - pos_.begin());
}

double DiscreteMeasure::cdf(double x) const { return cum_[upper_index(x)]; }

double DiscreteMeasure::mass_below(double x) const { return cum_[lower_index(x)]; }

std::size_t DiscreteMeasure::index_for_mass(double u) const {
    if (pos_.empty()) throw std::domain_error("index_for_mass: empty measure");
    auto it = std::upper_bound(cum_.begin(), cum_.end(), u);
    std::size_t i = static_cast<std::size_t>(it - cum_.begin());
    if (i == 0) return 0;
    return std::min(i - 1, pos_.size() - 1);
}

double ball_mass(const DiscreteMeasure& mu, double x, double eps) {
    if (!(eps > 0.0)) throw std::domain_error("ball_mass: eps must be > 0");
    // strict inequalities on both sides: atoms exactly on the boundary excluded
    std::size_t lo = mu.upper_index(x - eps);
    std::size_t hi = mu.lower_index(x + eps);
    double acc = 0.0;
    const auto& w = mu.weights();
    for (std::size_t i = lo; i < hi; ++i) acc += w[i];
    return acc;
}

DiscreteMeasure restrict_measure(const DiscreteMeasure& mu, const RestrictionSet& r) {
    std::vector<std::pair<double, double>> kept;
    for (const auto& [a, b] : r.intervals) {
        std::size_t lo = mu.lower_index(a);
        std::size_t hi = mu.upper_index(b);
        for (std::size_t i = lo; i < hi; ++i) kept.emplace_back(mu.position(i), mu.weight(i));
    }
    return DiscreteMeasure::from_atoms(std::move(kept));
}

namespace {

// One side of the Levy condition: sup_x [F_nu(x) - F_mu(x+h)] <= h. The sup
// over all real x is attained at a nu atom (F_nu steps up there, F_mu(.+h) is
// nondecreasing) or in the x -> +inf limit.
bool levy_side_ok(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double h) {
    for (std::size_t i = 0; i < nu.size(); ++i) {
        double x = nu.position(i);
        if (nu.cdf(x) - mu.cdf(x + h) > h) return false;
    }
    return nu.total_mass() - mu.total_mass() <= h;
}

}  // namespace

double levy_distance(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
    if (mu.positions() == nu.positions() && mu.weights() == nu.weights()) return 0.0;
    // h = 1 is always feasible for masses <= 1, so bisect on [0, 1].
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 60; ++it) {
        double mid = 0.5 * (lo + hi);
        if (levy_side_ok(mu, nu, mid) && levy_side_ok(nu, mu, mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

double levy_distance_to_cdf(const DiscreteMeasure& mu, const std::function<double(double)>& F,
                            double f_total) {
    auto feasible = [&](double h) {
        for (std::size_t i = 0; i < mu.size(); ++i) {
            double p = mu.position(i);
            // sup of F_mu(x) - F(x+h) sits at mu jumps; sup of F(x-h) - F_mu(x)
            // sits at left limits of mu jumps.
            if (mu.cdf(p) - F(p + h) > h) return false;
            if (F(p - h) - mu.mass_below(p) > h) return false;
        }
        return f_total - mu.total_mass() <= h && mu.total_mass() - f_total <= h;
    };
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 60; ++it) {
        double mid = 0.5 * (lo + hi);
        if (feasible(mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

DiscreteMeasure cantor_measure(int depth) {
    if (depth < 1) throw std::domain_error("cantor_measure: depth must be >= 1");
    if (depth > 24) throw resource_error("cantor_measure: depth capped at 24");
    const std::size_t n = std::size_t{1} << depth;
    const double scale = std::pow(3.0, -depth);
    const double w = std::ldexp(1.0, -depth);
    std::vector<double> pow3(static_cast<std::size_t>(depth));
    pow3[0] = 1.0;
    for (int j = 1; j < depth; ++j) pow3[static_cast<std::size_t>(j)] = 3.0 * pow3[static_cast<std::size_t>(j - 1)];
    std::vector<std::pair<double, double>> atoms;
    atoms.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        // left endpoint: ternary digits 2*b_j, MSB first => positions come out sorted
        double m = 0.0;
        for (int j = 0; j < depth; ++j) {
            if ((i >> (depth - 1 - j)) & 1u) m += 2.0 * pow3[static_cast<std::size_t>(depth - 1 - j)];
        }
        atoms.emplace_back(m * scale, w);
    }
    return DiscreteMeasure::from_atoms(std::move(atoms));
}

DiscreteMeasure uniform_measure(double a, double b, int n_atoms) {
    if (!(a < b)) throw std::domain_error("uniform_measure: need a < b");
    if (n_atoms < 1) throw std::domain_error("uniform_measure: need n_atoms >= 1");
    std::vector<std::pair<double, double>> atoms;
    atoms.reserve(static_cast<std::size_t>(n_atoms));
    const double w = 1.0 / n_atoms;
    const double step = (b - a) / n_atoms;
    for (int i = 0; i < n_atoms; ++i) atoms.emplace_back(a + (i + 0.5) * step, w);
    return DiscreteMeasure::from_atoms(std::move(atoms));
}

std::string measure_to_csv(const DiscreteMeasure& mu) {
    std::string out;
    char buf[80];
    std::snprintf(buf, sizeof buf, "# total_mass=%.17g\n", mu.total_mass());
    out += buf;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", mu.position(i), mu.weight(i));
        out += buf;
    }
    return out;
}

DiscreteMeasure measure_from_csv(std::istream& in) {
    std::vector<std::pair<double, double>> atoms;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (line.find_first_of("0123456789") == std::string::npos) continue;  // column header
        std::size_t comma = line.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("measure_from_csv: malformed row: " + line);
        atoms.emplace_back(std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1)));
    }
    return DiscreteMeasure::from_atoms(std::move(atoms));
}

DiscreteMeasure measure_from_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open measure file: " + path);
    return measure_from_csv(in);
}

std::string measure_to_json(const DiscreteMeasure& mu) {
    nlohmann::json j;
    j["format"] = 1;
    auto& atoms = j["atoms"] = nlohmann::json::array();
    for (std::size_t i = 0; i < mu.size(); ++i)
        atoms.push_back({mu.position(i), mu.weight(i)});
    return j.dump();
}

DiscreteMeasure measure_from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    std::vector<std::pair<double, double>> atoms;
    for (const auto& a : j.at("atoms")) atoms.emplace_back(a.at(0).get<double>(), a.at(1).get<double>());
    return DiscreteMeasure::from_atoms(std::move(atoms));
}

}  // namespace spectrafrac
