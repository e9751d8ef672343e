#include "spectrafrac/set_dims.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

namespace spectrafrac {

namespace {

// Tolerant cell arithmetic: values that are within 1e-9 of an integer grid
// line are snapped to it, so constructions whose endpoints lie exactly on
// the grid (Cantor prefractals, unit intervals) count one cell per aligned
// block instead of leaking into neighbours through rounding noise.
long long cell_floor(double v) {
    double r = std::round(v);
    if (std::abs(v - r) < 1e-9) return static_cast<long long>(r);
    return static_cast<long long>(std::floor(v));
}

long long cell_ceil(double v) {
    double r = std::round(v);
    if (std::abs(v - r) < 1e-9) return static_cast<long long>(r);
    return static_cast<long long>(std::ceil(v));
}

// Occupied-cell count for a grid of cell length delta shifted by phi. Closed
// cells [phi + k*delta, phi + (k+1)*delta]; an interval [a,b] needs cells
// floor((a-phi)/delta) .. ceil((b-phi)/delta)-1, a point just its own cell.
std::size_t occupied_cells(const SetRep& s, double delta, double phi) {
    std::vector<std::pair<long long, long long>> ranges;
    if (s.kind == SetRep::Kind::Points) {
        for (double p : s.points) {
            long long k = cell_floor((p - phi) / delta);
            ranges.emplace_back(k, k);
        }
    } else {
        for (const auto& [a, b] : s.intervals) {
            long long k0 = cell_floor((a - phi) / delta);
            long long k1 = cell_ceil((b - phi) / delta) - 1;
            if (k1 < k0) k1 = k0;
            ranges.emplace_back(k0, k1);
        }
    }
    std::sort(ranges.begin(), ranges.end());
    std::size_t count = 0;
    bool any = false;
    long long covered_to = 0;
    for (const auto& [k0, k1] : ranges) {
        long long lo = (!any || k0 > covered_to) ? k0 : covered_to + 1;
        if (k1 >= lo) {
            count += static_cast<std::size_t>(k1 - lo + 1);
            covered_to = k1;
            any = true;
        }
    }
    return count;
}

// Smallest element of S strictly greater than x, or NaN if none.
double next_point_after(const SetRep& s, double x) {
    if (s.kind == SetRep::Kind::Points) {
        auto it = std::upper_bound(s.points.begin(), s.points.end(), x);
        if (it == s.points.end()) return std::numeric_limits<double>::quiet_NaN();
        return *it;
    }
    for (const auto& [a, b] : s.intervals) {
        if (b <= x) continue;
        if (a > x) return a;
        // inside [a,b]: the infimum x is excluded, take the next representable
        return std::nextafter(x, std::numeric_limits<double>::infinity());
    }
    return std::numeric_limits<double>::quiet_NaN();
}

double leftmost_point(const SetRep& s) {
    if (s.kind == SetRep::Kind::Points) return s.points.front();
    return s.intervals.front().first;
}

void require_scale(const SetRep& s, double delta) {
    if (!(delta > 0.0)) throw std::domain_error("scale must be > 0");
    if (delta < s.resolution) throw std::domain_error("scale below the set's resolution");
}

}  // namespace

SetRep SetRep::from_points(std::vector<double> pts, double resolution) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    SetRep s;
    s.kind = Kind::Points;
    s.points = std::move(pts);
    s.resolution = resolution;
    return s;
}

SetRep SetRep::from_intervals(std::vector<std::pair<double, double>> ivs, double resolution) {
    std::sort(ivs.begin(), ivs.end());
    for (std::size_t i = 0; i < ivs.size(); ++i) {
        if (!(ivs[i].first <= ivs[i].second)) throw std::domain_error("SetRep: interval with a > b");
        if (i > 0 && ivs[i].first <= ivs[i - 1].second)
            throw std::domain_error("SetRep: intervals overlap");
    }
    SetRep s;
    s.kind = Kind::Intervals;
    s.intervals = std::move(ivs);
    s.resolution = resolution;
    return s;
}

bool SetRep::empty() const {
    return kind == Kind::Points ? points.empty() : intervals.empty();
}

double hausdorff_value(const SetRep& s, double alpha, double delta) {
    require_scale(s, delta);
    if (s.empty()) return 0.0;
    std::size_t best = std::numeric_limits<std::size_t>::max();
    for (int i = 0; i < 8; ++i) {
        std::size_t c = occupied_cells(s, delta, delta * i / 8.0);
        best = std::min(best, c);
    }
    return static_cast<double>(best) * std::pow(delta, alpha);
}

double packing_value(const SetRep& s, double alpha, double delta) {
    require_scale(s, delta);
    if (s.empty()) return 0.0;
    std::size_t count = 1;
    double center = leftmost_point(s);
    for (;;) {
        // disjoint closed balls of radius delta/2 need centers strictly more
        // than delta apart; the relative 1e-9 margin (same snap tolerance as
        // the grid cells) keeps rounding noise in endpoint coordinates from
        // admitting exactly-touching balls
        double next = next_point_after(s, center + delta * (1.0 + 1e-9));
        if (std::isnan(next)) break;
        center = next;
        ++count;
    }
    return static_cast<double>(count) * std::pow(delta, alpha);
}

double box_dimension(const SetRep& s, const std::vector<double>& scales) {
    if (scales.size() < 4) throw std::domain_error("box_dimension: need at least 4 scales");
    for (double eps : scales) require_scale(s, eps);
    if (s.empty()) throw std::domain_error("box_dimension: empty set");
    // least squares of log N vs log(1/eps)
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (double eps : scales) {
        double x = std::log(1.0 / eps);
        double y = std::log(static_cast<double>(occupied_cells(s, eps, 0.0)));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double n = static_cast<double>(scales.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

SetRep cantor_set(int depth) {
    if (depth < 1) throw std::domain_error("cantor_set: depth must be >= 1");
    if (depth > 24) throw resource_error("cantor_set: depth capped at 24");
    const std::size_t n = std::size_t{1} << depth;
    const double scale = std::pow(3.0, -depth);
    std::vector<double> pow3(static_cast<std::size_t>(depth));
    pow3[0] = 1.0;
    for (int j = 1; j < depth; ++j) pow3[static_cast<std::size_t>(j)] = 3.0 * pow3[static_cast<std::size_t>(j - 1)];
    std::vector<std::pair<double, double>> ivs;
    ivs.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        double m = 0.0;
        for (int j = 0; j < depth; ++j) {
            if ((i >> (depth - 1 - j)) & 1u) m += 2.0 * pow3[static_cast<std::size_t>(depth - 1 - j)];
        }
        ivs.emplace_back(m * scale, (m + 1.0) * scale);
    }
    return SetRep::from_intervals(std::move(ivs), scale);
}

std::string set_to_json(const SetRep& s) {
    nlohmann::json j;
    j["format"] = 1;
    j["resolution"] = s.resolution;
    if (s.kind == SetRep::Kind::Points) {
        j["kind"] = "points";
        j["points"] = s.points;
    } else {
        j["kind"] = "intervals";
        auto& arr = j["intervals"] = nlohmann::json::array();
        for (const auto& [a, b] : s.intervals) arr.push_back({a, b});
    }
    return j.dump();
}

SetRep set_from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    double res = j.at("resolution").get<double>();
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "points") return SetRep::from_points(j.at("points").get<std::vector<double>>(), res);
    if (kind == "intervals") {
        std::vector<std::pair<double, double>> ivs;
        for (const auto& iv : j.at("intervals"))
            ivs.emplace_back(iv.at(0).get<double>(), iv.at(1).get<double>());
        return SetRep::from_intervals(std::move(ivs), res);
    }
    throw std::invalid_argument("set_from_json: unknown kind " + kind);
}

}  // namespace spectrafrac
