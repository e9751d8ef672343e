#include "spectrafrac/operators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "spectrafrac/rng.hpp"

namespace spectrafrac {

namespace {
constexpr std::uint64_t kNegativeStreamSalt = 0x6C62272E07BB0142ULL;
constexpr int kMaxCylinderDepth = 20;
}

OdometerState OdometerState::zeros(int depth) {
    if (depth < 1) throw std::domain_error("OdometerState: depth must be >= 1");
    OdometerState k;
    k.digits.assign(static_cast<std::size_t>(depth), 0);
    return k;
}

OdometerStep odometer_translate(const OdometerState& k) {
    OdometerStep out{k, false};
    for (auto& d : out.state.digits) {
        if (d == 0) {
            d = 1;
            return out;
        }
        d = 0;  // carry
    }
    out.wrapped = true;  // carried off the end: all-zeros
    return out;
}

OdometerStep odometer_translate_inverse(const OdometerState& k) {
    OdometerStep out{k, false};
    for (auto& d : out.state.digits) {
        if (d == 1) {
            d = 0;
            return out;
        }
        d = 1;  // borrow
    }
    out.wrapped = true;  // borrowed past the end: all-ones
    return out;
}

OdometerState odometer_add(const OdometerState& k, long long n) {
    const int L = k.depth();
    // reduce n modulo 2^L, then ripple-add the bits
    unsigned long long m;
    if (L >= 64) {
        m = static_cast<unsigned long long>(n);
    } else {
        unsigned long long mod = 1ULL << L;
        long long r = n % static_cast<long long>(mod);
        if (r < 0) r += static_cast<long long>(mod);
        m = static_cast<unsigned long long>(r);
    }
    OdometerState out = k;
    unsigned carry = 0;
    for (int i = 0; i < L; ++i) {
        unsigned bit = (i < 64) ? static_cast<unsigned>((m >> i) & 1ULL) : 0u;
        unsigned sum = out.digits[static_cast<std::size_t>(i)] + bit + carry;
        out.digits[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(sum & 1u);
        carry = sum >> 1;
    }
    return out;
}

int SamplingFunction::max_depth() const {
    int k = 0;
    for (const auto& t : terms) k = std::max(k, t.depth);
    return k;
}

double SamplingFunction::eval_prefix(std::uint32_t prefix) const {
    double sum = 0.0;
    for (const auto& t : terms) {
        std::uint32_t idx = prefix & ((1u << t.depth) - 1u);
        sum += t.table[idx];
    }
    return sum;
}

double SamplingFunction::eval(const OdometerState& k) const {
    std::uint32_t prefix = 0;
    int need = max_depth();
    if (k.depth() < need)
        throw invariant_error("SamplingFunction: odometer depth below cylinder depth");
    for (int i = 0; i < need; ++i)
        prefix |= static_cast<std::uint32_t>(k.digits[static_cast<std::size_t>(i)]) << i;
    return eval_prefix(prefix);
}

SamplingFunction SamplingFunction::truncated(int k) const {
    SamplingFunction out;
    for (const auto& t : terms)
        if (t.depth <= k) out.terms.push_back(t);
    return out;
}

double sampling_sup_norm(const SamplingFunction& g) {
    int K = g.max_depth();
    if (K > kMaxCylinderDepth) throw resource_error("sampling_sup_norm: cylinder depth above 20");
    for (const auto& t : g.terms) {
        if (t.depth < 1) throw std::domain_error("SamplingFunction: term depth must be >= 1");
        if (t.table.size() != (std::size_t{1} << t.depth))
            throw std::domain_error("SamplingFunction: table size must be 2^depth");
    }
    if (g.terms.empty()) return 0.0;
    double best = 0.0;
    for (std::uint32_t p = 0; p < (1u << K); ++p) best = std::max(best, std::abs(g.eval_prefix(p)));
    return best;
}

PotentialSpec PotentialSpec::explicit_values(std::vector<double> values, long long first_index,
                                             double bound) {
    double sup = 0.0;
    for (double v : values) sup = std::max(sup, std::abs(v));
    PotentialSpec s;
    s.bound = bound > 0.0 ? bound : std::max(sup, 1e-300);
    s.variant = ExplicitPotential{std::move(values), first_index};
    return s;
}

PotentialSpec PotentialSpec::periodic(std::vector<double> cell, double bound) {
    if (cell.empty()) throw std::domain_error("PotentialSpec: periodic cell must be nonempty");
    double sup = 0.0;
    for (double v : cell) sup = std::max(sup, std::abs(v));
    PotentialSpec s;
    s.bound = bound > 0.0 ? bound : std::max(sup, 1e-300);
    s.variant = PeriodicPotential{std::move(cell)};
    return s;
}

PotentialSpec PotentialSpec::random(std::uint64_t seed, double bound) {
    if (!(bound > 0.0)) throw std::domain_error("PotentialSpec: random bound must be > 0");
    PotentialSpec s;
    s.bound = bound;
    s.variant = RandomPotential{seed, bound};
    return s;
}

PotentialSpec PotentialSpec::limit_periodic(SamplingFunction g, OdometerState kappa, double bound) {
    if (kappa.depth() < g.max_depth())
        throw invariant_error("PotentialSpec: kappa depth below cylinder depth");
    double sup = sampling_sup_norm(g);
    PotentialSpec s;
    s.bound = bound > 0.0 ? bound : std::max(sup, 1e-300);
    s.variant = LimitPeriodicPotential{std::move(g), std::move(kappa)};
    return s;
}

std::vector<double> sample_potential(const PotentialSpec& spec, long long lo, long long hi) {
    if (lo > hi) throw std::domain_error("sample_potential: empty window");
    const std::size_t n = static_cast<std::size_t>(hi - lo + 1);
    std::vector<double> v(n);

    if (const auto* e = std::get_if<ExplicitPotential>(&spec.variant)) {
        for (std::size_t i = 0; i < n; ++i) {
            long long site = lo + static_cast<long long>(i);
            long long off = site - e->first_index;
            v[i] = (off >= 0 && off < static_cast<long long>(e->values.size()))
                       ? e->values[static_cast<std::size_t>(off)]
                       : 0.0;
        }
    } else if (const auto* p = std::get_if<PeriodicPotential>(&spec.variant)) {
        const long long L = static_cast<long long>(p->cell.size());
        for (std::size_t i = 0; i < n; ++i) {
            long long site = lo + static_cast<long long>(i);
            long long r = site % L;
            if (r < 0) r += L;
            v[i] = p->cell[static_cast<std::size_t>(r)];
        }
    } else if (const auto* r = std::get_if<RandomPotential>(&spec.variant)) {
        // one stream for sites >= 0, a mirrored one for sites < 0, each
        // consumed sequentially so windows agree wherever they overlap
        long long need_pos = hi >= 0 ? hi + 1 : 0;
        long long need_neg = lo < 0 ? -lo : 0;
        SplitMix64 gp(r->seed);
        for (long long s = 0; s < need_pos; ++s) {
            double x = gp.next_symmetric(r->bound);
            if (s >= lo) v[static_cast<std::size_t>(s - lo)] = x;
        }
        SplitMix64 gn(r->seed ^ kNegativeStreamSalt);
        for (long long s = 1; s <= need_neg; ++s) {
            double x = gn.next_symmetric(r->bound);
            if (-s <= hi) v[static_cast<std::size_t>(-s - lo)] = x;
        }
    } else {
        const auto& lp = std::get<LimitPeriodicPotential>(spec.variant);
        if (lp.kappa.depth() < lp.g.max_depth())
            throw invariant_error("sample_potential: kappa depth below cylinder depth");
        OdometerState k = odometer_add(lp.kappa, lo);
        for (std::size_t i = 0; i < n; ++i) {
            v[i] = lp.g.eval(k);
            if (i + 1 < n) k = odometer_translate(k).state;
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(v[i]) > spec.bound + 1e-12)
            throw invariant_error("sample_potential: |V_n| exceeds the declared bound r");
    }
    return v;
}

JacobiTruncation build_truncation(const PotentialSpec& spec, int n) {
    if (n < 2) throw std::domain_error("build_truncation: N must be >= 2");
    JacobiTruncation m;
    m.window_lo = -(static_cast<long long>(n) / 2);
    m.center_index = static_cast<int>(-m.window_lo);
    m.diagonal = sample_potential(spec, m.window_lo, m.window_lo + n - 1);
    m.bound = spec.bound;
    return m;
}

double potential_distance(const PotentialSpec& a, const PotentialSpec& b, long long lo,
                          long long hi) {
    const auto* la = std::get_if<LimitPeriodicPotential>(&a.variant);
    const auto* lb = std::get_if<LimitPeriodicPotential>(&b.variant);
    if (la && lb && la->kappa == lb->kappa) {
        // exact ||g - g'||_inf over the 2^K joint cylinders
        int K = std::max(la->g.max_depth(), lb->g.max_depth());
        if (K > kMaxCylinderDepth) throw resource_error("potential_distance: cylinder depth above 20");
        if (K == 0) return 0.0;
        double best = 0.0;
        for (std::uint32_t p = 0; p < (1u << K); ++p)
            best = std::max(best, std::abs(la->g.eval_prefix(p) - lb->g.eval_prefix(p)));
        return best;
    }
    auto va = sample_potential(a, lo, hi);
    auto vb = sample_potential(b, lo, hi);
    double sup = 0.0;
    for (std::size_t i = 0; i < va.size(); ++i) sup = std::max(sup, std::abs(va[i] - vb[i]));
    return sup;
}

double truncation_metric(const JacobiTruncation& a, const JacobiTruncation& b) {
    if (a.size() != b.size() || a.window_lo != b.window_lo)
        throw std::domain_error("truncation_metric: windows differ");
    const int n = a.size();
    // (T - T') is diagonal here, so ||(T - T')xi_l|| = |V_site - V'_site|
    double sum = 0.0;
    int l = 1;
    for (int step = 0; step < n; ++step, ++l) {
        // enumerate delta_0, delta_1, delta_-1, delta_2, ...
        int off = (step % 2 == 1) ? (step + 1) / 2 : -(step / 2);
        int idx = a.center_index + off;
        if (idx < 0 || idx >= n) continue;
        double d = std::abs(a.diagonal[static_cast<std::size_t>(idx)] -
                            b.diagonal[static_cast<std::size_t>(idx)]);
        sum += std::min(std::ldexp(1.0, -l), d);
    }
    return sum;
}

namespace {

nlohmann::json sampling_to_json(const SamplingFunction& g) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& t : g.terms) arr.push_back({{"depth", t.depth}, {"table", t.table}});
    return arr;
}

SamplingFunction sampling_from_json(const nlohmann::json& arr) {
    SamplingFunction g;
    for (const auto& t : arr) {
        CylinderTerm term;
        term.depth = t.at("depth").get<int>();
        term.table = t.at("table").get<std::vector<double>>();
        if (term.depth < 1 || term.table.size() != (std::size_t{1} << term.depth))
            throw std::invalid_argument("sampling function: table size must be 2^depth");
        g.terms.push_back(std::move(term));
    }
    return g;
}

}  // namespace

std::string spec_to_json(const PotentialSpec& spec) {
    nlohmann::json j;
    j["format"] = 1;
    j["bound"] = spec.bound;
    if (const auto* e = std::get_if<ExplicitPotential>(&spec.variant)) {
        j["variant"] = "explicit";
        j["values"] = e->values;
        j["first_index"] = e->first_index;
    } else if (const auto* p = std::get_if<PeriodicPotential>(&spec.variant)) {
        j["variant"] = "periodic";
        j["cell"] = p->cell;
    } else if (const auto* r = std::get_if<RandomPotential>(&spec.variant)) {
        j["variant"] = "random";
        j["seed"] = r->seed;
    } else {
        const auto& lp = std::get<LimitPeriodicPotential>(spec.variant);
        j["variant"] = "limit_periodic";
        j["terms"] = sampling_to_json(lp.g);
        std::vector<int> digits(lp.kappa.digits.begin(), lp.kappa.digits.end());
        j["kappa"] = digits;
    }
    return j.dump();
}

PotentialSpec spec_from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    std::string variant = j.at("variant").get<std::string>();
    double bound = j.value("bound", 0.0);
    if (variant == "explicit")
        return PotentialSpec::explicit_values(j.at("values").get<std::vector<double>>(),
                                              j.value("first_index", 0LL), bound);
    if (variant == "periodic")
        return PotentialSpec::periodic(j.at("cell").get<std::vector<double>>(), bound);
    if (variant == "random")
        return PotentialSpec::random(j.at("seed").get<std::uint64_t>(), bound);
    if (variant == "limit_periodic") {
        SamplingFunction g = sampling_from_json(j.at("terms"));
        OdometerState kappa;
        for (int d : j.at("kappa").get<std::vector<int>>())
            kappa.digits.push_back(static_cast<std::uint8_t>(d != 0));
        return PotentialSpec::limit_periodic(std::move(g), std::move(kappa), bound);
    }
    throw std::invalid_argument("spec_from_json: unknown variant " + variant);
}

std::string truncation_to_csv(const JacobiTruncation& m) {
    std::string out;
    char buf[96];
    std::snprintf(buf, sizeof buf, "# n=%d window_lo=%lld center_index=%d\n", m.size(),
                  static_cast<long long>(m.window_lo), m.center_index);
    out += buf;
    out += "diagonal\n";
    for (double d : m.diagonal) {
        std::snprintf(buf, sizeof buf, "%.17g\n", d);
        out += buf;
    }
    return out;
}

}  // namespace spectrafrac
