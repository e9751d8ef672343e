// Command-line front end. Thin shell over the library: every subcommand
// parses inputs, calls one or two module operations, and writes artifacts
// plus a run manifest into the output directory.
//
// Exit codes: 0 success, 1 validation failure, 2 usage/config error.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "spectrafrac/acceptance.hpp"
#include "spectrafrac/experiments.hpp"
#include "spectrafrac/local_dims.hpp"
#include "spectrafrac/set_dims.hpp"
#include "spectrafrac/spectral.hpp"

namespace fs = std::filesystem;
using namespace spectrafrac;

namespace {

struct Options {
    std::string out_dir = ".";
    unsigned jobs = 0;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path.string());
    out << content;
}

// json parse with a line-anchored error message
nlohmann::json parse_config(const std::string& text, const std::string& label) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        std::size_t line = 1;
        for (std::size_t i = 0; i < e.byte && i < text.size(); ++i)
            if (text[i] == '\n') ++line;
        throw std::invalid_argument(label + ":" + std::to_string(line) + ": " + e.what());
    }
}

void write_manifest(const Options& opt, const std::string& command,
                    const std::vector<std::string>& outputs, double seconds) {
    nlohmann::json j;
    j["format"] = 1;
    j["tool"] = kToolVersion;
    j["command"] = command;
    j["outputs"] = outputs;
    j["timings"] = {{"total_seconds", seconds}};
    write_file(fs::path(opt.out_dir) / "manifest.json", j.dump(2) + "\n");
}

std::uint64_t effective_seed(const Options& opt, std::uint64_t fallback) {
    if (opt.seed_set) return opt.seed;
    if (const char* env = std::getenv("SPECTRAFRAC_SEED")) return std::strtoull(env, nullptr, 10);
    return fallback;
}

PsiKind parse_psi(const std::string& s) {
    if (s == "delta0") return PsiKind::Delta0;
    if (s == "delta1") return PsiKind::Delta1;
    throw std::invalid_argument("psi must be delta0 or delta1");
}

int run(int argc, char** argv) {
    CLI::App app{"spectral measures of Jacobi operators and fractal dimension estimation"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand
    Options opt;
    app.add_option("-o,--out", opt.out_dir, "output directory")->capture_default_str();
    app.add_option("-j,--jobs", opt.jobs, "worker threads (0 = all cores)");
    auto* seed_opt = app.add_option("--seed", opt.seed, "seed override (else SPECTRAFRAC_SEED, else per-command default)");

    // measure-dim ----------------------------------------------------------
    auto* md = app.add_subcommand("measure-dim", "dimension report for a measure CSV");
    std::string md_file;
    MeasureDimParams mdp;
    mdp.eps_min = 1e-4;
    mdp.eps_max = 1e-1;
    bool md_points = false;
    md->add_option("measure", md_file, "measure CSV file")->required();
    md->add_option("--eps-min", mdp.eps_min, "smallest ball radius")->capture_default_str();
    md->add_option("--eps-max", mdp.eps_max, "largest ball radius")->capture_default_str();
    md->add_option("--n-scales", mdp.n_scales, "grid points across the window")->capture_default_str();
    md->add_option("--quantile", mdp.quantile, "essential-bound quantile")->capture_default_str();
    md->add_option("--n-sample", mdp.n_sample, "sampled points")->capture_default_str();
    md->add_flag("--points-csv", md_points, "also write per-point detail CSV");

    // set-dim ---------------------------------------------------------------
    auto* sd = app.add_subcommand("set-dim", "dimension estimates for a set JSON");
    std::string sd_file;
    double sd_delta = 0.0;
    sd->add_option("set", sd_file, "SetRep JSON file")->required();
    sd->add_option("--delta", sd_delta, "scale for the alpha scan (default 16x resolution)");

    // spectral ---------------------------------------------------------------
    auto* sp = app.add_subcommand("spectral", "spectral measure of a potential spec");
    std::string sp_file, sp_psi = "delta0";
    int sp_n = 1001;
    sp->add_option("spec", sp_file, "potential spec JSON file")->required();
    sp->add_option("--n", sp_n, "truncation size")->capture_default_str();
    sp->add_option("--psi", sp_psi, "cyclic vector: delta0 | delta1")->capture_default_str();

    // profile ----------------------------------------------------------------
    auto* pf = app.add_subcommand("profile", "tent-kernel scaling profile at a point");
    std::string pf_file;
    double pf_x = 0.0, pf_alpha = 0.5, pf_s = 1.0, pf_tmax = 1024.0, pf_ratio = kDefaultProfileRatio;
    pf->add_option("measure", pf_file, "measure CSV file")->required();
    pf->add_option("--x", pf_x, "evaluation point")->required();
    pf->add_option("--alpha", pf_alpha, "scaling exponent")->required();
    pf->add_option("--s", pf_s, "horizon start")->capture_default_str();
    pf->add_option("--t-max", pf_tmax, "horizon end")->capture_default_str();
    pf->add_option("--ratio", pf_ratio, "geometric grid ratio");

    // classify ---------------------------------------------------------------
    auto* cl = app.add_subcommand("classify", "kc/ks mass split at a threshold");
    std::string cl_file;
    double cl_alpha = 0.5, cl_r = 1.0, cl_s = 1.0, cl_tmax = 1024.0;
    cl->add_option("measure", cl_file, "measure CSV file")->required();
    cl->add_option("--alpha", cl_alpha, "scaling exponent")->required();
    cl->add_option("--r", cl_r, "threshold")->required();
    cl->add_option("--s", cl_s, "horizon start")->required();
    cl->add_option("--t-max", cl_tmax, "horizon end")->capture_default_str();

    // experiment ---------------------------------------------------------------
    auto* ex = app.add_subcommand("experiment", "run an experiment config");
    std::string ex_kind, ex_config;
    ex->add_option("kind", ex_kind, "wonderland | limit-periodic")->required();
    ex->add_option("config", ex_config, "experiment config JSON")->required();

    // validate -----------------------------------------------------------------
    auto* va = app.add_subcommand("validate", "run the acceptance suite");

    // oracle --------------------------------------------------------------------
    auto* orc = app.add_subcommand("oracle", "emit oracle artifacts");
    std::string orc_kind;
    int orc_depth = 8, orc_points = 100001;
    orc->add_option("kind", orc_kind, "cantor-measure | cantor-set | arcsine-cdf")->required();
    orc->add_option("--depth", orc_depth, "construction depth")->capture_default_str();
    orc->add_option("--points", orc_points, "atom/sample count for arcsine-cdf")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    opt.seed_set = seed_opt->count() > 0;

    auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };
    fs::create_directories(opt.out_dir);
    std::vector<std::string> outputs;

    if (md->parsed()) {
        auto mu = measure_from_csv_file(md_file);
        mdp.seed = effective_seed(opt, 1);
        mdp.jobs = opt.jobs;
        std::vector<PointDetail> detail;
        auto rep = measure_dims(mu, mdp, md_points ? &detail : nullptr);
        write_file(fs::path(opt.out_dir) / "measure_dim.json", report_to_json(rep) + "\n");
        outputs.push_back("measure_dim.json");
        if (md_points) {
            write_file(fs::path(opt.out_dir) / "measure_dim_points.csv", detail_to_csv(detail));
            outputs.push_back("measure_dim_points.csv");
        }
        std::cout << report_to_json(rep) << "\n";
    } else if (sd->parsed()) {
        auto s = set_from_json(parse_config(read_file(sd_file), sd_file).dump());
        // stay well above the representation's resolution: near it a finite
        // construction counts like a union of intervals, not like the set it
        // approximates
        double delta = sd_delta > 0.0 ? sd_delta : 128.0 * s.resolution;
        double floor_eps = sd_delta > 0.0 ? std::max(s.resolution, delta / 256.0)
                                          : std::max(8.0 * s.resolution, delta / 256.0);
        std::vector<double> scales;
        for (double e = delta; e >= floor_eps && scales.size() < 12; e /= 2.0) scales.push_back(e);
        if (scales.size() < 4) throw std::invalid_argument("set-dim: window too narrow, need 4 scales above resolution");
        nlohmann::json j;
        j["format"] = 1;
        j["box_dimension"] = box_dimension(s, scales);
        j["delta"] = delta;
        std::string scan = "alpha,hausdorff_value,packing_value\n";
        char buf[160];
        for (double a = 0.0; a <= 1.0 + 1e-12; a += 0.05) {
            std::snprintf(buf, sizeof buf, "%.2f,%.17g,%.17g\n", a, hausdorff_value(s, a, delta),
                          packing_value(s, a, delta));
            scan += buf;
        }
        write_file(fs::path(opt.out_dir) / "set_dim.json", j.dump(2) + "\n");
        write_file(fs::path(opt.out_dir) / "set_dim_scan.csv", scan);
        outputs = {"set_dim.json", "set_dim_scan.csv"};
        std::cout << j.dump() << "\n";
    } else if (sp->parsed()) {
        auto spec = spec_from_json(parse_config(read_file(sp_file), sp_file).dump());
        SpectralRequest req{spec, sp_n, parse_psi(sp_psi), {}};
        auto res = spectral_measure(req);
        write_file(fs::path(opt.out_dir) / "spectral_measure.csv", measure_to_csv(res.measure));
        write_file(fs::path(opt.out_dir) / "spectral_measure.json",
                   spectral_sidecar_json(res, spec, sp_psi) + "\n");
        outputs = {"spectral_measure.csv", "spectral_measure.json"};
        std::cout << spectral_sidecar_json(res, spec, sp_psi) << "\n";
    } else if (pf->parsed()) {
        auto mu = measure_from_csv_file(pf_file);
        auto prof = scaling_profile(mu, pf_alpha, pf_x, pf_s, pf_tmax, pf_ratio);
        write_file(fs::path(opt.out_dir) / "profile.csv", profile_to_csv(prof));
        outputs = {"profile.csv"};
        std::printf("gamma_H=%.17g at t=%.17g\ngamma_P=%.17g at t=%.17g\n", prof.gamma_h,
                    prof.gamma_h_at, prof.gamma_p, prof.gamma_p_at);
    } else if (cl->parsed()) {
        auto mu = measure_from_csv_file(cl_file);
        auto rep = classify_mass(mu, cl_alpha, cl_r, cl_s, cl_tmax, kDefaultProfileRatio, opt.jobs);
        write_file(fs::path(opt.out_dir) / "classify.json", classification_to_json(rep) + "\n");
        outputs = {"classify.json"};
        std::cout << classification_to_json(rep) << "\n";
    } else if (ex->parsed()) {
        auto cfg = experiment_config_from_json(parse_config(read_file(ex_config), ex_config).dump());
        std::string expected = ex_kind == "limit-periodic" ? "limit_periodic" : ex_kind;
        if (cfg.kind != expected)
            throw std::invalid_argument("experiment: config kind '" + cfg.kind +
                                        "' does not match subcommand '" + ex_kind + "'");
        cfg.jobs = opt.jobs;
        if (opt.seed_set) cfg.dims.seed = opt.seed;
        if (cfg.kind == "wonderland") {
            auto rows = wonderland_scan(cfg);
            write_file(fs::path(opt.out_dir) / "wonderland.csv", wonderland_to_csv(rows, cfg));
            outputs = {"wonderland.csv"};
        } else {
            auto rows = limit_periodic_scan(cfg);
            write_file(fs::path(opt.out_dir) / "limit_periodic.csv", limit_periodic_to_csv(rows, cfg));
            outputs = {"limit_periodic.csv"};
        }
        write_file(fs::path(opt.out_dir) / "run_manifest.json",
                   run_manifest_json(cfg, outputs, elapsed()) + "\n");
        outputs.push_back("run_manifest.json");
        std::cout << "wrote " << outputs[0] << " to " << opt.out_dir << "\n";
    } else if (va->parsed()) {
        auto results = run_acceptance(opt.jobs);
        std::fputs(format_results(results).c_str(), stdout);
        write_manifest(opt, "validate", {}, elapsed());
        return all_passed(results) ? 0 : 1;
    } else if (orc->parsed()) {
        if (orc_kind == "cantor-measure") {
            write_file(fs::path(opt.out_dir) / "cantor_measure.csv",
                       measure_to_csv(cantor_measure(orc_depth)));
            outputs = {"cantor_measure.csv"};
        } else if (orc_kind == "cantor-set") {
            write_file(fs::path(opt.out_dir) / "cantor_set.json",
                       set_to_json(cantor_set(orc_depth)) + "\n");
            outputs = {"cantor_set.json"};
        } else if (orc_kind == "arcsine-cdf") {
            std::string csv = "x,cdf\n";
            char buf[96];
            for (int i = 0; i < orc_points; ++i) {
                double x = -2.2 + 4.4 * i / (orc_points - 1);
                std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", x, arcsine_cdf(x));
                csv += buf;
            }
            write_file(fs::path(opt.out_dir) / "arcsine_cdf.csv", csv);
            write_file(fs::path(opt.out_dir) / "arcsine_measure.csv",
                       measure_to_csv(arcsine_measure(orc_points)));
            outputs = {"arcsine_cdf.csv", "arcsine_measure.csv"};
        } else {
            throw std::invalid_argument("oracle: unknown kind " + orc_kind);
        }
        std::cout << "wrote " << outputs.size() << " artifact(s) to " << opt.out_dir << "\n";
    }

    write_manifest(opt, app.get_subcommands().front()->get_name(), outputs, elapsed());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
