// Command-line front end: renormalization towers, real-bounds tables,
// asymptotically holomorphic extensions, escape-time renders, expansion
// sweeps, controlled-map certificates and puzzle diagnostics, with
// reproducible file outputs.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ahpl/certificates.hpp"
#include "ahpl/dynamics.hpp"
#include "ahpl/errors.hpp"
#include "ahpl/extension.hpp"
#include "ahpl/hyperbolic.hpp"
#include "ahpl/io.hpp"
#include "ahpl/puzzles.hpp"
#include "ahpl/realbounds.hpp"
#include "ahpl/unimodal.hpp"

namespace fs = std::filesystem;
using Json = ahpl::io::Json;
using namespace ahpl;

namespace {

struct ExperimentConfig {
    int family_d = 2;
    double a = 0.0;  // 0: derive from combinatorics
    std::vector<int> combinatorics{2};
    double perturb_eps = 0.0;
    int perturb_m = 3;
    int m = 3;
    int depth = 8;
    int level = -1;  // -1: use depth
    double c_V = 2.0;
    int grid = 512;
    int max_iter = 128;
    int nest_depth = 8;
    int ray_steps = 48;
    int conjugacy_length = 2048;
    int expansion_steps = 40;
    int corpus = 64;
    double alpha = 10.0;
    double delta = 0.0;  // 0: measured
    double theta = 0.1;
    double M = 0.0;  // 0: measured
    int n0 = 2;
    double r = 0.0;  // 0: m + 1
    double C0 = 1.0;
    std::uint64_t seed = 20260801;
    int threads = 1;
    std::string out = "out";
    bool threshold_only = false;

    int eff_level() const { return level < 0 ? depth : level; }
    double eff_r() const { return r == 0.0 ? m + 1.0 : r; }
};

void apply_json(ExperimentConfig& cfg, const Json& j) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& k = it.key();
        if (k == "family_d") cfg.family_d = it.value().get<int>();
        else if (k == "a") cfg.a = it.value().get<double>();
        else if (k == "combinatorics") cfg.combinatorics = it.value().get<std::vector<int>>();
        else if (k == "perturb_eps") cfg.perturb_eps = it.value().get<double>();
        else if (k == "perturb_m") cfg.perturb_m = it.value().get<int>();
        else if (k == "m") cfg.m = it.value().get<int>();
        else if (k == "depth") cfg.depth = it.value().get<int>();
        else if (k == "level") cfg.level = it.value().get<int>();
        else if (k == "c_V") cfg.c_V = it.value().get<double>();
        else if (k == "grid") cfg.grid = it.value().get<int>();
        else if (k == "max_iter") cfg.max_iter = it.value().get<int>();
        else if (k == "nest_depth") cfg.nest_depth = it.value().get<int>();
        else if (k == "ray_steps") cfg.ray_steps = it.value().get<int>();
        else if (k == "conjugacy_length") cfg.conjugacy_length = it.value().get<int>();
        else if (k == "expansion_steps") cfg.expansion_steps = it.value().get<int>();
        else if (k == "corpus") cfg.corpus = it.value().get<int>();
        else if (k == "alpha") cfg.alpha = it.value().get<double>();
        else if (k == "delta") cfg.delta = it.value().get<double>();
        else if (k == "theta") cfg.theta = it.value().get<double>();
        else if (k == "M") cfg.M = it.value().get<double>();
        else if (k == "n0") cfg.n0 = it.value().get<int>();
        else if (k == "r") cfg.r = it.value().get<double>();
        else if (k == "C0") cfg.C0 = it.value().get<double>();
        else if (k == "seed") cfg.seed = it.value().get<std::uint64_t>();
        else if (k == "threads") cfg.threads = it.value().get<int>();
        else if (k == "out") cfg.out = it.value().get<std::string>();
        else if (k == "schema_version") { /* accepted on re-read of snapshots */ }
        else throw ConfigError("unknown config key: " + k);
    }
}

void validate(const ExperimentConfig& cfg) {
    if (cfg.family_d < 2 || cfg.family_d % 2 != 0)
        throw ConfigError("family_d must be an even integer >= 2");
    if (cfg.m < 2) throw ConfigError("m must be >= 2");
    if (cfg.depth < 0) throw ConfigError("depth must be non-negative");
    if (cfg.grid <= 0) throw ConfigError("grid must be positive");
    if (cfg.max_iter <= 0) throw ConfigError("max_iter must be positive");
    if (cfg.c_V <= 1.0) throw ConfigError("c_V must exceed 1");
    if (cfg.n0 < 2) throw ConfigError("n0 must be >= 2");
    if (cfg.threads < 1 || cfg.threads > 256) throw ConfigError("threads must be in [1,256]");
    if (cfg.theta <= 0.0 || cfg.theta >= 1.0) throw ConfigError("theta must lie in (0,1)");
    if (cfg.alpha <= 1.0) throw ConfigError("alpha must exceed 1");
    for (int p : cfg.combinatorics)
        if (p < 2) throw ConfigError("combinatorics entries must be >= 2");
    if (cfg.eff_level() > cfg.depth) throw ConfigError("level exceeds tower depth");
}

Json config_json(const ExperimentConfig& cfg, double resolved_a) {
    Json j;
    j["schema_version"] = io::kSchemaVersion;
    j["family_d"] = cfg.family_d;
    j["a"] = resolved_a;
    j["combinatorics"] = cfg.combinatorics;
    j["perturb_eps"] = cfg.perturb_eps;
    j["perturb_m"] = cfg.perturb_m;
    j["m"] = cfg.m;
    j["depth"] = cfg.depth;
    j["level"] = cfg.eff_level();
    j["c_V"] = cfg.c_V;
    j["grid"] = cfg.grid;
    j["max_iter"] = cfg.max_iter;
    j["nest_depth"] = cfg.nest_depth;
    j["ray_steps"] = cfg.ray_steps;
    j["conjugacy_length"] = cfg.conjugacy_length;
    j["expansion_steps"] = cfg.expansion_steps;
    j["corpus"] = cfg.corpus;
    j["alpha"] = cfg.alpha;
    j["delta"] = cfg.delta;
    j["theta"] = cfg.theta;
    j["M"] = cfg.M;
    j["n0"] = cfg.n0;
    j["r"] = cfg.eff_r();
    j["C0"] = cfg.C0;
    j["seed"] = cfg.seed;
    // worker count deliberately omitted: outputs are independent of it
    return j;
}

struct Workspace {
    ExperimentConfig cfg;
    double a = 0.0;
    unimodal::FamilySpec family;
    std::unique_ptr<unimodal::Tower> tower;
    std::shared_ptr<const extension::AHExtension> ext;
    std::unique_ptr<dynamics::AHPLMap> map;
    std::ostringstream log;

    explicit Workspace(ExperimentConfig c) : cfg(std::move(c)) {
        family.d = cfg.family_d;
        family.perturb_eps = cfg.perturb_eps;
        family.perturb_m = cfg.perturb_m;
        resolve_parameter();
    }

    void resolve_parameter() {
        if (cfg.a != 0.0) {
            a = cfg.a;
            log << "parameter: a = " << io::format_double(a) << " (given)\n";
            return;
        }
        bool all_two = true;
        for (int p : cfg.combinatorics) all_two = all_two && p == 2;
        if (all_two && cfg.depth > static_cast<int>(cfg.combinatorics.size())) {
            a = unimodal::find_feigenbaum(family, 1e-12);
            log << "parameter: a = " << io::format_double(a)
                << " (period-doubling accumulation)\n";
        } else {
            if (!all_two && cfg.depth > static_cast<int>(cfg.combinatorics.size()))
                throw ConfigError(
                    "depth exceeds the combinatorics prefix; only the all-2 prefix "
                    "extends to an infinite target");
            a = unimodal::find_parameter(family, cfg.combinatorics);
            log << "parameter: a = " << io::format_double(a) << " (combinatorics window)\n";
        }
    }

    const unimodal::Tower& get_tower() {
        if (!tower) {
            tower = std::make_unique<unimodal::Tower>(
                unimodal::build_tower(family.make(a), cfg.depth));
            log << "tower: depth " << tower->depth() << ", q_max = "
                << tower->level(tower->depth()).q << "\n";
        }
        return *tower;
    }

    const dynamics::AHPLMap& get_map() {
        if (!map) {
            get_tower();
            ext = std::make_shared<extension::AHExtension>(
                extension::extend(family.make(a), cfg.m));
            map = std::make_unique<dynamics::AHPLMap>(
                dynamics::build_domains(ext, *tower, cfg.eff_level(), cfg.c_V));
            log << "domains: level " << map->level << ", mod >= "
                << io::format_double(map->mod_lower) << "\n";
        }
        return *map;
    }
};

void emit(const Workspace& ws, const std::string& name, const std::string& content) {
    fs::create_directories(ws.cfg.out);
    io::write_file_atomic((fs::path(ws.cfg.out) / name).string(), content);
}

void emit_json(const Workspace& ws, const std::string& name, const Json& j) {
    emit(ws, name, j.dump(2) + "\n");
}

void finish(Workspace& ws) {
    emit_json(ws, "config.json", config_json(ws.cfg, ws.a));
    emit(ws, "log.txt", ws.log.str());
    std::cout << ws.log.str();
}

// ---------------------------------------------------------------------------

void run_renorm(Workspace& ws) {
    const auto& tower = ws.get_tower();
    emit_json(ws, "tower.json", io::tower_json(tower));
    emit(ws, "tower.csv", io::tower_csv(tower));
    if (tower.depth() >= 1) {
        double ratio = std::abs(tower.level(tower.depth()).lambda /
                                tower.level(tower.depth() - 1).lambda);
        ws.log << "renorm: |lambda_{N}/lambda_{N-1}| = " << io::format_double(ratio) << "\n";
    }
}

void run_bounds(Workspace& ws) {
    const auto& tower = ws.get_tower();
    realbounds::KhatOptions kopts;
    kopts.seed = ws.cfg.seed;
    realbounds::BoundsReport rep = realbounds::bounds_report(tower, tower.depth(), kopts);
    emit_json(ws, "bounds.json", io::bounds_json(rep));
    emit(ws, "bounds.csv", io::bounds_csv(rep));
    ws.log << "bounds: " << rep.rows.size() << " levels\n";
}

void run_extend(Workspace& ws) {
    ws.get_tower();
    extension::AHExtension ext = extension::extend(ws.family.make(ws.a), ws.cfg.m);
    Json j;
    j["schema_version"] = io::kSchemaVersion;
    j["m"] = ext.m();
    j["order"] = ext.order();
    j["quasiregular_strip_height"] = extension::quasiregular_strip_height(ext);
    try {
        extension::OrderFit fit = extension::verify_order(ext);
        j["degenerate"] = false;
        j["slope"] = fit.slope;
        j["constant"] = fit.constant;
        j["pass"] = fit.pass;
        ws.log << "extend: mu-decay slope " << io::format_double(fit.slope) << "\n";
    } catch (const DegenerateSamples&) {
        j["degenerate"] = true;
        ws.log << "extend: mu vanishes identically (exact polynomial case)\n";
    }
    emit_json(ws, "extend.json", j);
}

void run_julia(Workspace& ws) {
    const auto& map = ws.get_map();
    dynamics::EscapeField field =
        dynamics::filled_julia(map, ws.cfg.grid, ws.cfg.max_iter, ws.cfg.threads);
    emit(ws, "julia.ppm", io::escape_ppm(field));
    emit(ws, "julia_exits.csv", io::escape_csv(field));
    emit_json(ws, "domain.json", io::domain_json(map));
    ws.log << "julia: " << field.nonescaping_count() << " non-escaping pixels, interior "
           << io::format_double(field.interior_fraction()) << "\n";
}

void run_expansion(Workspace& ws) {
    const auto& map = ws.get_map();
    auto seeds = certificates::sample_chain_seeds(map, ws.cfg.corpus,
                                                  ws.cfg.expansion_steps, ws.cfg.seed);
    Json rows = Json::array();
    double eta = 1e300;
    int increasing = 0;
    for (Complex z : seeds) {
        try {
            dynamics::ExpansionReport rep =
                dynamics::orbit_expansion(map, z, Complex(1, 0), ws.cfg.expansion_steps);
            Json row;
            row["z"] = {z.real(), z.imag()};
            row["eta_hat"] = rep.eta_hat;
            row["tail_slope"] = rep.tail_slope;
            row["increasing_tail"] = rep.increasing_tail;
            rows.push_back(std::move(row));
            eta = std::min(eta, rep.eta_hat);
            if (rep.increasing_tail) ++increasing;
        } catch (const NumericError&) {
            // seed corpus guarantees orbits survive; stragglers are dropped
        }
    }
    Json j;
    j["schema_version"] = io::kSchemaVersion;
    j["orbits"] = std::move(rows);
    j["eta_hat"] = eta;
    j["increasing_tails"] = increasing;
    emit_json(ws, "expansion.json", j);
    ws.log << "expansion: eta_hat = " << io::format_double(eta) << " over "
           << j["orbits"].size() << " orbits\n";
}

void run_certify(Workspace& ws) {
    certificates::ControlParams params;
    params.alpha = ws.cfg.alpha;
    params.theta = ws.cfg.theta;
    params.n0 = ws.cfg.n0;
    params.r = ws.cfg.eff_r();
    params.C0 = ws.cfg.C0;
    if (ws.cfg.threshold_only) {
        certificates::ThresholdResult t = certificates::check_threshold(params);
        Json j;
        j["schema_version"] = io::kSchemaVersion;
        j["threshold_rhs"] = t.rhs;
        j["threshold_margin"] = t.margin;
        j["pass"] = t.pass;
        emit_json(ws, "certificate.json", j);
        ws.log << "certify: threshold rhs = " << io::format_double(t.rhs) << "\n";
        return;
    }

    const auto& map = ws.get_map();

    // empirical C_theta from the small-dilatation quasi-isometry fit
    auto family = [](double eps) {
        hyperbolic::TestDiffeo phi;
        phi.F = [eps](Complex z) { return z + eps * std::conj(z); };
        phi.DF = [eps](Complex) {
            return matcalc::Mat2{{{1 + eps, 0}, {0, 1 - eps}}};
        };
        phi.mu = [eps](Complex) { return Complex(eps, 0); };
        return phi;
    };
    hyperbolic::QuasiIsoConfig qcfg;
    qcfg.seed = ws.cfg.seed;
    qcfg.thetas = {ws.cfg.theta};
    hyperbolic::QuasiIsoReport qrep = hyperbolic::verify_quasiisometry_small_dilatation(
        family, {1e-4, 3e-4, 1e-3, 3e-3, 1e-2}, qcfg);
    params.C_theta = std::max(1e-6, qrep.fits.front().fitted_C);

    certificates::CertifyOptions copts;
    copts.seed = ws.cfg.seed;

    if (ws.cfg.M == 0.0 || ws.cfg.delta == 0.0) {
        // probe pass to size M and delta from the measured map
        certificates::ControlParams probe = params;
        probe.M = 1e9;
        probe.delta = 0.999;
        certificates::CertificateReport pre = certificates::check_controlled(map, probe, copts);
        double need_M = 2.0 * map.c_V;
        need_M = std::max(need_M, 1.0 / map.mod_lower);
        double sup_mu = 0.0;
        for (const auto& c : pre.conditions) {
            if (c.id == "ii" || c.id == "iv" || c.id == "vi")
                need_M = std::max(need_M, c.measured);
            if (c.id == "iii") sup_mu = c.measured;
        }
        params.M = ws.cfg.M == 0.0 ? 1.05 * need_M : ws.cfg.M;
        params.delta = ws.cfg.delta == 0.0 ? std::max(2.0 * sup_mu, 1e-200) : ws.cfg.delta;
    } else {
        params.M = ws.cfg.M;
        params.delta = ws.cfg.delta;
    }

    certificates::CertificateReport rep = certificates::check_controlled(map, params, copts);
    emit_json(ws, "certificate.json", io::certificate_json(rep));
    ws.log << "certify: " << (rep.all_pass ? "all conditions pass" : "conditions failed")
           << ", K1 = " << io::format_double(rep.K1)
           << ", K2 = " << io::format_double(rep.K2) << "\n";

    auto seeds = certificates::sample_chain_seeds(map, 32, 12, ws.cfg.seed + 1);
    certificates::ChainOptions chopts;
    chopts.seed = ws.cfg.seed + 2;
    certificates::ChainReport chains = certificates::chain_expansion_constant(map, seeds, chopts);
    Json cj;
    cj["schema_version"] = io::kSchemaVersion;
    cj["chains_used"] = chains.chains_used;
    cj["chains_excluded"] = chains.chains_excluded;
    cj["holomorphic"] = chains.holomorphic;
    cj["c"] = chains.holomorphic ? Json("inf") : Json(chains.c);
    emit_json(ws, "chains.json", cj);
}

void run_puzzle(Workspace& ws) {
    const auto& map = ws.get_map();
    const auto& tower = ws.get_tower();

    puzzles::BetaResult beta = puzzles::beta_fixed_point(tower, map.level);
    puzzles::Nest nest =
        puzzles::equipotential_nest(map, Complex(0, 0), ws.cfg.nest_depth);
    std::vector<std::vector<Complex>> curves;
    for (const auto& c : nest.levels) curves.push_back(c.pts);
    emit(ws, "nest.csv", io::curves_csv(curves));

    puzzles::Ray r0 = puzzles::polynomial_ray(ws.a, 0.0, ws.cfg.ray_steps);
    puzzles::Ray rh = puzzles::polynomial_ray(ws.a, 0.5, ws.cfg.ray_steps);
    std::vector<std::vector<Complex>> rays{r0.pts, rh.pts};
    emit(ws, "rays.csv", io::curves_csv(rays));

    dynamics::EscapeField field =
        dynamics::filled_julia(map, ws.cfg.grid, ws.cfg.max_iter, ws.cfg.threads);
    emit(ws, "puzzle.ppm", io::escape_ppm_overlay(field, curves));

    // off-axis samples from the non-real periodic points
    std::vector<Complex> samples;
    for (int p = 3; p <= 6 && static_cast<int>(samples.size()) < ws.cfg.corpus; ++p) {
        auto pts = dynamics::find_periodic(map, p);
        for (const auto& pt : pts)
            if (!pt.real_point && std::abs(pt.z.imag()) > 0.02 &&
                static_cast<int>(samples.size()) < ws.cfg.corpus)
                samples.push_back(pt.z);
    }
    puzzles::ShrinkTable shrink =
        puzzles::shrinking_diagnostic(map, samples, ws.cfg.nest_depth);

    puzzles::ConjugacyReport conj =
        puzzles::conjugacy_evidence(map, ws.a, ws.cfg.conjugacy_length);

    Json j;
    j["schema_version"] = io::kSchemaVersion;
    j["beta"] = beta.x;
    j["beta_multiplier"] = beta.multiplier;
    Json nj = Json::array();
    for (const auto& c : nest.levels) {
        Json row;
        row["diam_euclid"] = c.diam_euclid;
        row["diam_hyp"] = std::isfinite(c.diam_hyp) ? Json(c.diam_hyp) : Json("inf");
        nj.push_back(std::move(row));
    }
    j["nest"] = std::move(nj);
    j["ray0_landed"] = r0.landed;
    j["ray0_landing"] = {r0.landing_point.real(), r0.landing_point.imag()};
    j["ray_half_landed"] = rh.landed;
    j["ray_half_landing"] = {rh.landing_point.real(), rh.landing_point.imag()};
    Json sj = Json::array();
    for (const auto& row : shrink.rows) {
        Json srow;
        srow["z"] = {row.z.real(), row.z.imag()};
        srow["ok"] = row.ok;
        srow["fitted_ratio"] = row.fitted_ratio;
        if (!row.ok) srow["reason"] = row.reason;
        sj.push_back(std::move(srow));
    }
    j["shrinking"] = std::move(sj);
    j["shrinking_failed"] = shrink.failed;
    j["conjugacy_length"] = conj.length;
    j["conjugacy_first_disagreement"] = conj.first_disagreement;
    emit_json(ws, "puzzle.json", j);
    ws.log << "puzzle: beta = " << io::format_double(beta.x) << ", conjugacy "
           << (conj.first_disagreement < 0 ? "agrees" : "disagrees") << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ahpl-lab: renormalization and asymptotically holomorphic dynamics"};
    app.require_subcommand(1);

    std::string config_path;
    ExperimentConfig cfg;
    std::string combinatorics_arg;

    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--out", cfg.out, "output directory");
    app.add_option("--seed", cfg.seed, "RNG seed");
    app.add_option("--threads", cfg.threads, "worker threads for grid sweeps");
    app.add_option("--a", cfg.a, "family parameter (overrides combinatorics)");
    app.add_option("--combinatorics", combinatorics_arg, "comma-separated period prefix");
    app.add_option("--d", cfg.family_d, "critical order (even)");
    app.add_option("--m", cfg.m, "truncation order of the extension");
    app.add_option("--depth", cfg.depth, "tower depth");
    app.add_option("--level", cfg.level, "tower level for complex-dynamics runs");
    app.add_option("--c-v", cfg.c_V, "V radius factor");
    app.add_option("--grid", cfg.grid, "escape-field resolution");
    app.add_option("--max-iter", cfg.max_iter, "escape-field iteration cap");
    app.add_option("--alpha", cfg.alpha, "control parameter alpha");
    app.add_option("--theta", cfg.theta, "control parameter theta");
    app.add_option("--n0", cfg.n0, "control parameter n0");
    app.add_option("--r", cfg.r, "smoothness order (0 = m+1)");
    app.add_option("--M", cfg.M, "control parameter M (0 = measured)");
    app.add_option("--delta", cfg.delta, "control parameter delta (0 = measured)");
    app.add_option("--corpus", cfg.corpus, "orbit/sample corpus size");
    app.add_option("--nest-depth", cfg.nest_depth, "nest and shrinking depth");
    app.add_option("--expansion-steps", cfg.expansion_steps, "orbit expansion steps");
    app.add_option("--conjugacy-length", cfg.conjugacy_length, "itinerary length");
    app.add_option("--perturb-eps", cfg.perturb_eps, "C^r-breaking perturbation size");
    app.add_option("--perturb-m", cfg.perturb_m, "perturbation exponent base");

    CLI::App* c_renorm = app.add_subcommand("renorm", "tower construction");
    CLI::App* c_bounds = app.add_subcommand("bounds", "real-bounds diagnostics");
    CLI::App* c_extend = app.add_subcommand("extend", "extension order report");
    CLI::App* c_julia = app.add_subcommand("julia", "escape-time field");
    CLI::App* c_exp = app.add_subcommand("expansion", "hyperbolic expansion sweep");
    CLI::App* c_cert = app.add_subcommand("certify", "controlled-map certificate");
    CLI::App* c_puzzle = app.add_subcommand("puzzle", "nests, rays, conjugacy evidence");
    CLI::App* c_all = app.add_subcommand("all", "run every stage");
    c_cert->add_flag("--threshold-only", cfg.threshold_only,
                     "evaluate only the smoothness threshold");
    for (CLI::App* sub : {c_renorm, c_bounds, c_extend, c_julia, c_exp, c_cert, c_puzzle, c_all})
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw ConfigError("cannot read config file " + config_path);
            Json j = Json::parse(in);
            ExperimentConfig file_cfg;
            apply_json(file_cfg, j);
            // command-line flags win over file values
            ExperimentConfig flag_cfg = cfg;
            cfg = file_cfg;
            for (const auto* opt : app.get_options()) {
                if (opt->count() == 0) continue;
                const std::string& name = opt->get_name();
                if (name == "--out") cfg.out = flag_cfg.out;
                else if (name == "--seed") cfg.seed = flag_cfg.seed;
                else if (name == "--threads") cfg.threads = flag_cfg.threads;
                else if (name == "--a") cfg.a = flag_cfg.a;
                else if (name == "--d") cfg.family_d = flag_cfg.family_d;
                else if (name == "--m") cfg.m = flag_cfg.m;
                else if (name == "--depth") cfg.depth = flag_cfg.depth;
                else if (name == "--level") cfg.level = flag_cfg.level;
                else if (name == "--c-v") cfg.c_V = flag_cfg.c_V;
                else if (name == "--grid") cfg.grid = flag_cfg.grid;
                else if (name == "--max-iter") cfg.max_iter = flag_cfg.max_iter;
                else if (name == "--alpha") cfg.alpha = flag_cfg.alpha;
                else if (name == "--theta") cfg.theta = flag_cfg.theta;
                else if (name == "--n0") cfg.n0 = flag_cfg.n0;
                else if (name == "--r") cfg.r = flag_cfg.r;
                else if (name == "--M") cfg.M = flag_cfg.M;
                else if (name == "--delta") cfg.delta = flag_cfg.delta;
                else if (name == "--corpus") cfg.corpus = flag_cfg.corpus;
                else if (name == "--nest-depth") cfg.nest_depth = flag_cfg.nest_depth;
                else if (name == "--expansion-steps") cfg.expansion_steps = flag_cfg.expansion_steps;
                else if (name == "--conjugacy-length") cfg.conjugacy_length = flag_cfg.conjugacy_length;
                else if (name == "--perturb-eps") cfg.perturb_eps = flag_cfg.perturb_eps;
                else if (name == "--perturb-m") cfg.perturb_m = flag_cfg.perturb_m;
            }
        }
        if (!combinatorics_arg.empty()) {
            cfg.combinatorics.clear();
            std::stringstream ss(combinatorics_arg);
            std::string tok;
            while (std::getline(ss, tok, ',')) cfg.combinatorics.push_back(std::stoi(tok));
            cfg.a = 0.0;
        }
        validate(cfg);

        Workspace ws(cfg);
        if (c_renorm->parsed()) run_renorm(ws);
        if (c_bounds->parsed()) run_bounds(ws);
        if (c_extend->parsed()) run_extend(ws);
        if (c_julia->parsed()) run_julia(ws);
        if (c_exp->parsed()) run_expansion(ws);
        if (c_cert->parsed()) run_certify(ws);
        if (c_puzzle->parsed()) run_puzzle(ws);
        if (c_all->parsed()) {
            run_renorm(ws);
            run_bounds(ws);
            run_extend(ws);
            run_julia(ws);
            run_expansion(ws);
            run_certify(ws);
            run_puzzle(ws);
        }
        finish(ws);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
