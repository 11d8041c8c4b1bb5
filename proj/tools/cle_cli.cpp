#include <cstdint>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cle/cle.h"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerifyFailed = 2;

struct SigmaOpts {
    double a = 1.0;
    double b = 1.0;
    double c = 0.0;
};

void add_sigma(CLI::App* cmd, SigmaOpts& s) {
    cmd->add_option("--a", s.a, "Variance rate of the real driver component")
        ->capture_default_str();
    cmd->add_option("--b", s.b, "Variance rate of the imaginary driver component")
        ->capture_default_str();
    cmd->add_option("--c", s.c, "Covariance rate between the components")
        ->capture_default_str();
}

int fail(const std::string& what) {
    std::cerr << "error: " << what << ": " << cle_last_error() << '\n';
    return kExitUsage;
}

json sigma_json(const SigmaOpts& s) {
    return json{{"a", s.a}, {"b", s.b}, {"c", s.c}};
}

void emit(const json& doc, const std::string& out) {
    if (out.empty() || out == "-") {
        std::cout << doc.dump(2) << '\n';
        return;
    }
    FILE* f = std::fopen(out.c_str(), "w");
    if (!f) throw CLI::ValidationError("--out", "cannot open " + out);
    const std::string text = doc.dump(2);
    std::fwrite(text.data(), 1, text.size(), f);
    std::fputc('\n', f);
    std::fclose(f);
}

struct PathHandle {
    cle_path* p = nullptr;
    ~PathHandle() { cle_path_free(p); }
};
struct CloudHandle {
    cle_cloud* c = nullptr;
    ~CloudHandle() { cle_cloud_free(c); }
};
struct DensityHandle {
    cle_density* d = nullptr;
    ~DensityHandle() { cle_density_free(d); }
};
struct ScanHandle {
    cle_scan* s = nullptr;
    ~ScanHandle() { cle_scan_free(s); }
};

/* ---- simulate ---- */

struct SimulateOpts {
    SigmaOpts sigma;
    std::size_t n = 1000;
    double horizon = 1.0;
    double eps = 0.05;
    std::uint64_t seed = 1;
    std::string side = "left";
    int threads = 1;
    std::string out = "hull.csv";
    std::string svg;
    std::string save_path;
    std::string load_path;
};

int run_simulate(const SimulateOpts& o) {
    PathHandle path;
    if (!o.load_path.empty()) {
        path.p = cle_path_read_binary(o.load_path.c_str());
        if (!path.p) return fail("reading " + o.load_path);
    } else {
        path.p = cle_path_sample(o.sigma.a, o.sigma.b, o.sigma.c, o.n, o.horizon, o.seed);
        if (!path.p) return fail("sampling driving path");
    }
    if (!o.save_path.empty() &&
        cle_path_write_binary(path.p, o.save_path.c_str()) != CLE_OK)
        return fail("writing " + o.save_path);

    CloudHandle cloud;
    cloud.c = o.side == "right" ? cle_cloud_right(path.p, o.eps, o.threads)
                                : cle_cloud_left(path.p, o.eps, o.threads);
    if (!cloud.c) return fail("building hull cloud");
    if (cle_cloud_write_csv(cloud.c, o.out.c_str()) != CLE_OK)
        return fail("writing " + o.out);
    if (!o.svg.empty() && cle_cloud_write_svg(cloud.c, o.svg.c_str()) != CLE_OK)
        return fail("writing " + o.svg);
    std::cerr << "wrote " << o.out << " (" << cle_cloud_size(cloud.c) << " points, "
              << cle_cloud_dropped(cloud.c) << " dropped)\n";
    return kExitOk;
}

/* ---- density ---- */

struct DensityOpts {
    SigmaOpts sigma;
    std::size_t grid = 2048;
    std::string out = "density.csv";
};

int run_density(const DensityOpts& o) {
    DensityHandle d;
    d.d = cle_density_build(o.sigma.a, o.sigma.b, o.sigma.c, o.grid);
    if (!d.d) return fail("building stationary density");
    if (cle_density_write_csv(d.d, o.out.c_str()) != CLE_OK) return fail("writing " + o.out);
    std::cerr << "wrote " << o.out << " (method=" << cle_density_method(d.d) << ")\n";
    return kExitOk;
}

/* ---- phases ---- */

struct PhasesOpts {
    SigmaOpts sigma;
    std::size_t grid = 2048;
    std::string out;  // empty: stdout
};

int run_phases(const PhasesOpts& o) {
    cle_phase_report rep;
    if (cle_classify(o.sigma.a, o.sigma.b, o.sigma.c, o.grid, &rep) != CLE_OK)
        return fail("classifying");
    json doc{{"sigma", sigma_json(o.sigma)},
             {"grid", o.grid},
             {"one", rep.one},
             {"two", rep.two},
             {"err_one", rep.err_one},
             {"err_two", rep.err_two},
             {"zero_tol", rep.zero_tol},
             {"label", cle_phase_name(rep.phase)}};
    emit(doc, o.out);
    return kExitOk;
}

/* ---- scan ---- */

struct ScanOpts {
    double c = 0.0;
    std::string a_range = "0:12";
    std::string b_range = "0:8";
    double res = 0.25;
    std::size_t grid = 512;
    std::string out = "scan.csv";
    std::string boundary_out = "boundary.csv";
};

bool parse_range(const std::string& text, double& lo, double& hi) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) return false;
    try {
        lo = std::stod(text.substr(0, colon));
        hi = std::stod(text.substr(colon + 1));
    } catch (...) {
        return false;
    }
    return hi > lo;
}

int run_scan(const ScanOpts& o) {
    double a_lo = 0.0, a_hi = 0.0, b_lo = 0.0, b_hi = 0.0;
    if (!parse_range(o.a_range, a_lo, a_hi) || !parse_range(o.b_range, b_lo, b_hi)) {
        std::cerr << "error: ranges must be lo:hi with hi > lo\n";
        return kExitUsage;
    }
    if (!(o.res > 0.0)) {
        std::cerr << "error: --res must be positive\n";
        return kExitUsage;
    }
    const auto count = [&](double lo, double hi) {
        return static_cast<std::size_t>((hi - lo) / o.res + 1e-9) + 1;
    };
    const std::size_t na = count(a_lo, a_hi), nb = count(b_lo, b_hi);
    ScanHandle scan;
    scan.s = cle_phase_scan(a_lo, a_lo + o.res * static_cast<double>(na - 1), na, b_lo,
                            b_lo + o.res * static_cast<double>(nb - 1), nb, o.c, o.grid);
    if (!scan.s) return fail("scanning");
    if (cle_scan_write_grid_csv(scan.s, o.out.c_str()) != CLE_OK)
        return fail("writing " + o.out);
    if (cle_scan_write_boundary_csv(scan.s, o.boundary_out.c_str()) != CLE_OK)
        return fail("writing " + o.boundary_out);
    std::cerr << "wrote " << o.out << " and " << o.boundary_out << " (" << na << "x" << nb
              << " cells)\n";
    return kExitOk;
}

/* ---- verify ---- */

struct VerifyDriftOpts {
    SigmaOpts sigma{6.0, 1.0, 0.0};
    std::size_t paths = 2000;
    double t_end = 3.0;
    double h = 1e-3;
    std::uint64_t seed = 1;
    std::string out;
};

int run_verify_drift(const VerifyDriftOpts& o) {
    cle_drift_report logmod, logderiv;
    if (cle_verify_drift_logmod(o.sigma.a, o.sigma.b, o.sigma.c, o.paths, o.t_end, o.h,
                                o.seed, &logmod) != CLE_OK)
        return fail("drift logmod");
    if (cle_verify_drift_logderiv(o.sigma.a, o.sigma.b, o.sigma.c, o.paths, o.t_end, o.h,
                                  o.seed, &logderiv) != CLE_OK)
        return fail("drift logderiv");
    const bool pass = logmod.pass && logderiv.pass;
    const auto one = [](const cle_drift_report& r) {
        return json{{"mean", r.mean},
                    {"se", r.se},
                    {"reference", r.reference},
                    {"pass", r.pass != 0}};
    };
    json doc{{"check", "drift"},
             {"sigma", sigma_json(o.sigma)},
             {"paths", o.paths},
             {"t_end", o.t_end},
             {"h", o.h},
             {"seed", o.seed},
             {"logmod", one(logmod)},
             {"logderiv", one(logderiv)},
             {"pass", pass}};
    emit(doc, o.out);
    return pass ? kExitOk : kExitVerifyFailed;
}

struct VerifyStationarityOpts {
    SigmaOpts sigma{2.0, 1.0, 0.5};
    std::size_t paths = 5000;
    std::vector<double> checkpoints{1.0, 2.0};
    double h = 1e-3;
    std::uint64_t seed = 1;
    std::string out;
};

int run_verify_stationarity(const VerifyStationarityOpts& o) {
    std::vector<double> ks(o.checkpoints.size(), 0.0);
    double critical = 0.0, slack = 0.0;
    int pass = 0;
    if (cle_verify_stationarity(o.sigma.a, o.sigma.b, o.sigma.c, o.paths,
                                o.checkpoints.data(), o.checkpoints.size(), o.h, o.seed,
                                ks.data(), &critical, &slack, &pass) != CLE_OK)
        return fail("stationarity");
    json doc{{"check", "stationarity"},
             {"sigma", sigma_json(o.sigma)},
             {"paths", o.paths},
             {"h", o.h},
             {"seed", o.seed},
             {"checkpoints", o.checkpoints},
             {"ks", ks},
             {"critical", critical},
             {"slack", slack},
             {"pass", pass != 0}};
    emit(doc, o.out);
    return pass ? kExitOk : kExitVerifyFailed;
}

struct VerifyDualityOpts {
    SigmaOpts sigma{1.0, 4.0, 0.0};
    std::size_t hulls = 200;
    std::size_t n = 2000;
    double horizon = 1.0;
    double eps = 0.05;
    std::string statistic = "max_modulus";
    std::uint64_t seed = 1;
    int threads = 1;
    bool no_retry = false;
    std::string out;
};

int run_verify_duality(const VerifyDualityOpts& o) {
    int stat = CLE_STAT_MAX_MODULUS;
    if (o.statistic == "real_extent") stat = CLE_STAT_REAL_EXTENT;
    else if (o.statistic == "imag_extent") stat = CLE_STAT_IMAG_EXTENT;
    else if (o.statistic != "max_modulus") {
        std::cerr << "error: --stat must be max_modulus, real_extent, or imag_extent\n";
        return kExitUsage;
    }
    cle_duality_report rep;
    if (cle_verify_duality(o.sigma.a, o.sigma.b, o.sigma.c, o.hulls, o.n, o.horizon, o.eps,
                           stat, o.seed, o.threads, o.no_retry ? 0 : 1, &rep) != CLE_OK)
        return fail("duality");
    json doc{{"check", "duality"},
             {"sigma", sigma_json(o.sigma)},
             {"hulls", o.hulls},
             {"n", o.n},
             {"horizon", o.horizon},
             {"epsilon", o.eps},
             {"statistic", o.statistic},
             {"seed", o.seed},
             {"ks", rep.ks},
             {"p_value", rep.p_value},
             {"threshold", rep.threshold},
             {"retried", rep.retried != 0},
             {"pass", rep.pass != 0}};
    emit(doc, o.out);
    return rep.pass ? kExitOk : kExitVerifyFailed;
}

struct VerifyDisconnectOpts {
    SigmaOpts sigma{1.0, 1.0, 0.0};
    std::size_t n = 25000;
    double horizon = 2.0;
    double eps = 0.02;
    std::size_t seeds = 20;
    std::uint64_t seed = 1;
    double cell = 0.025;
    double dilation = 0.05;
    double min_fraction = 0.5;
    int threads = 1;
    std::string out;
};

int run_verify_disconnect(const VerifyDisconnectOpts& o) {
    std::vector<std::size_t> enclosed;
    std::size_t hits = 0;
    for (std::size_t k = 0; k < o.seeds; ++k) {
        PathHandle path;
        path.p = cle_path_sample(o.sigma.a, o.sigma.b, o.sigma.c, o.n, o.horizon, o.seed + k);
        if (!path.p) return fail("sampling driving path");
        CloudHandle cloud;
        cloud.c = cle_cloud_left(path.p, o.eps, o.threads);
        if (!cloud.c) return fail("building hull cloud");
        cle_disconnection_report rep;
        if (cle_disconnect_probe(cloud.c, o.cell, o.dilation, &rep) != CLE_OK)
            return fail("disconnection probe");
        enclosed.push_back(rep.enclosed_cells);
        if (rep.enclosed_cells > 0) ++hits;
    }

    // Control: the zero driver grows a straight slit, which encloses nothing.
    std::vector<double> zeros(o.n, 0.0);
    PathHandle control_path;
    control_path.p = cle_path_from_increments(o.sigma.a, o.sigma.b, o.sigma.c, o.horizon,
                                              zeros.data(), zeros.data(), o.n, 0);
    if (!control_path.p) return fail("building control path");
    CloudHandle control_cloud;
    control_cloud.c = cle_cloud_left(control_path.p, o.eps, o.threads);
    if (!control_cloud.c) return fail("building control cloud");
    cle_disconnection_report control;
    if (cle_disconnect_probe(control_cloud.c, o.cell, o.dilation, &control) != CLE_OK)
        return fail("control disconnection probe");

    const double fraction =
        o.seeds == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(o.seeds);
    const bool pass = fraction >= o.min_fraction && control.enclosed_cells == 0;
    json doc{{"check", "disconnect"},
             {"sigma", sigma_json(o.sigma)},
             {"n", o.n},
             {"horizon", o.horizon},
             {"epsilon", o.eps},
             {"seeds", o.seeds},
             {"seed", o.seed},
             {"cell", o.cell},
             {"dilation", o.dilation},
             {"enclosed_cells", enclosed},
             {"fraction_with_enclosure", fraction},
             {"min_fraction", o.min_fraction},
             {"control_enclosed_cells", control.enclosed_cells},
             {"pass", pass}};
    emit(doc, o.out);
    return pass ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Loewner evolution driven by correlated complex Brownian motion"};
    // The Euler-step options spell themselves --h, so the help flag cannot own
    // the short -h. Subcommands copy this registration at creation.
    app.set_help_flag("--help", "Print this help message and exit");
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from a key = value file; flags override");

    SimulateOpts sim;
    auto* simulate = app.add_subcommand("simulate", "Sample a driver and emit a hull point cloud");
    add_sigma(simulate, sim.sigma);
    simulate->add_option("--n", sim.n, "Composition steps")->capture_default_str();
    simulate->add_option("--horizon", sim.horizon, "Capacity-time horizon")->capture_default_str();
    simulate->add_option("--eps", sim.eps, "Probe scale")->capture_default_str();
    simulate->add_option("--seed", sim.seed, "Master seed")->capture_default_str();
    simulate->add_option("--side", sim.side, "left or right hull")
        ->check(CLI::IsMember({"left", "right"}))
        ->capture_default_str();
    simulate->add_option("--threads", sim.threads, "Worker threads (result-independent)")
        ->capture_default_str();
    simulate->add_option("--out", sim.out, "Cloud CSV path")->capture_default_str();
    simulate->add_option("--svg", sim.svg, "Optional scatter SVG path");
    simulate->add_option("--save-path", sim.save_path, "Save the sampled driver (binary)");
    simulate->add_option("--load-path", sim.load_path,
                         "Replay a saved driver instead of sampling");

    DensityOpts den;
    auto* density = app.add_subcommand("density", "Tabulate the stationary angular density");
    add_sigma(density, den.sigma);
    density->add_option("--grid", den.grid, "Grid points per full period")->capture_default_str();
    density->add_option("--out", den.out, "Density CSV path")->capture_default_str();

    PhasesOpts ph;
    auto* phases = app.add_subcommand("phases", "Phase integrals and classification (JSON)");
    add_sigma(phases, ph.sigma);
    phases->add_option("--grid", ph.grid, "Density grid")->capture_default_str();
    phases->add_option("--out", ph.out, "JSON path (default: stdout)");

    ScanOpts sc;
    auto* scan = app.add_subcommand("scan", "Classify a grid in the (a, b) plane");
    scan->add_option("--c", sc.c, "Covariance rate")->capture_default_str();
    scan->add_option("--a-range", sc.a_range, "a range as lo:hi")->capture_default_str();
    scan->add_option("--b-range", sc.b_range, "b range as lo:hi")->capture_default_str();
    scan->add_option("--res", sc.res, "Grid resolution")->capture_default_str();
    scan->add_option("--grid", sc.grid, "Density grid per cell")->capture_default_str();
    scan->add_option("--out", sc.out, "Grid CSV path")->capture_default_str();
    scan->add_option("--boundary-out", sc.boundary_out, "Boundary CSV path")
        ->capture_default_str();

    auto* verify = app.add_subcommand("verify", "Monte-Carlo verification suites (JSON)");
    verify->require_subcommand(1);

    VerifyDriftOpts vd;
    auto* v_drift = verify->add_subcommand("drift", "Growth-rate identities for log|f|, log|f'/f|");
    add_sigma(v_drift, vd.sigma);
    v_drift->add_option("--paths", vd.paths, "Sample paths")->capture_default_str();
    v_drift->add_option("--t-end", vd.t_end, "Sigma-time endpoint")->capture_default_str();
    v_drift->add_option("--h", vd.h, "Euler step")->capture_default_str();
    v_drift->add_option("--seed", vd.seed, "Master seed")->capture_default_str();
    v_drift->add_option("--out", vd.out, "JSON path (default: stdout)");

    VerifyStationarityOpts vs;
    auto* v_stat = verify->add_subcommand("stationarity", "KS test of the angular density");
    add_sigma(v_stat, vs.sigma);
    v_stat->add_option("--paths", vs.paths, "Sample paths")->capture_default_str();
    v_stat->add_option("--checkpoints", vs.checkpoints, "Sigma-time checkpoints")
        ->delimiter(',')
        ->capture_default_str();
    v_stat->add_option("--h", vs.h, "Euler step")->capture_default_str();
    v_stat->add_option("--seed", vs.seed, "Master seed")->capture_default_str();
    v_stat->add_option("--out", vs.out, "JSON path (default: stdout)");

    VerifyDualityOpts vdu;
    auto* v_dual = verify->add_subcommand("duality", "Left/right hull duality (two-sample KS)");
    add_sigma(v_dual, vdu.sigma);
    v_dual->add_option("--hulls", vdu.hulls, "Hulls per side")->capture_default_str();
    v_dual->add_option("--n", vdu.n, "Composition steps per hull")->capture_default_str();
    v_dual->add_option("--horizon", vdu.horizon, "Capacity-time horizon")->capture_default_str();
    v_dual->add_option("--eps", vdu.eps, "Probe scale")->capture_default_str();
    v_dual->add_option("--stat", vdu.statistic,
                       "max_modulus, real_extent, or imag_extent")
        ->capture_default_str();
    v_dual->add_option("--seed", vdu.seed, "Master seed")->capture_default_str();
    v_dual->add_option("--threads", vdu.threads, "Worker threads")->capture_default_str();
    v_dual->add_flag("--no-retry", vdu.no_retry, "Disable the single-retry budget");
    v_dual->add_option("--out", vdu.out, "JSON path (default: stdout)");

    VerifyDisconnectOpts vdis;
    auto* v_dis = verify->add_subcommand("disconnect", "Enclosed-region probe on hull clouds");
    add_sigma(v_dis, vdis.sigma);
    v_dis->add_option("--n", vdis.n, "Composition steps")->capture_default_str();
    v_dis->add_option("--horizon", vdis.horizon, "Capacity-time horizon")->capture_default_str();
    v_dis->add_option("--eps", vdis.eps, "Probe scale")->capture_default_str();
    v_dis->add_option("--seeds", vdis.seeds, "Independent seeds to test")->capture_default_str();
    v_dis->add_option("--seed", vdis.seed, "Base seed")->capture_default_str();
    v_dis->add_option("--cell", vdis.cell, "Raster cell size")->capture_default_str();
    v_dis->add_option("--dilation", vdis.dilation, "Point dilation radius")
        ->capture_default_str();
    v_dis->add_option("--min-fraction", vdis.min_fraction,
                      "Required fraction of seeds with enclosures")
        ->capture_default_str();
    v_dis->add_option("--threads", vdis.threads, "Worker threads")->capture_default_str();
    v_dis->add_option("--out", vdis.out, "JSON path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (simulate->parsed()) return run_simulate(sim);
        if (density->parsed()) return run_density(den);
        if (phases->parsed()) return run_phases(ph);
        if (scan->parsed()) return run_scan(sc);
        if (verify->parsed()) {
            if (v_drift->parsed()) return run_verify_drift(vd);
            if (v_stat->parsed()) return run_verify_stationarity(vs);
            if (v_dual->parsed()) return run_verify_duality(vdu);
            if (v_dis->parsed()) return run_verify_disconnect(vdis);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
