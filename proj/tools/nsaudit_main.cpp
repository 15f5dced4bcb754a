/// @file
/// @brief Command-line front end: claim audits, the reference solver,
/// streamtube extraction, and one-shot formula evaluation.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "nsaudit/analytic_flows.hpp"
#include "nsaudit/audit.hpp"
#include "nsaudit/config.hpp"
#include "nsaudit/density.hpp"
#include "nsaudit/errors.hpp"
#include "nsaudit/parametric.hpp"
#include "nsaudit/solver.hpp"
#include "nsaudit/version.hpp"

namespace {

using namespace nsaudit;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string vec_str(const Vec3& v) {
    return "(" + fmt17(v.x) + ", " + fmt17(v.y) + ", " + fmt17(v.z) + ")";
}

Vec3 parse_vec(const std::string& raw, const std::string& what) {
    std::string scrubbed = raw;
    for (char& c : scrubbed)
        if (c == ',' || c == '(' || c == ')') c = ' ';
    std::istringstream is(scrubbed);
    Vec3 v{};
    if (!(is >> v.x >> v.y))
        throw ConfigError(what + ": cannot parse vector '" + raw + "'");
    if (is >> v.z) { // z present: nothing may follow
        std::string rest;
        if (is >> rest) throw ConfigError(what + ": trailing junk in vector '" + raw + "'");
    } else {
        v.z = 0.0; // 2-component input
    }
    return v;
}

struct AuditCli {
    std::string group;
    std::string config_path;
    std::string out_dir = "audit_out";
    int grid = 0;
    int refinements = 3;
    double thr_rho_l = 1e-9;
    double thr_rho_s = 1e-9;
    double thr_stop = 1e-6;
};

int run_audit(const AuditCli& cli, const CLI::App* sub) {
    AuditOptions opt;
    if (!cli.config_path.empty()) {
        opt.config = Config::load(cli.config_path);
        validate_config_keys(opt.config);
    }
    auto pick_int = [&](int flag_value, const char* flag, const char* key, int fallback) {
        if (sub->count(flag) > 0) return flag_value;
        return opt.config.has(key) ? opt.config.get_int(key) : fallback;
    };
    auto pick_double = [&](double flag_value, const char* flag, const char* key,
                           double fallback) {
        if (sub->count(flag) > 0) return flag_value;
        return opt.config.has(key) ? opt.config.get_double(key) : fallback;
    };
    opt.grid = pick_int(cli.grid, "--grid", "audit.grid", 0);
    opt.refinements = pick_int(cli.refinements, "--refinements", "audit.refinements", 3);
    opt.thresholds.rho_L =
        pick_double(cli.thr_rho_l, "--threshold-rho-l", "audit.rho_l_threshold", 1e-9);
    opt.thresholds.rho_S =
        pick_double(cli.thr_rho_s, "--threshold-rho-s", "audit.rho_s_threshold", 1e-9);
    opt.stop_threshold =
        pick_double(cli.thr_stop, "--threshold-stop", "audit.stop_threshold", 1e-6);
    opt.out_dir = cli.out_dir;

    std::vector<ClaimResult> results;
    if (cli.group == "all") results = audit_all(opt);
    else if (cli.group == "foundations") results = audit_foundations(opt);
    else if (cli.group == "theorem1") results = audit_theorem1(opt);
    else if (cli.group == "vector-line") results = audit_vector_line(opt);
    else if (cli.group == "poiseuille") results = audit_poiseuille(opt);
    else if (cli.group == "decay") results = audit_decay(opt);
    else if (cli.group == "eq12") results = audit_eq12(opt);
    else throw ConfigError("unknown audit group '" + cli.group + "'");

    render_report(results, opt.out_dir, opt.config);
    for (const auto& r : results)
        std::cout << r.id << ": " << to_string(r.verdict)
                  << "  (residual " << fmt17(r.residual.max_abs) << ")\n";
    std::cout << results.size() << " claim(s) audited; report in " << opt.out_dir
              << "/report.json\n";
    return 0; // every claim produced a verdict (FAILS included)
}

struct SimulateCli {
    std::string config_path;
    std::string flow_case = "taylor-green";
    std::string out_dir = "sim_out";
    int nx = 64;
    int ny = 0;
    double nu = -1.0;
    double rho = 1.0;
    double dt = 0.0;
    double t_end = 1.0;
    double forcing_x = 0.0;
    int sample_every = 1;
};

int run_simulate(const SimulateCli& cli, const CLI::App* sub) {
    Config cfg;
    if (!cli.config_path.empty()) {
        cfg = Config::load(cli.config_path);
        validate_config_keys(cfg);
    }
    auto pick_str = [&](const std::string& v, const char* flag, const char* key,
                        const std::string& fb) {
        if (sub->count(flag) > 0) return v;
        return cfg.has(key) ? cfg.get_string(key) : fb;
    };
    auto pick_int = [&](int v, const char* flag, const char* key, int fb) {
        if (sub->count(flag) > 0) return v;
        return cfg.has(key) ? cfg.get_int(key) : fb;
    };
    auto pick_double = [&](double v, const char* flag, const char* key, double fb) {
        if (sub->count(flag) > 0) return v;
        return cfg.has(key) ? cfg.get_double(key) : fb;
    };

    const std::string flow_case = pick_str(cli.flow_case, "--case", "sim.case", "taylor-green");
    SolverConfig sc;
    VectorField u0;
    const int nx = pick_int(cli.nx, "--nx", "sim.nx", 64);
    sc.rho = pick_double(cli.rho, "--rho", "sim.rho", 1.0);

    if (flow_case == "taylor-green") {
        sc.grid = taylor_green_grid(nx);
        sc.nu = pick_double(cli.nu, "--nu", "sim.nu", 0.1);
        sc.bc = FlowBC::doubly_periodic;
        TaylorGreenParams tg{sc.nu, cfg.get_double("sim.amplitude", 1.0)};
        u0 = taylor_green(tg, 0.0, sc.grid);
    } else if (flow_case == "channel") {
        const int ny = pick_int(cli.ny, "--ny", "sim.ny", 33);
        sc.grid = channel_grid(nx, ny, cfg.get_double("sim.length_x", 1.0),
                               cfg.get_double("sim.half_height", 1.0));
        sc.nu = pick_double(cli.nu, "--nu", "sim.nu", 1.0);
        sc.bc = FlowBC::channel;
        sc.forcing.x = pick_double(cli.forcing_x, "--forcing-x", "sim.forcing_x", 1.0);
        u0 = VectorField(sc.grid, "m/s");
    } else {
        throw ConfigError("unknown sim case '" + flow_case + "' (taylor-green|channel)");
    }
    if (cfg.has("sim.forcing_y")) sc.forcing.y = cfg.get_double("sim.forcing_y");
    sc.poisson_tol = cfg.get_double("sim.poisson_tol", sc.poisson_tol);
    sc.poisson_max_iters = cfg.get_int("sim.poisson_max_iters", sc.poisson_max_iters);

    // Default dt: 90% of the tighter of the advective and viscous limits,
    // using the larger of the initial speed and the forced steady estimate.
    const double hx = sc.grid.spacing[0], hy = sc.grid.spacing[1];
    double u_ref = u0.max_norm();
    if (sc.bc == FlowBC::channel) {
        const double R = 0.5 * sc.grid.extent(1);
        u_ref = std::max(u_ref, sc.forcing.x * R * R / (2.0 * sc.nu * sc.rho));
    }
    double dt = pick_double(cli.dt, "--dt", "sim.dt", 0.0);
    if (dt <= 0.0) {
        dt = 1.0 / (2.0 * sc.nu * (1.0 / (hx * hx) + 1.0 / (hy * hy)));
        if (u_ref > 0.0) dt = std::min(dt, 0.5 * std::min(hx, hy) / u_ref);
        dt *= 0.9;
    }
    sc.dt = dt;

    SolverState s = make_state(sc, u0);
    RunOptions ro;
    ro.t_end = pick_double(cli.t_end, "--t-end", "sim.t_end", 1.0);
    ro.sample_every = pick_int(cli.sample_every, "--sample-every", "sim.sample_every", 1);
    const TimeSeries ts = run(s, sc, ro);

    std::filesystem::create_directories(cli.out_dir);
    write_series_csv_file(cli.out_dir + "/series.csv", ts);
    save_state(cli.out_dir + "/final", s);
    std::cout << "case " << flow_case << ", grid " << sc.grid.dims[0] << "x" << sc.grid.dims[1]
              << ", dt " << fmt17(sc.dt) << ", " << s.step_count << " steps to t "
              << fmt17(s.t) << "\n";
    std::cout << "final energy " << fmt17(ts.energy.back()) << ", max speed "
              << fmt17(ts.max_speed.back()) << ", max |div u| "
              << fmt17(max_divergence(s)) << "\n";
    std::cout << "wrote " << cli.out_dir << "/series.csv and " << cli.out_dir
              << "/final_{u,p,meta}\n";
    return 0;
}

struct TubeCli {
    std::string config_path;
    std::string velocity_path;
    std::string out_dir = "tube_out";
    std::vector<std::string> seed_strs;
    double rho = 1.0;
    double flux = 0.01;
    double step = 0.0;
};

int run_tube_extract(const TubeCli& cli, const CLI::App* sub) {
    Config cfg;
    if (!cli.config_path.empty()) {
        cfg = Config::load(cli.config_path);
        validate_config_keys(cfg);
    }
    VectorField v;
    if (!cli.velocity_path.empty()) {
        Snapshot snap = read_snapshot_file(cli.velocity_path);
        if (!snap.is_vector) throw ConfigError("'" + cli.velocity_path + "' is not a vector field");
        v = std::move(snap.vector);
        std::cout << "loaded field '" << snap.name << "' on grid " << v.grid().dims[0] << "x"
                  << v.grid().dims[1] << "\n";
    } else {
        // Built-in fixture: converging radial flow toward a sink outside
        // the unit square.
        RadialFlowParams par;
        par.center = {-0.25, 0.5, 0.0};
        par.strength = -0.05;
        v = radial_flow(par, clamped_box({128, 128}, {1.0, 1.0}, {0.0, 0.0}));
        std::cout << "using built-in converging radial flow on 128x128\n";
    }

    std::vector<Vec3> seeds;
    for (const auto& s : cli.seed_strs) seeds.push_back(parse_vec(s, "--seed"));
    if (seeds.empty()) seeds = {{0.9, 0.30, 0.0}, {0.9, 0.50, 0.0}, {0.9, 0.68, 0.0}};

    TubeExtractionOptions topt;
    topt.step = sub->count("--step") > 0 ? cli.step : cfg.get_double("tube.step", 0.0);
    topt.max_steps = cfg.get_int("tube.max_steps", topt.max_steps);
    topt.stagnation_speed = cfg.get_double("tube.stagnation_speed", topt.stagnation_speed);
    topt.div_tolerance = cfg.get_double("tube.div_tolerance", topt.div_tolerance);
    const double rho = sub->count("--rho") > 0 ? cli.rho : cfg.get_double("tube.rho", 1.0);
    const double flux = sub->count("--flux") > 0 ? cli.flux : cfg.get_double("tube.flux", 0.01);

    const auto tubes = extract_density_structure(v, rho, seeds, flux, topt);
    std::filesystem::create_directories(cli.out_dir);
    for (std::size_t t = 0; t < tubes.size(); ++t) {
        const std::string path = cli.out_dir + "/tube_" + std::to_string(t) + ".csv";
        write_tube_csv_file(path, tubes[t]);
        std::cout << "tube " << t << ": " << tubes[t].stations.size() << " stations, length "
                  << fmt17(tubes[t].arclength()) << ", carried mass "
                  << fmt17(tubes[t].carried_mass) << ", ended by "
                  << to_string(tubes[t].termination) << " -> " << path << "\n";
    }
    return 0;
}

struct EvalCli {
    std::string config_path;
    double omega0 = 1.0;
    double pressure_drop = 0.0;
    double segment_length = 1.0;
    std::string theta1 = "0,0,0";
    std::string theta2 = "0.5,0,0";
    double vartheta = 0.0;
    std::string mu_rot = "0,0,0";
    std::string theta3 = "0,0,0";
    std::string rho_l = "1,0,0";
    double rho_s = 1.0;
    double rho = 1.0;
    double thr_rho_l = 1e-9;
    double thr_rho_s = 1e-9;
};

int run_eval(const EvalCli& cli, const CLI::App* sub) {
    Config cfg;
    if (!cli.config_path.empty()) {
        cfg = Config::load(cli.config_path);
        validate_config_keys(cfg);
    }
    auto pick_double = [&](double v, const char* flag, const char* key, double fb) {
        if (sub->count(flag) > 0) return v;
        return cfg.has(key) ? cfg.get_double(key) : fb;
    };
    auto pick_vec = [&](const std::string& v, const char* flag, const char* key,
                        const Vec3& fb) {
        if (sub->count(flag) > 0) return parse_vec(v, flag);
        return cfg.has(key) ? cfg.get_vec3(key) : fb;
    };

    SolutionParams p;
    p.omega0 = pick_double(cli.omega0, "--omega0", "eq12.omega0", 1.0);
    p.pressure_drop = pick_double(cli.pressure_drop, "--pressure-drop", "eq12.pressure_drop", 0.0);
    p.segment_length =
        pick_double(cli.segment_length, "--segment-length", "eq12.segment_length", 1.0);
    p.theta1 = pick_vec(cli.theta1, "--theta1", "eq12.theta1", {0.0, 0.0, 0.0});
    p.theta2 = pick_vec(cli.theta2, "--theta2", "eq12.theta2", {0.5, 0.0, 0.0});
    p.vartheta = pick_double(cli.vartheta, "--vartheta", "eq12.vartheta", 0.0);
    p.mu_rot = pick_vec(cli.mu_rot, "--mu-rot", "eq12.mu_rot", {0.0, 0.0, 0.0});
    p.theta3 = pick_vec(cli.theta3, "--theta3", "eq12.theta3", {0.0, 0.0, 0.0});
    p.validate();

    DensityStructure ds;
    ds.rho_L = pick_vec(cli.rho_l, "--rho-l", "eq12.rho_l", {1.0, 0.0, 0.0});
    ds.rho_S = pick_double(cli.rho_s, "--rho-s", "eq12.rho_s", 1.0);
    ds.rho = pick_double(cli.rho, "--rho", "eq12.rho", 1.0);

    RegimeThresholds thr;
    thr.rho_L = pick_double(cli.thr_rho_l, "--threshold-rho-l", "eq12.rho_l_threshold", 1e-9);
    thr.rho_S = pick_double(cli.thr_rho_s, "--threshold-rho-s", "eq12.rho_s_threshold", 1e-9);

    const RegimeVerdict rv = classify_regime(ds, thr);
    std::cout << "regime: " << to_string(rv.regime);
    if (!rv.offending_quantity.empty())
        std::cout << " (" << rv.offending_quantity << " = " << fmt17(rv.value) << ")";
    std::cout << "\n";

    try {
        const Vec3 u = evaluate_velocity(p, ds, thr);
        const SplitVelocity sv = split_velocity(p, ds, thr);
        const VelocityTerms terms = velocity_terms(p, ds, thr);
        std::cout << "u       = " << vec_str(u) << " m/s\n";
        std::cout << "u_L     = " << vec_str(sv.u_L) << " (density-driven part)\n";
        std::cout << "u_0     = " << vec_str(sv.u_0) << " (pressure-change drift)\n";
        std::cout << "taper   = " << vec_str(terms.taper) << "\n";
        std::cout << "cross   = " << vec_str(terms.cross) << "\n";
        std::cout << "viscous = " << vec_str(terms.viscous) << "\n";
        std::cout << "drift   = " << vec_str(terms.drift) << "\n";
    } catch (const SingularityError& e) {
        std::cout << "velocity undefined here: " << e.what() << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string(nsaudit::kToolkitName) +
                 " — numerical audits of a claimed parametric solution of "
                 "incompressible flow"};
    app.set_version_flag("--version", std::string(nsaudit::kToolkitVersion));
    app.require_subcommand(1);

    AuditCli acli;
    auto* audit = app.add_subcommand("audit", "run a claim group and write a report");
    audit->add_option("group", acli.group, "all|foundations|theorem1|vector-line|poiseuille|decay|eq12")
        ->required()
        ->check(CLI::IsMember({"all", "foundations", "theorem1", "vector-line", "poiseuille",
                               "decay", "eq12"}));
    audit->add_option("--config", acli.config_path, "config file (key = value lines)");
    audit->add_option("--grid", acli.grid, "base grid resolution override");
    audit->add_option("--refinements", acli.refinements, "levels in refinement studies (2-4)");
    audit->add_option("--out", acli.out_dir, "report directory (default audit_out)");
    audit->add_option("--threshold-rho-l", acli.thr_rho_l, "mass/length regime threshold");
    audit->add_option("--threshold-rho-s", acli.thr_rho_s, "mass/area regime threshold");
    audit->add_option("--threshold-stop", acli.thr_stop, "decay stop threshold (energy fraction)");

    SimulateCli scli;
    auto* sim = app.add_subcommand("simulate", "run the reference flow solver");
    sim->add_option("--config", scli.config_path, "config file (sim.* keys)");
    sim->add_option("--case", scli.flow_case, "taylor-green|channel");
    sim->add_option("--nx", scli.nx, "nodes along x");
    sim->add_option("--ny", scli.ny, "nodes along y (channel)");
    sim->add_option("--nu", scli.nu, "kinematic viscosity");
    sim->add_option("--rho", scli.rho, "density");
    sim->add_option("--dt", scli.dt, "time step (default: 90% of stability limit)");
    sim->add_option("--t-end", scli.t_end, "end time");
    sim->add_option("--forcing-x", scli.forcing_x, "body force per unit mass (channel)");
    sim->add_option("--sample-every", scli.sample_every, "record every k-th step");
    sim->add_option("--out", scli.out_dir, "output directory (default sim_out)");

    TubeCli tcli;
    auto* tube = app.add_subcommand("tube-extract", "trace streamtubes and their densities");
    tube->add_option("--config", tcli.config_path, "config file (tube.* keys)");
    tube->add_option("--velocity", tcli.velocity_path,
                     "velocity snapshot file (default: built-in radial flow)");
    tube->add_option("--seed", tcli.seed_strs, "seed point 'x,y[,z]' (repeatable)");
    tube->add_option("--rho", tcli.rho, "bulk density");
    tube->add_option("--flux", tcli.flux, "volumetric flux carried per tube");
    tube->add_option("--step", tcli.step, "arclength step (default: half a cell)");
    tube->add_option("--out", tcli.out_dir, "output directory (default tube_out)");

    EvalCli ecli;
    auto* ev = app.add_subcommand("eval-eq12", "evaluate the parametric velocity formula once");
    ev->add_option("--config", ecli.config_path, "config file (eq12.* keys)");
    ev->add_option("--omega0", ecli.omega0, "natural frequency");
    ev->add_option("--pressure-drop", ecli.pressure_drop, "pressure drop over the segment");
    ev->add_option("--segment-length", ecli.segment_length, "segment length");
    ev->add_option("--theta1", ecli.theta1, "tube taper vector 'x,y,z'");
    ev->add_option("--theta2", ecli.theta2, "tube direction vector (|.|=1/2)");
    ev->add_option("--vartheta", ecli.vartheta, "kinematic viscosity");
    ev->add_option("--mu-rot", ecli.mu_rot, "vortex-viscosity vector");
    ev->add_option("--theta3", ecli.theta3, "pressure-change drift velocity");
    ev->add_option("--rho-l", ecli.rho_l, "mass-per-length vector");
    ev->add_option("--rho-s", ecli.rho_s, "mass-per-area");
    ev->add_option("--rho", ecli.rho, "bulk density");
    ev->add_option("--threshold-rho-l", ecli.thr_rho_l, "mass/length regime threshold");
    ev->add_option("--threshold-rho-s", ecli.thr_rho_s, "mass/area regime threshold");

    CLI11_PARSE(app, argc, argv);

    try {
        if (audit->parsed()) return run_audit(acli, audit);
        if (sim->parsed()) return run_simulate(scli, sim);
        if (tube->parsed()) return run_tube_extract(tcli, tube);
        if (ev->parsed()) return run_eval(ecli, ev);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
