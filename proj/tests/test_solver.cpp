/// @file
/// @brief Projection-solver tests: config validation, exact fixed points,
/// stability guard, divergence contract, energy decay against the
/// closed-form vortex array, wall handling, and bit-exact restarts.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <sstream>

#include "nsaudit/analytic_flows.hpp"
#include "nsaudit/errors.hpp"
#include "nsaudit/operators.hpp"
#include "nsaudit/solver.hpp"

using namespace nsaudit;

namespace {

const double kPi = 3.14159265358979323846;

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() &&
           std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

SolverConfig periodic_cfg(int n, double nu, double dt) {
    SolverConfig cfg;
    cfg.grid = taylor_green_grid(n);
    cfg.nu = nu;
    cfg.dt = dt;
    cfg.bc = FlowBC::doubly_periodic;
    return cfg;
}

void remove_state_files(const std::string& prefix) {
    std::remove((prefix + "_u.snap").c_str());
    std::remove((prefix + "_p.snap").c_str());
    std::remove((prefix + "_meta.txt").c_str());
}

} // namespace

TEST_CASE("solver config validation") {
    SolverConfig cfg = periodic_cfg(16, 0.1, 0.01);
    CHECK_NOTHROW(cfg.validate());

    SolverConfig bad = cfg;
    bad.dt = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = cfg;
    bad.grid = clamped_box({5, 5, 5}, {1.0, 1.0, 1.0}, {0.0, 0.0, 0.0});
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument); // 2D only

    bad = cfg;
    bad.bc = FlowBC::channel; // periodic y boundary contradicts walls
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    // Periodic extents must keep the pressure sweep coloring consistent.
    bad = cfg;
    bad.grid = periodic_square(18, 2.0 * kPi);
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    SolverConfig chan;
    chan.grid = channel_grid(8, 9, 2.0, 1.0);
    chan.bc = FlowBC::channel;
    chan.dt = 0.01;
    chan.nu = 1.0;
    CHECK_NOTHROW(chan.validate());
}

TEST_CASE("quiescent flow is an exact fixed point") {
    SolverConfig cfg = periodic_cfg(16, 0.1, 0.05);
    SolverState s = make_state(cfg);
    step(s, cfg);
    CHECK(s.t == cfg.dt);
    CHECK(s.step_count == 1);
    CHECK(s.velocity.max_norm() == 0.0);
    CHECK(s.pressure.max_abs() == 0.0);
}

TEST_CASE("uniform translation is preserved bit-for-bit") {
    SolverConfig cfg = periodic_cfg(16, 0.1, 0.05);
    VectorField u0(cfg.grid);
    u0.fill({0.3, -0.7, 0.0});
    SolverState s = make_state(cfg, u0);
    std::vector<double> before = s.velocity.data();
    for (int i = 0; i < 3; ++i) step(s, cfg);
    CHECK(same_bits(before, s.velocity.data()));
    CHECK(s.pressure.max_abs() == 0.0); // divergence-free predictor skips the solve
}

TEST_CASE("constant forcing integrates exactly on a uniform state") {
    SolverConfig cfg = periodic_cfg(16, 0.1, 0.05);
    cfg.forcing = {2.0, 0.0, 0.0};
    SolverState s = make_state(cfg);
    step(s, cfg);
    for (std::size_t n = 0; n < s.velocity.nodes(); ++n) {
        CHECK(s.velocity.vec_at(n).x == 2.0 * cfg.dt);
        CHECK(s.velocity.vec_at(n).y == 0.0);
    }
}

TEST_CASE("oversized steps are rejected with the admissible dt attached") {
    SolverConfig cfg = periodic_cfg(32, 0.1, 1.0);
    TaylorGreenParams tg{cfg.nu, 1.0};
    SolverState s = make_state(cfg, taylor_green(tg, 0.0, cfg.grid));
    bool threw = false;
    try {
        step(s, cfg);
    } catch (const StabilityError& e) {
        threw = true;
        CHECK(e.required_dt > 0.0);
        CHECK(e.required_dt < 0.2);
        SolverConfig ok = cfg;
        ok.dt = 0.9 * e.required_dt;
        SolverState s2 = make_state(ok, taylor_green(tg, 0.0, ok.grid));
        CHECK_NOTHROW(step(s2, ok));
    }
    CHECK(threw);
}

TEST_CASE("projection keeps the discrete divergence at the contract bound") {
    SolverConfig cfg = periodic_cfg(32, 0.05, 0.02);
    TaylorGreenParams tg{cfg.nu, 1.0};
    SolverState s = make_state(cfg, taylor_green(tg, 0.0, cfg.grid));
    double prev_energy = kinetic_energy(s, cfg.rho);
    for (int i = 0; i < 10; ++i) {
        step(s, cfg);
        double h = cfg.grid.spacing[0];
        CHECK(max_divergence(s) <= 1e-8 * s.velocity.max_norm() / h + 1e-14);
        double e = kinetic_energy(s, cfg.rho);
        CHECK(e < prev_energy); // unforced viscous flow loses energy
        prev_energy = e;
    }
}

TEST_CASE("a pure-gradient start engages the pressure solve") {
    SolverConfig cfg = periodic_cfg(16, 0.0, 0.001);
    ScalarField phi = sample_scalar(cfg.grid, [](const Vec3& p) {
        return 0.01 * std::sin(p.x) * std::cos(p.y);
    });
    SolverState s = make_state(cfg, gradient(phi));
    step(s, cfg);
    CHECK(s.pressure.max_abs() > 0.0);
    double h = cfg.grid.spacing[0];
    CHECK(max_divergence(s) <= 1e-8 * s.velocity.max_norm() / h + 1e-14);
}

TEST_CASE("vortex-array energy decay tracks the closed form on a coarse grid") {
    SolverConfig cfg = periodic_cfg(32, 0.1, 0.01);
    TaylorGreenParams tg{cfg.nu, 1.0};
    SolverState s = make_state(cfg, taylor_green(tg, 0.0, cfg.grid));
    double e0 = kinetic_energy(s, cfg.rho);
    CHECK(e0 == doctest::Approx(0.25).epsilon(1e-12));
    while (s.t < 0.3 - 0.5 * cfg.dt) step(s, cfg);
    double ratio = kinetic_energy(s, cfg.rho) / e0;
    CHECK(ratio == doctest::Approx(taylor_green_energy_ratio(tg, s.t)).epsilon(0.05));
}

TEST_CASE("channel: walls stay pinned and the flow stays unidirectional") {
    SolverConfig cfg;
    cfg.grid = channel_grid(8, 9, 2.0, 1.0);
    cfg.bc = FlowBC::channel;
    cfg.nu = 1.0;
    cfg.rho = 1.0;
    cfg.dt = 0.01;
    cfg.forcing = {1.0, 0.0, 0.0};
    SolverState s = make_state(cfg);
    for (int i = 0; i < 20; ++i) step(s, cfg);
    const int nx = cfg.grid.dims[0];
    const int ny = cfg.grid.dims[1];
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            Vec3 u = s.velocity.vec_at(i, j);
            CHECK(u.y == 0.0); // nothing ever kicks the cross-stream component
            if (j == 0 || j == ny - 1) CHECK(u.x == 0.0);
        }
    // Streamwise-uniform forcing keeps the predictor divergence-free, so the
    // pressure never activates.
    CHECK(s.pressure.max_abs() == 0.0);
    // Profile grows from the wall to the centerline.
    for (int j = 1; j <= ny / 2; ++j)
        CHECK(s.velocity.vec_at(3, j).x > s.velocity.vec_at(3, j - 1).x);
}

TEST_CASE("make_state pins channel walls immediately") {
    SolverConfig cfg;
    cfg.grid = channel_grid(8, 9, 2.0, 1.0);
    cfg.bc = FlowBC::channel;
    cfg.dt = 0.01;
    cfg.nu = 1.0;
    VectorField u0(cfg.grid);
    u0.fill({1.0, 0.0, 0.0});
    SolverState s = make_state(cfg, u0);
    for (int i = 0; i < cfg.grid.dims[0]; ++i) {
        CHECK(s.velocity.vec_at(i, 0).x == 0.0);
        CHECK(s.velocity.vec_at(i, cfg.grid.dims[1] - 1).x == 0.0);
        CHECK(s.velocity.vec_at(i, 3).x == 1.0);
    }
}

TEST_CASE("save/load restart reproduces an uninterrupted run bit-for-bit") {
    SolverConfig cfg = periodic_cfg(16, 0.1, 0.05);
    TaylorGreenParams tg{cfg.nu, 1.0};

    SolverState straight = make_state(cfg, taylor_green(tg, 0.0, cfg.grid));
    for (int i = 0; i < 7; ++i) step(straight, cfg);

    SolverState first = make_state(cfg, taylor_green(tg, 0.0, cfg.grid));
    for (int i = 0; i < 3; ++i) step(first, cfg);
    const std::string prefix = "tmp_solver_restart";
    save_state(prefix, first);
    SolverState resumed = load_state(prefix);
    remove_state_files(prefix);
    CHECK(resumed.t == first.t);
    CHECK(resumed.step_count == first.step_count);
    CHECK(same_bits(resumed.velocity.data(), first.velocity.data()));
    for (int i = 0; i < 4; ++i) step(resumed, cfg);

    CHECK(resumed.t == straight.t);
    CHECK(resumed.step_count == straight.step_count);
    CHECK(same_bits(resumed.velocity.data(), straight.velocity.data()));
    CHECK(same_bits(resumed.pressure.data(), straight.pressure.data()));
}

TEST_CASE("loading a missing state fails cleanly") {
    CHECK_THROWS_AS(load_state("definitely_not_saved_anywhere"), ConfigError);
}

TEST_CASE("time series sampling and CSV layout") {
    SolverConfig cfg = periodic_cfg(16, 0.1, 0.05);
    TaylorGreenParams tg{cfg.nu, 1.0};
    SolverState s = make_state(cfg, taylor_green(tg, 0.0, cfg.grid));
    RunOptions opts;
    opts.t_end = 6 * cfg.dt;
    opts.sample_every = 2;
    opts.probes = {{kPi, kPi / 2.0, 0.0}};
    TimeSeries ts = run(s, cfg, opts);
    REQUIRE(ts.t.size() == 4); // steps 0, 2, 4, 6
    CHECK(ts.t.front() == 0.0);
    CHECK(ts.t.back() == doctest::Approx(0.3));
    CHECK(ts.energy.size() == ts.t.size());
    CHECK(ts.max_speed.size() == ts.t.size());
    REQUIRE(ts.probes.size() == 1);
    CHECK(ts.probes[0].size() == ts.t.size());
    CHECK(ts.energy[0] == doctest::Approx(0.25).epsilon(1e-12));
    for (std::size_t i = 1; i < ts.t.size(); ++i) {
        CHECK(ts.t[i] > ts.t[i - 1]);
        CHECK(ts.energy[i] < ts.energy[i - 1]);
    }

    std::ostringstream os;
    write_series_csv(os, ts);
    std::istringstream is(os.str());
    std::string header;
    std::getline(is, header);
    CHECK(header == "t,energy,max_speed,probe0_x,probe0_y");
    int rows = 0;
    std::string line;
    while (std::getline(is, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 4);
}

TEST_CASE("run_to_steady reaches the decayed state of an unforced flow") {
    SolverConfig cfg = periodic_cfg(16, 0.5, 0.02);
    TaylorGreenParams tg{cfg.nu, 0.5};
    SolverState s = make_state(cfg, taylor_green(tg, 0.0, cfg.grid));
    SteadyResult r = run_to_steady(s, cfg, 1e-10, 50, 20000);
    CHECK(r.converged);
    CHECK(r.steps > 0);
    CHECK(s.velocity.max_norm() < 1e-4); // essentially at rest
}

TEST_CASE("kinetic energy of a frozen uniform state") {
    SolverConfig cfg = periodic_cfg(16, 0.1, 0.01);
    VectorField u0(cfg.grid);
    u0.fill({3.0, 4.0, 0.0});
    SolverState s = make_state(cfg, u0);
    CHECK(kinetic_energy(s, 2.0) == doctest::Approx(25.0)); // rho |u|^2 / 2
}
