#include "nsaudit/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "nsaudit/errors.hpp"
#include "nsaudit/operators.hpp"

namespace nsaudit {

// Determinism rules for this file: stencil updates parallelize over
// disjoint outputs (red/black for the relaxation sweeps), every
// reduction (norms, means, residuals) runs serially, and no step uses
// wall-clock or thread identity. Two runs of the same config agree bit
// for bit, regardless of thread count.

std::string to_string(FlowBC bc) {
    return bc == FlowBC::doubly_periodic ? "periodic" : "channel";
}

void SolverConfig::validate() const {
    grid.validate();
    if (grid.rank() != 2) throw std::invalid_argument("solver grids must be 2D");
    if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
    if (nu < 0.0) throw std::invalid_argument("viscosity must be non-negative");
    if (!(rho > 0.0)) throw std::invalid_argument("density must be positive");
    if (!(poisson_tol > 0.0) || poisson_max_iters < 1)
        throw std::invalid_argument("pressure solve parameters must be positive");
    const bool per_x = grid.boundary[0] == Boundary::periodic;
    const bool per_y = grid.boundary[1] == Boundary::periodic;
    if (bc == FlowBC::doubly_periodic && (!per_x || !per_y))
        throw std::invalid_argument("periodic flow needs periodic boundaries on both axes");
    if (bc == FlowBC::channel && (!per_x || per_y))
        throw std::invalid_argument("channel flow needs periodic x and clamped y");
    for (int a = 0; a < 2; ++a)
        if (grid.boundary[a] == Boundary::periodic && grid.dims[a] % 4 != 0)
            throw std::invalid_argument(
                "periodic solver axes need a node count divisible by 4 "
                "(pressure sweep coloring)");
}

namespace {

// %.17g, because std::to_string flattens the small residuals and time
// steps these messages report to "0.000000".
std::string num_str(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double min_spacing(const GridSpec& g) {
    double h = g.spacing[0];
    for (double s : g.spacing) h = std::min(h, s);
    return h;
}

void pin_walls(VectorField& u, const SolverConfig& cfg) {
    if (cfg.bc != FlowBC::channel) return;
    const int nx = u.grid().dims[0];
    const int ny = u.grid().dims[1];
    for (int i = 0; i < nx; ++i) {
        u.set_vec(i, 0, 0, {0.0, 0.0, 0.0});
        u.set_vec(i, ny - 1, 0, {0.0, 0.0, 0.0});
    }
}

/// +/-2 neighbor along an axis; wraps on periodic axes, mirrors across
/// the end nodes on clamped axes (homogeneous-Neumann ghosts).
inline int wide_neighbor(int q, int d, int n, bool periodic) {
    int t = q + d;
    if (periodic) {
        t %= n;
        if (t < 0) t += n;
        return t;
    }
    if (t < 0) return -t;
    if (t > n - 1) return 2 * (n - 1) - t;
    return t;
}

/// Spectral estimate of the over-relaxation factor for the composed
/// divergence-of-gradient stencil (a compact Laplacian on each parity
/// sublattice with doubled spacing).
double relaxation_factor(const GridSpec& g) {
    double num = 0.0, den = 0.0;
    for (int a = 0; a < 2; ++a) {
        const double H = 2.0 * g.spacing[a];
        const double w = 1.0 / (H * H);
        const bool per = g.boundary[a] == Boundary::periodic;
        const int m = per ? g.dims[a] / 2 : (g.dims[a] + 1) / 2;
        const double alpha = (per ? 2.0 : 1.0) * std::numbers::pi / m;
        num += std::cos(alpha) * w;
        den += w;
    }
    const double rho_j = num / den;
    if (!(rho_j > 0.0)) return 1.0;
    return std::min(1.95, 2.0 / (1.0 + std::sqrt(1.0 - rho_j * rho_j)));
}

/// Relaxation solve of  div(grad p) = rhs  with the same central
/// difference operators used for the projection, so the corrected
/// velocity's divergence equals the remaining solve residual exactly.
void poisson_solve(ScalarField& p, const ScalarField& rhs, const SolverConfig& cfg) {
    const GridSpec& g = p.grid();
    const int nx = g.dims[0];
    const int ny = g.dims[1];
    const bool per_x = g.boundary[0] == Boundary::periodic;
    const bool per_y = g.boundary[1] == Boundary::periodic;
    const double cx = 1.0 / (4.0 * g.spacing[0] * g.spacing[0]);
    const double cy = 1.0 / (4.0 * g.spacing[1] * g.spacing[1]);
    const double diag = -2.0 * cx - 2.0 * cy;
    const double omega = relaxation_factor(g);
    const std::ptrdiff_t total = static_cast<std::ptrdiff_t>(g.node_count());

    // The +/-2 stencil never couples the four (i%2, j%2) parity classes
    // (wrap and mirror both preserve parity), so each class carries its own
    // constant null vector and its own compatibility condition: remove the
    // mean per class, not just globally. Class constants cancel in the +/-1
    // central-difference gradient, so this does not affect the projection.
    ScalarField b = rhs;
    const auto remove_class_means = [&](ScalarField& f) {
        double sum[4] = {0.0, 0.0, 0.0, 0.0};
        long cnt[4] = {0, 0, 0, 0};
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                const int cls = (j & 1) * 2 + (i & 1);
                sum[cls] += f.at(i, j);
                ++cnt[cls];
            }
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                const int cls = (j & 1) * 2 + (i & 1);
                f.at(i, j) -= sum[cls] / cnt[cls];
            }
    };
    remove_class_means(b);
    const double scale = b.max_abs();
    if (scale == 0.0) {
        p.fill(0.0);
        return;
    }

    double* P = p.data().data();
    const double* B = b.data().data();

    auto apply_at = [&](int i, int j) {
        const int xm = wide_neighbor(i, -2, nx, per_x);
        const int xp = wide_neighbor(i, +2, nx, per_x);
        const int ym = wide_neighbor(j, -2, ny, per_y);
        const int yp = wide_neighbor(j, +2, ny, per_y);
        const std::size_t row = static_cast<std::size_t>(j) * nx;
        return cx * (P[row + xm] + P[row + xp]) +
               cy * (P[static_cast<std::size_t>(ym) * nx + i] +
                     P[static_cast<std::size_t>(yp) * nx + i]) +
               diag * P[row + i];
    };

    double rel = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < cfg.poisson_max_iters; ++iter) {
        for (int color = 0; color < 2; ++color) {
#pragma omp parallel for schedule(static)
            for (std::ptrdiff_t idx = 0; idx < total; ++idx) {
                const int i = static_cast<int>(idx % nx);
                const int j = static_cast<int>(idx / nx);
                if (((i / 2 + j / 2) & 1) != color) continue;
                const int xm = wide_neighbor(i, -2, nx, per_x);
                const int xp = wide_neighbor(i, +2, nx, per_x);
                const int ym = wide_neighbor(j, -2, ny, per_y);
                const int yp = wide_neighbor(j, +2, ny, per_y);
                const std::size_t row = static_cast<std::size_t>(j) * nx;
                const double lp = cx * (P[row + xm] + P[row + xp]) +
                                  cy * (P[static_cast<std::size_t>(ym) * nx + i] +
                                        P[static_cast<std::size_t>(yp) * nx + i]) +
                                  diag * P[idx];
                // Mirror folds onto the center node shift its diagonal.
                double d = diag;
                if (xm == i) d += cx;
                if (xp == i) d += cx;
                if (ym == j) d += cy;
                if (yp == j) d += cy;
                P[idx] += omega * (B[idx] - lp) / d;
            }
        }
        if (iter % 25 == 24 || iter == cfg.poisson_max_iters - 1) {
            double worst = 0.0;
            for (int j = 0; j < ny; ++j)
                for (int i = 0; i < nx; ++i)
                    worst = std::max(worst,
                                     std::abs(B[static_cast<std::size_t>(j) * nx + i] -
                                              apply_at(i, j)));
            rel = worst / scale;
            if (rel <= cfg.poisson_tol) break;
        }
    }
    if (rel > cfg.poisson_tol)
        throw PoissonError("pressure solve stalled at relative residual " + num_str(rel),
                           rel);

    // Pin the free class constants so repeated solves stay bounded and
    // reproducible.
    remove_class_means(p);
}

} // namespace

SolverState make_state(const SolverConfig& cfg) {
    cfg.validate();
    SolverState s;
    s.velocity = VectorField(cfg.grid, "m/s");
    s.pressure = ScalarField(cfg.grid, "Pa");
    return s;
}

SolverState make_state(const SolverConfig& cfg, const VectorField& u0) {
    SolverState s = make_state(cfg);
    if (!(u0.grid() == cfg.grid))
        throw std::invalid_argument("initial velocity lives on a different grid");
    u0.check_finite("initial velocity");
    s.velocity = u0;
    s.velocity.set_unit("m/s");
    pin_walls(s.velocity, cfg);
    return s;
}

void step(SolverState& s, const SolverConfig& cfg) {
    cfg.validate();
    if (!(s.velocity.grid() == cfg.grid))
        throw std::invalid_argument("state grid does not match the config grid");

    const double h = min_spacing(cfg.grid);
    const double hx = cfg.grid.spacing[0];
    const double hy = cfg.grid.spacing[1];
    const double maxu = s.velocity.max_norm();

    // Stability gate: advective CFL and the explicit diffusion limit.
    const double visc_factor = 2.0 * cfg.nu * cfg.dt * (1.0 / (hx * hx) + 1.0 / (hy * hy));
    const double cfl = maxu * cfg.dt / h;
    if (cfl > 0.5 + 1e-12 || visc_factor > 1.0 + 1e-12) {
        double required = std::numeric_limits<double>::infinity();
        if (maxu > 0.0) required = std::min(required, 0.5 * h / maxu);
        if (cfg.nu > 0.0)
            required = std::min(required, 1.0 / (2.0 * cfg.nu * (1.0 / (hx * hx) + 1.0 / (hy * hy))));
        throw StabilityError("time step " + num_str(cfg.dt) +
                                 " rejected (CFL " + num_str(cfl) + ", viscous factor " +
                                 num_str(visc_factor) + "); largest stable dt is " +
                                 num_str(required),
                             required);
    }

    // Predictor: explicit advection + diffusion + body force.
    const VectorField adv = advect(s.velocity);
    const VectorField lap = vector_laplacian(s.velocity);
    VectorField ustar(cfg.grid, "m/s");
    const std::size_t nodes = ustar.nodes();
    const std::ptrdiff_t total = static_cast<std::ptrdiff_t>(nodes);
    for (int c = 0; c < ustar.components(); ++c) {
        const double* u = s.velocity.data().data() + static_cast<std::size_t>(c) * nodes;
        const double* a = adv.data().data() + static_cast<std::size_t>(c) * nodes;
        const double* l = lap.data().data() + static_cast<std::size_t>(c) * nodes;
        const double f = cfg.forcing[c];
        double* out = ustar.data().data() + static_cast<std::size_t>(c) * nodes;
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t idx = 0; idx < total; ++idx)
            out[idx] = u[idx] + cfg.dt * (cfg.nu * l[idx] - a[idx] + f);
    }
    pin_walls(ustar, cfg);

    // Projection: subtract the gradient part so the same central
    // divergence that built the right-hand side vanishes afterwards.
    ScalarField rhs = divergence(ustar);
    if (rhs.max_abs() == 0.0) {
        s.pressure.fill(0.0);
        s.velocity = std::move(ustar);
    } else {
        for (double& v : rhs.data()) v /= cfg.dt;
        poisson_solve(s.pressure, rhs, cfg);
        const VectorField gp = gradient(s.pressure);
        for (int c = 0; c < ustar.components(); ++c) {
            double* u = ustar.data().data() + static_cast<std::size_t>(c) * nodes;
            const double* gpc = gp.data().data() + static_cast<std::size_t>(c) * nodes;
#pragma omp parallel for schedule(static)
            for (std::ptrdiff_t idx = 0; idx < total; ++idx) u[idx] -= cfg.dt * gpc[idx];
        }
        pin_walls(ustar, cfg);
        s.velocity = std::move(ustar);
    }

    s.t += cfg.dt;
    ++s.step_count;

    // Contract check: the step must leave the field discretely
    // divergence-free to the advertised bound.
    const double div_now = residual_stats(divergence(s.velocity)).max_abs;
    const double bound = 1e-8 * s.velocity.max_norm() / h;
    if (div_now > bound && div_now > 1e-14)
        throw PoissonError("projection left max |div u| = " + num_str(div_now) +
                               " above the bound " + num_str(bound),
                           div_now);
}

double kinetic_energy(const SolverState& s, double rho) {
    const std::size_t nodes = s.velocity.nodes();
    double sum = 0.0;
    for (std::size_t n = 0; n < nodes; ++n) sum += s.velocity.vec_at(n).norm2();
    return rho * sum / (2.0 * static_cast<double>(nodes));
}

double max_divergence(const SolverState& s) {
    return residual_stats(divergence(s.velocity)).max_abs;
}

TimeSeries run(SolverState& s, const SolverConfig& cfg, const RunOptions& opts) {
    if (!(opts.t_end > 0.0)) throw std::invalid_argument("t_end must be positive");
    if (opts.sample_every < 1) throw std::invalid_argument("sample_every must be >= 1");
    TimeSeries ts;
    ts.probe_positions = opts.probes;
    ts.probes.resize(opts.probes.size());
    auto record = [&] {
        ts.t.push_back(s.t);
        ts.energy.push_back(kinetic_energy(s, cfg.rho));
        ts.max_speed.push_back(s.velocity.max_norm());
        for (std::size_t k = 0; k < opts.probes.size(); ++k)
            ts.probes[k].push_back(s.velocity.sample(opts.probes[k]));
    };
    record();
    long last_recorded = -1;
    while (s.t + 0.5 * cfg.dt < opts.t_end) {
        step(s, cfg);
        if (s.step_count % opts.sample_every == 0) {
            record();
            last_recorded = s.step_count;
        }
    }
    if (last_recorded != s.step_count && !ts.t.empty() && ts.t.back() != s.t) record();
    return ts;
}

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

void write_series_csv(std::ostream& os, const TimeSeries& ts) {
    os << "t,energy,max_speed";
    for (std::size_t k = 0; k < ts.probe_positions.size(); ++k)
        os << ",probe" << k << "_x,probe" << k << "_y";
    os << "\n";
    for (std::size_t n = 0; n < ts.t.size(); ++n) {
        os << fmt17(ts.t[n]) << "," << fmt17(ts.energy[n]) << "," << fmt17(ts.max_speed[n]);
        for (const auto& series : ts.probes)
            os << "," << fmt17(series[n].x) << "," << fmt17(series[n].y);
        os << "\n";
    }
}

void write_series_csv_file(const std::string& path, const TimeSeries& ts) {
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot open '" + path + "' for writing");
    write_series_csv(os, ts);
    if (!os) throw ConfigError("write to '" + path + "' failed");
}

SteadyResult run_to_steady(SolverState& s, const SolverConfig& cfg, double rel_tol,
                           int check_interval, long max_steps) {
    if (check_interval < 1) throw std::invalid_argument("check interval must be >= 1");
    SteadyResult r;
    VectorField prev = s.velocity;
    while (r.steps < max_steps) {
        for (int k = 0; k < check_interval && r.steps < max_steps; ++k) {
            step(s, cfg);
            ++r.steps;
        }
        double diff = 0.0;
        for (std::size_t n = 0; n < prev.data().size(); ++n)
            diff = std::max(diff, std::abs(s.velocity.data()[n] - prev.data()[n]));
        const double scale = std::max(s.velocity.max_norm(), 1e-300);
        r.rel_change = diff / scale;
        if (r.rel_change < rel_tol) {
            r.converged = true;
            return r;
        }
        prev = s.velocity;
    }
    return r;
}

void save_state(const std::string& prefix, const SolverState& s) {
    write_snapshot_file(prefix + "_u.snap", s.velocity, "velocity");
    write_snapshot_file(prefix + "_p.snap", s.pressure, "pressure");
    std::ofstream os(prefix + "_meta.txt");
    if (!os) throw ConfigError("cannot open '" + prefix + "_meta.txt' for writing");
    os << "nsaudit-state 1\n";
    os << "t " << fmt17(s.t) << "\n";
    os << "steps " << s.step_count << "\n";
}

SolverState load_state(const std::string& prefix) {
    std::ifstream is(prefix + "_meta.txt");
    if (!is) throw ConfigError("cannot open '" + prefix + "_meta.txt'");
    std::string line;
    if (!std::getline(is, line) || line != "nsaudit-state 1")
        throw ConfigError("bad state meta header");
    SolverState s;
    std::string key;
    if (!(is >> key >> s.t) || key != "t") throw ConfigError("bad state meta 't' line");
    if (!(is >> key >> s.step_count) || key != "steps")
        throw ConfigError("bad state meta 'steps' line");

    Snapshot u = read_snapshot_file(prefix + "_u.snap");
    Snapshot p = read_snapshot_file(prefix + "_p.snap");
    if (!u.is_vector || p.is_vector)
        throw ConfigError("state snapshots must be a vector velocity and scalar pressure");
    s.velocity = std::move(u.vector);
    s.pressure = std::move(p.scalar);
    if (!(s.velocity.grid() == s.pressure.grid()))
        throw ConfigError("state snapshots disagree about the grid");
    return s;
}

} // namespace nsaudit
