#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "nsaudit/field.hpp"
#include "nsaudit/grid.hpp"
#include "nsaudit/vec.hpp"

namespace nsaudit {

/// 2D incompressible flow solver: explicit advection-diffusion predictor
/// followed by a pressure projection that removes the discrete divergence.
/// Small, deterministic, collocated-grid; the trusted flow source for the
/// claim audits.

enum class FlowBC {
    doubly_periodic, // periodic x and y
    channel          // periodic x, no-slip walls at the y ends
};
std::string to_string(FlowBC bc);

struct SolverConfig {
    GridSpec grid;       // 2D
    double nu = 0.1;     // kinematic viscosity, m^2/s
    double rho = 1.0;    // kg/m^3
    double dt = 0.0;     // s, must be set > 0
    Vec3 forcing;        // constant body force per unit mass, m/s^2
    FlowBC bc = FlowBC::doubly_periodic;
    double poisson_tol = 1e-10; // relative residual target
    int poisson_max_iters = 50000;

    /// Throws std::invalid_argument on inconsistent grid/bc/dt/nu.
    void validate() const;
};

struct SolverState {
    double t = 0.0;
    long step_count = 0;
    VectorField velocity;
    ScalarField pressure;
};

/// State with the given initial velocity (must live on cfg.grid) and zero
/// pressure. Channel walls are clamped to no-slip immediately.
SolverState make_state(const SolverConfig& cfg, const VectorField& u0);
SolverState make_state(const SolverConfig& cfg); // quiescent

/// Advances one time step. Throws StabilityError when the advective CFL
/// number exceeds 0.5 or the viscous stability limit is violated (the
/// error carries the largest admissible dt), and PoissonError when the
/// pressure solve stalls. After a successful step the discrete divergence
/// satisfies max|div u| <= 1e-8 * max|u| / h.
void step(SolverState& s, const SolverConfig& cfg);

/// Mean kinetic energy density over the grid: mean of rho |u|^2 / 2.
double kinetic_energy(const SolverState& s, double rho);

/// Largest |div velocity| over the grid (central differences).
double max_divergence(const SolverState& s);

struct RunOptions {
    double t_end = 1.0;
    int sample_every = 1;          // record every k-th step (plus step 0)
    std::vector<Vec3> probes;      // interpolated velocity probes
};

struct TimeSeries {
    std::vector<double> t;
    std::vector<double> energy;    // mean rho|u|^2/2
    std::vector<double> max_speed;
    std::vector<Vec3> probe_positions;
    std::vector<std::vector<Vec3>> probes; // [probe][sample]
};

/// Steps until t_end, recording samples. Deterministic for a fixed
/// config: fixed sweep order, fixed convergence checks.
TimeSeries run(SolverState& s, const SolverConfig& cfg, const RunOptions& opts);

/// CSV: t,energy,max_speed,probe0_x,probe0_y,...
void write_series_csv(std::ostream& os, const TimeSeries& ts);
void write_series_csv_file(const std::string& path, const TimeSeries& ts);

struct SteadyResult {
    bool converged = false;
    long steps = 0;
    double rel_change = 0.0; // last measured change per check interval
};

/// Steps until the velocity stops changing: max-norm change over
/// `check_interval` steps, relative to the current max speed, below
/// rel_tol. Gives up after max_steps.
SteadyResult run_to_steady(SolverState& s, const SolverConfig& cfg, double rel_tol = 1e-8,
                           int check_interval = 100, long max_steps = 400000);

/// Restartable state dump: <prefix>_u.snap, <prefix>_p.snap and
/// <prefix>_meta.txt (time, step count). Round-trips bit-exactly.
void save_state(const std::string& prefix, const SolverState& s);
SolverState load_state(const std::string& prefix);

} // namespace nsaudit
