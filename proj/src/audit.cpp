#include "nsaudit/audit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "nsaudit/analytic_flows.hpp"
#include "nsaudit/density.hpp"
#include "nsaudit/errors.hpp"
#include "nsaudit/solver.hpp"
#include "nsaudit/version.hpp"

namespace nsaudit {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::holds: return "HOLDS";
        case Verdict::fails: return "FAILS";
        default: return "NOT_APPLICABLE";
    }
}

double ClaimResult::metric(const std::string& name) const {
    for (const auto& [key, value] : metrics)
        if (key == name) return value;
    throw std::out_of_range("claim '" + id + "' has no metric '" + name + "'");
}

bool ClaimResult::has_metric(const std::string& name) const {
    for (const auto& [key, value] : metrics)
        if (key == name) return true;
    return false;
}

Verdict convergence_verdict(const std::vector<ConvergenceSample>& residuals, double tol,
                            std::string* note) {
    if (residuals.empty()) {
        if (note) *note += " no residual data -> NOT_APPLICABLE.";
        return Verdict::not_applicable;
    }
    const double finest = residuals.back().error;
    if (finest <= tol) return Verdict::holds;
    if (residuals.size() < 2) {
        if (note) *note += " single-resolution residual above tolerance -> NOT_APPLICABLE.";
        return Verdict::not_applicable;
    }
    const double prev = residuals[residuals.size() - 2].error;
    const double change = std::abs(finest - prev) / std::max(std::abs(finest), 1e-300);
    if (finest >= 2.0 * tol && change < 0.10) return Verdict::fails;
    if (note)
        *note += " residual above tolerance but still moving under refinement (" +
                 std::to_string(change * 100.0) + "% change) -> NOT_APPLICABLE.";
    return Verdict::not_applicable;
}

double potential_identity_residual(const Vec3& u) {
    const double lhs = (u.x * u.y + u.y * u.z + u.z * u.x) + u.norm2();
    const double rhs = 0.5 * ((u.x + u.y) * (u.x + u.y) + (u.y + u.z) * (u.y + u.z) +
                              (u.z + u.x) * (u.z + u.x));
    return std::abs(lhs - rhs);
}

PotentialBreakdown potential_breakdown(const VectorField& v, const ScalarField& p, double u0,
                                       double rho) {
    v.check_finite("velocity");
    p.check_finite("pressure");
    if (!(v.grid() == p.grid()))
        throw std::invalid_argument("velocity and pressure live on different grids");
    if (!std::isfinite(u0)) throw std::invalid_argument("boundary speed must be finite");
    (void)rho; // the split is per unit mass; bulk density cancels out

    PotentialBreakdown out{ScalarField(v.grid(), "m^2/s^2"), ScalarField(v.grid(), "m^2/s^2"),
                           ScalarField(v.grid(), "m^2/s^2"), ScalarField(v.grid(), "m^2/s^2"),
                           0.0};
    const std::size_t nodes = v.nodes();
    for (std::size_t n = 0; n < nodes; ++n) {
        const Vec3 u = v.vec_at(n);
        const double s2 = u.norm2();
        out.U_P[n] = u.x * u.y + u.y * u.z + u.z * u.x;
        out.U_gradP[n] = 0.5 * (s2 - 3.0 * u0 * u0);
        out.U_F[n] = 0.5 * (s2 + 3.0 * u0 * u0);
        out.U_0[n] = 0.5 * ((u.x + u.y) * (u.x + u.y) + (u.y + u.z) * (u.y + u.z) +
                            (u.z + u.x) * (u.z + u.x));
        out.identity_residual_max =
            std::max(out.identity_residual_max,
                     std::abs(out.U_F[n] + out.U_gradP[n] + out.U_P[n] - out.U_0[n]));
    }
    return out;
}

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmtg(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

std::string grid_desc(const GridSpec& g) {
    std::string s = std::to_string(g.dims[0]);
    for (std::size_t a = 1; a < g.dims.size(); ++a) s += "x" + std::to_string(g.dims[a]);
    s += " (";
    for (std::size_t a = 0; a < g.boundary.size(); ++a) {
        if (a) s += ",";
        s += to_string(g.boundary[a]);
    }
    s += "), h=" + fmtg(g.spacing[0]);
    for (std::size_t a = 1; a < g.spacing.size(); ++a) s += "/" + fmtg(g.spacing[a]);
    return s;
}

ScalarField comp_field(const VectorField& v, int c) {
    ScalarField out(v.grid(), v.unit());
    for (std::size_t n = 0; n < v.nodes(); ++n) out[n] = v.comp(c, n);
    return out;
}

double median_of(std::vector<double> vals) {
    if (vals.empty()) return 0.0;
    std::sort(vals.begin(), vals.end());
    const std::size_t n = vals.size();
    if (n % 2 == 1) return vals[n / 2];
    return 0.5 * (vals[n / 2 - 1] + vals[n / 2]);
}

int clamp_levels(int refinements) { return std::min(std::max(refinements, 2), 4); }

} // namespace

MuRotEstimate estimate_mu_rot(const VectorField& u, double k_gh) {
    u.check_finite("velocity");
    MuRotEstimate out;
    const GridSpec& g = u.grid();
    const int rank = g.rank();

    const VectorField c = curl(u);
    // J[a][b] = d(curl u)_a / d x_b; axes beyond the grid rank are zero.
    std::vector<std::vector<ScalarField>> J(3);
    for (int a = 0; a < 3; ++a) {
        const ScalarField ca = comp_field(c, a);
        for (int b = 0; b < rank; ++b) J[a].push_back(derivative(ca, b));
    }

    ScalarField speed(g);
    for (std::size_t n = 0; n < u.nodes(); ++n) speed[n] = u.vec_at(n).norm();
    const double max_speed = speed.max_abs();
    const VectorField gs = gradient(speed);
    double gs_scale = 0.0;
    for (std::size_t n = 0; n < u.nodes(); ++n) gs_scale = std::max(gs_scale, gs.vec_at(n).norm());

    std::vector<double> vals;
    std::size_t skipped_slow = 0, skipped_flat = 0;
    for (std::size_t n = 0; n < u.nodes(); ++n) {
        const Vec3 uu = u.vec_at(n);
        const double sp = speed[n];
        if (sp <= 1e-12 * std::max(max_speed, 1e-300)) {
            ++skipped_slow;
            continue;
        }
        const Vec3 f = uu / sp;
        const Vec3 gsv = gs.vec_at(n);
        const Vec3 hraw = gsv - dot(gsv, f) * f;
        if (hraw.norm() <= 1e-9 * std::max(gs_scale, 1e-300)) {
            ++skipped_flat;
            continue;
        }
        const Vec3 h = unit(hraw);
        const Vec3 gvec = cross(f, h);
        Vec3 Jh;
        for (int a = 0; a < 3; ++a) {
            double s = 0.0;
            for (int b = 0; b < rank; ++b) s += J[a][b][n] * h[b];
            Jh[a] = s;
        }
        vals.push_back(std::abs((1.0 + k_gh) * dot(f, Jh) - dot(gvec, Jh) - k_gh * dot(h, Jh)));
    }
    out.usable_nodes = vals.size();
    out.magnitude = median_of(std::move(vals));
    out.note = "median over " + std::to_string(out.usable_nodes) + " nodes (" +
               std::to_string(skipped_slow) + " near-stagnant and " +
               std::to_string(skipped_flat) + " flat-speed nodes skipped), k_gh=" + fmtg(k_gh);
    return out;
}

double estimate_dP_du(const VectorField& u, const ScalarField& p) {
    if (!(u.grid() == p.grid()))
        throw std::invalid_argument("velocity and pressure live on different grids");
    const std::size_t n = u.nodes();
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += u.vec_at(i).norm();
        sy += p[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = u.vec_at(i).norm() - mx;
        sxx += dx * dx;
        sxy += dx * (p[i] - my);
    }
    if (sxx <= 0.0) return 0.0;
    return sxy / sxx;
}

// ---------------------------------------------------------------------------
// Shared fixtures
// ---------------------------------------------------------------------------

namespace {

/// Band-limited smooth periodic test field: a fixed set of random Fourier
/// modes with |k| <= 4 per axis, identical at every resolution so
/// refinement studies see one underlying function.
struct FourierMode {
    double kx, ky, amp, phase;
};

std::vector<std::vector<FourierMode>> band_limited_modes() {
    std::mt19937 rng(20230817u);
    std::uniform_int_distribution<int> kdist(-4, 4);
    std::uniform_real_distribution<double> adist(-1.0, 1.0);
    std::uniform_real_distribution<double> pdist(0.0, 2.0 * std::numbers::pi);
    std::vector<std::vector<FourierMode>> comps(3);
    for (auto& modes : comps)
        while (modes.size() < 10) {
            const int kx = kdist(rng), ky = kdist(rng);
            if (kx == 0 && ky == 0) continue;
            modes.push_back({double(kx), double(ky), adist(rng), pdist(rng)});
        }
    return comps;
}

VectorField band_limited_field(const GridSpec& g,
                               const std::vector<std::vector<FourierMode>>& comps) {
    VectorField out(g, 3, "m/s");
    for (int c = 0; c < 3; ++c)
        for (int j = 0; j < g.dims[1]; ++j)
            for (int i = 0; i < g.dims[0]; ++i) {
                const Vec3 p = g.position(i, j, 0);
                double v = 0.0;
                for (const auto& m : comps[c])
                    v += m.amp * std::cos(m.kx * p.x + m.ky * p.y + m.phase);
                out.at(c, i, j) = v;
            }
    return out;
}

/// Residual of the claimed advection identity
///   (u.grad)u == grad(u1u2 + u2u3 + u3u1) - u div(u)
/// with the cross-term potential read as a scalar and differentiated by
/// gradient.
VectorField advection_identity_residual(const VectorField& u) {
    const VectorField left = advect(u);
    ScalarField up(u.grid(), "m^2/s^2");
    for (std::size_t n = 0; n < u.nodes(); ++n) {
        const Vec3 v = u.vec_at(n);
        up[n] = v.x * v.y + v.y * v.z + v.z * v.x;
    }
    const VectorField gup = gradient(up);
    const ScalarField dv = divergence(u);
    VectorField res(u.grid(), u.components(), "m/s^2");
    for (std::size_t n = 0; n < u.nodes(); ++n) {
        const Vec3 r = left.vec_at(n) - (gup.vec_at(n) - u.vec_at(n) * dv[n]);
        res.set_vec(n, r);
    }
    return res;
}

const char* kScalarReadingNote =
    "The cross-term potential is differentiated as one scalar (gradient reading); "
    "the alternative divergence-of-product reading turns the statement into a "
    "standard identity that holds for any field, so only the scalar reading is "
    "informative and it is the one audited.";

/// Difference between the trajectory-sampled material derivative and the
/// central time derivative, from three consecutive snapshots dt apart.
VectorField material_minus_partial(const VectorField& prev, const VectorField& mid,
                                   const VectorField& next, double dt) {
    const GridSpec& g = mid.grid();
    VectorField out(g, mid.components(), "m/s^2");
    const int nz = g.rank() == 3 ? g.dims[2] : 1;
    for (int k = 0; k < nz; ++k)
        for (int j = 0; j < g.dims[1]; ++j)
            for (int i = 0; i < g.dims[0]; ++i) {
                const Vec3 pos = g.position(i, j, k);
                const Vec3 u = mid.vec_at(i, j, k);
                const Vec3 along = (next.sample(pos + dt * u) - prev.sample(pos - dt * u)) /
                                   (2.0 * dt);
                const Vec3 at = (next.vec_at(i, j, k) - prev.vec_at(i, j, k)) / (2.0 * dt);
                out.set_vec(i, j, k, along - at);
            }
    return out;
}

struct RadialFixture {
    GridSpec grid;
    RadialFlowParams par;
    VectorField u;
    ScalarField p;
    std::vector<Vec3> seeds;
    double flux = 0.01;
    double rho = 1.0;
};

/// Converging flow toward a sink just outside the unit square: speed rises
/// and pressure falls monotonically along every streamline, with an exact
/// Bernoulli pressure — the workhorse fixture for the streamtube audits.
RadialFixture make_radial_fixture(int n) {
    RadialFixture f;
    f.grid = clamped_box({n, n}, {1.0, 1.0}, {0.0, 0.0});
    f.par.center = {-0.25, 0.5, 0.0};
    f.par.strength = -0.05;
    f.par.rho = 1.0;
    f.par.p_far = 1.0;
    f.u = radial_flow(f.par, f.grid);
    f.p = radial_flow_pressure(f.par, f.grid);
    f.seeds = {{0.9, 0.30, 0.0}, {0.9, 0.50, 0.0}, {0.9, 0.68, 0.0}};
    return f;
}

/// Least-squares fit of target ~ a*x + b*y (no intercept) via the normal
/// equations; falls back to the single-parameter fit when the two columns
/// are linearly dependent.
struct PairFit {
    double a = 0.0, b = 0.0;
    bool degenerate = false;
};

PairFit fit_two_columns(const std::vector<double>& x, const std::vector<double>& y,
                        const std::vector<double>& t) {
    PairFit f;
    double sxx = 0, syy = 0, sxy = 0, sxt = 0, syt = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += x[i] * x[i];
        syy += y[i] * y[i];
        sxy += x[i] * y[i];
        sxt += x[i] * t[i];
        syt += y[i] * t[i];
    }
    const double det = sxx * syy - sxy * sxy;
    if (det > 1e-14 * sxx * syy) {
        f.a = (syy * sxt - sxy * syt) / det;
        f.b = (sxx * syt - sxy * sxt) / det;
    } else {
        f.degenerate = true;
        f.a = sxx > 0 ? sxt / sxx : 0.0;
        f.b = 0.0;
    }
    return f;
}

/// Steady solver run of the forced plane channel at one resolution.
struct ChannelSteady {
    SolverConfig cfg;
    SolverState state;
    SteadyResult steady;
};

ChannelSteady run_channel_steady(int nx, int ny) {
    ChannelSteady r;
    r.cfg.grid = channel_grid(nx, ny, 1.0, 1.0);
    r.cfg.nu = 1.0;
    r.cfg.rho = 1.0;
    r.cfg.bc = FlowBC::channel;
    r.cfg.forcing = {1.0, 0.0, 0.0};
    const double hx = r.cfg.grid.spacing[0], hy = r.cfg.grid.spacing[1];
    r.cfg.dt = 0.9 / (2.0 * r.cfg.nu * (1.0 / (hx * hx) + 1.0 / (hy * hy)));
    r.state = make_state(r.cfg);
    r.steady = run_to_steady(r.state, r.cfg, 1e-8, 100, 400000);
    return r;
}

} // namespace

// ---------------------------------------------------------------------------
// Claim groups
// ---------------------------------------------------------------------------

std::vector<ClaimResult> audit_foundations(const AuditOptions& opt) {
    std::vector<ClaimResult> out;
    const int levels = clamp_levels(opt.refinements);

    // --- operator identity: lap v == grad(div v) - curl(curl v) ----------
    {
        ClaimResult r;
        r.id = "foundations.laplacian-identity";
        r.anchor = "discrete vector Laplacian equals grad(div) minus curl(curl) up to "
                   "discretization error that vanishes under refinement";
        const int base = opt.grid >= 8 ? opt.grid : 32;
        const auto modes = band_limited_modes();
        r.table_header = {"h", "max_abs_residual", "l2_residual"};
        for (int l = 0; l < levels; ++l) {
            const int n = base << l;
            const GridSpec g = periodic_square(n, 2.0 * std::numbers::pi);
            const VectorField u = band_limited_field(g, modes);
            const LaplacianIdentityResult res = check_laplacian_identity(u);
            r.refinement.push_back({g.spacing[0], res.stats.max_abs});
            r.table.push_back({g.spacing[0], res.stats.max_abs, res.stats.l2});
            if (l == levels - 1) r.residual = res.stats;
        }
        r.order = estimate_order(r.refinement);
        r.inputs = "band-limited random field (10 modes/component, |k|<=4), periodic grids " +
                   std::to_string(base) + "^2 .. " + std::to_string(base << (levels - 1)) + "^2";
        if (r.order >= 1.9 || r.refinement.back().error <= kRoundoffFloor) {
            r.verdict = Verdict::holds;
            r.notes = "residual converges to zero at measured order " + fmtg(r.order) + ".";
        } else {
            r.verdict = convergence_verdict(r.refinement, kRoundoffFloor, &r.notes);
            r.notes += " measured order " + fmtg(r.order) + " below the expected 1.9.";
        }
        r.metrics = {{"order", r.order}, {"finest_max_abs", r.refinement.back().error}};
        out.push_back(std::move(r));
    }

    // --- pure-algebra identity on random vectors --------------------------
    {
        ClaimResult r;
        r.id = "foundations.potential-identity";
        r.anchor = "((u1+u2)^2+(u2+u3)^2+(u3+u1)^2)/2 == |u|^2 + (u1u2+u2u3+u3u1) "
                   "as a polynomial identity";
        std::mt19937 rng(7u);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        const int draws = 20000;
        double worst = 0.0;
        for (int i = 0; i < draws; ++i)
            worst = std::max(worst,
                             potential_identity_residual({dist(rng), dist(rng), dist(rng)}));
        const GridSpec g = taylor_green_grid(32);
        const TaylorGreenParams tg;
        const PotentialBreakdown pb =
            potential_breakdown(taylor_green(tg, 0.0, g), taylor_green_pressure(tg, 0.0, 1.0, g),
                                1.0, 1.0);
        r.residual.max_abs = std::max(worst, pb.identity_residual_max);
        r.residual.nodes = draws + g.node_count();
        r.inputs = std::to_string(draws) + " random vectors in [-1,1]^3 plus a 32^2 vortex-array "
                   "snapshot breakdown";
        r.verdict = r.residual.max_abs < 1e-14 ? Verdict::holds : Verdict::fails;
        r.order = std::numeric_limits<double>::infinity();
        r.notes = "algebra only; independent of any differential statement.";
        r.metrics = {{"max_residual", r.residual.max_abs},
                     {"breakdown_residual", pb.identity_residual_max}};
        out.push_back(std::move(r));
    }

    // --- pair-product constancy of dual equal-mass decompositions ---------
    {
        ClaimResult r;
        r.id = "foundations.density-product";
        r.anchor = "cutting a body of mass M both into m equal-mass slabs and m equal-mass "
                   "tubes keeps every (mass/area)x(mass/length) product at 2*M*rho/m^2";
        const double M = 5.0, rho = 2.0;
        bool all_pass = true;
        bool detected = true;
        double worst_spread = 0.0, worst_dev = 0.0;
        r.table_header = {"m", "expected", "spread", "worst_rel_dev"};
        for (int m : {1, 4, 10, 100}) {
            const TubeDecomposition d = consistent_decomposition(M, rho, m);
            const ProductInvariantResult pi = product_invariant(d, rho);
            all_pass = all_pass && pi.pass;
            worst_spread = std::max(worst_spread, pi.spread);
            worst_dev = std::max(worst_dev, pi.worst_rel_dev);
            r.table.push_back({double(m), pi.expected, pi.spread, pi.worst_rel_dev});

            TubeDecomposition bad = d;
            bad.slab_areas[0] *= 1.01;
            detected = detected && !product_invariant(bad, rho).pass;
        }
        r.residual.max_abs = std::max(worst_spread, worst_dev);
        r.inputs = "uniform decompositions of M=5, rho=2, m in {1,4,10,100}; 1% single-slab "
                   "perturbation for detection";
        r.verdict = (all_pass && detected) ? Verdict::holds : Verdict::fails;
        r.order = std::numeric_limits<double>::infinity();
        r.notes = detected ? "perturbed decompositions are rejected as required."
                           : "a perturbed decomposition slipped through.";
        r.metrics = {{"worst_spread", worst_spread},
                     {"worst_rel_dev", worst_dev},
                     {"perturbation_detected", detected ? 1.0 : 0.0}};
        out.push_back(std::move(r));
    }

    // --- streamtube reciprocity |rho_L| * |u| == rho * flux ---------------
    {
        ClaimResult r;
        r.id = "foundations.tube-reciprocity";
        r.anchor = "|mass-per-length| x speed stays constant along a flux-carrying streamtube "
                   "of a divergence-free flow";
        const int n = opt.grid >= 32 ? opt.grid : 128;
        const RadialFixture f = make_radial_fixture(n);
        const auto tubes = extract_density_structure(f.u, f.rho, f.seeds, f.flux);
        const ScalarField dv = divergence(f.u);

        double worst_var = 0.0, worst_line = 0.0;
        r.table_header = {"tube", "stations", "product_variation", "line_integral"};
        for (std::size_t t = 0; t < tubes.size(); ++t) {
            const auto& tube = tubes[t];
            double pmin = std::numeric_limits<double>::infinity(), pmax = 0.0, integral = 0.0;
            double prev_s = 0.0;
            for (const auto& st : tube.stations) {
                const double prod = st.density.rho_L.norm() * st.speed;
                pmin = std::min(pmin, prod);
                pmax = std::max(pmax, prod);
                const double ds = st.arclength - prev_s;
                prev_s = st.arclength;
                integral += dv.sample(st.position) / st.speed * (ds > 0 ? ds : 0.0);
            }
            const double variation = (pmax - pmin) / (0.5 * (pmax + pmin));
            worst_var = std::max(worst_var, variation);
            worst_line = std::max(worst_line, std::abs(integral));
            r.table.push_back({double(t), double(tube.stations.size()), variation,
                               std::abs(integral)});
        }
        r.residual.max_abs = worst_var;
        r.residual.nodes = tubes.size();
        r.refinement.push_back({f.grid.spacing[0], worst_var});
        r.inputs = "converging radial flow on a " + grid_desc(f.grid) + " grid, " +
                   std::to_string(f.seeds.size()) + " tubes, flux " + fmtg(f.flux);
        r.verdict = convergence_verdict(r.refinement, 1e-2, &r.notes);
        r.order = worst_var <= kRoundoffFloor ? std::numeric_limits<double>::infinity() : 0.0;
        r.notes += " tube areas are sized as flux/speed, which makes the product constant by "
                   "construction; the independent content is the streamline line integral of "
                   "div(u)/|u| (reported per tube), which must also vanish and does.";
        r.metrics = {{"worst_product_variation", worst_var},
                     {"worst_line_integral", worst_line},
                     {"tubes", double(tubes.size())}};
        out.push_back(std::move(r));
    }

    return out;
}

std::vector<ClaimResult> audit_theorem1(const AuditOptions& opt) {
    std::vector<ClaimResult> out;
    const int levels = clamp_levels(opt.refinements);

    auto run_case = [&](const std::string& id, const std::string& anchor,
                        const std::function<Vec3(const Vec3&)>& flow,
                        const std::string& inputs) {
        ClaimResult r;
        r.id = id;
        r.anchor = anchor;
        r.table_header = {"h", "max_abs_residual", "probe_magnitude"};
        GridSpec g = clamped_box({17, 17}, {2.0, 2.0}, {0.0, 0.0});
        for (int l = 0; l < levels; ++l) {
            const VectorField u = sample_vector(g, flow, "m/s");
            const VectorField res = advection_identity_residual(u);
            const ResidualStats stats = residual_stats(res);
            const double probe = res.sample({1.0, 1.0, 0.0}).norm();
            r.refinement.push_back({g.spacing[0], stats.max_abs});
            r.table.push_back({g.spacing[0], stats.max_abs, probe});
            if (l == levels - 1) {
                r.residual = stats;
                r.metrics.push_back({"probe_magnitude_at_1_1", probe});
            }
            if (l + 1 < levels) g = g.refined();
        }
        r.order = estimate_order(r.refinement);
        r.inputs = inputs;
        r.verdict = convergence_verdict(r.refinement, 1e-10, &r.notes);
        r.notes += std::string(" ") + kScalarReadingNote;
        r.metrics.push_back({"order", r.order});
        out.push_back(std::move(r));
    };

    run_case("theorem1.shear-flow",
             "claimed identity (u.grad)u == grad(u1u2+u2u3+u3u1) - u div(u) on a simple "
             "shear flow u=(y,0,0)",
             [](const Vec3& p) { return Vec3{p.y, 0.0, 0.0}; },
             "u=(y,0,0) on clamped [0,2]^2 grids 17^2 doubling " + std::to_string(levels - 1) +
                 " times");

    run_case("theorem1.strain-flow",
             "claimed identity (u.grad)u == grad(u1u2+u2u3+u3u1) - u div(u) on a planar "
             "strain flow u=(x,-y,0)",
             [](const Vec3& p) { return Vec3{p.x, -p.y, 0.0}; },
             "u=(x,-y,0) on clamped [0,2]^2 grids 17^2 doubling " + std::to_string(levels - 1) +
                 " times; hand-derived residual is (x+y, x+y, 0)");

    return out;
}

std::vector<ClaimResult> audit_vector_line(const AuditOptions& opt) {
    std::vector<ClaimResult> out;
    const int levels = clamp_levels(opt.refinements);

    // --- steady parallel channel: every term vanishes ---------------------
    {
        ClaimResult r;
        r.id = "vector-line.steady-channel";
        r.anchor = "trajectory-sampled material derivative minus time derivative equals "
                   "grad(u1u2+u2u3+u3u1) on a steady parallel channel profile";
        r.table_header = {"h", "max_abs_residual", "l2_residual"};
        GridSpec g = channel_grid(16, 17, 1.0, 1.0);
        const double dt = 0.01;
        for (int l = 0; l < levels; ++l) {
            const VectorField u = sample_vector(
                g, [](const Vec3& p) { return Vec3{plane_channel_speed(1.0, 1.0, 1.0, p.y), 0.0, 0.0}; },
                "m/s");
            const VectorField lhs = material_minus_partial(u, u, u, dt);
            ScalarField up(g);
            for (std::size_t n = 0; n < u.nodes(); ++n) {
                const Vec3 v = u.vec_at(n);
                up[n] = v.x * v.y + v.y * v.z + v.z * v.x;
            }
            const VectorField gup = gradient(up);
            VectorField res(g, u.components(), "m/s^2");
            for (std::size_t n = 0; n < u.nodes(); ++n)
                res.set_vec(n, lhs.vec_at(n) - gup.vec_at(n));
            const ResidualStats stats = residual_stats(res);
            r.refinement.push_back({g.spacing[1], stats.max_abs});
            r.table.push_back({g.spacing[1], stats.max_abs, stats.l2});
            if (l == levels - 1) r.residual = stats;
            if (l + 1 < levels) g = g.refined();
        }
        r.order = estimate_order(r.refinement);
        r.inputs = "analytic parabolic profile, three identical snapshots dt=" + fmtg(dt) +
                   " apart, channel grids 16x17 upward";
        r.verdict = convergence_verdict(r.refinement, 1e-10, &r.notes);
        r.notes += " steady unidirectional flow: both sides vanish identically, so the relation "
                   "holds degenerately here.";
        r.metrics = {{"order", r.order}};
        out.push_back(std::move(r));
    }

    // --- simulated decaying vortex array ---------------------------------
    {
        ClaimResult r;
        r.id = "vector-line.decaying-vortex";
        r.anchor = "trajectory-sampled material derivative minus time derivative equals "
                   "grad(u1u2+u2u3+u3u1) on simulated decaying-vortex snapshots";
        const int base = opt.grid >= 16 ? opt.grid : 32;
        const double t_snap = 0.05;
        const TaylorGreenParams tg{0.1, 1.0};
        r.table_header = {"h", "max_abs_residual", "l2_residual", "dt"};
        for (int l = 0; l < levels; ++l) {
            const int n = base << l;
            SolverConfig cfg;
            cfg.grid = taylor_green_grid(n);
            cfg.nu = tg.nu;
            const double h = cfg.grid.spacing[0];
            const double dt_limit =
                std::min(0.5 * h / tg.amplitude, 1.0 / (2.0 * cfg.nu * 2.0 / (h * h)));
            const int steps = std::max(2, int(std::ceil(t_snap / (0.5 * dt_limit))));
            cfg.dt = t_snap / steps;
            SolverState s = make_state(cfg, taylor_green(tg, 0.0, cfg.grid));
            for (int k = 0; k < steps - 1; ++k) step(s, cfg);
            const VectorField prev = s.velocity;
            step(s, cfg);
            const VectorField mid = s.velocity;
            step(s, cfg);
            const VectorField next = s.velocity;

            const VectorField lhs = material_minus_partial(prev, mid, next, cfg.dt);
            ScalarField up(cfg.grid);
            for (std::size_t m = 0; m < mid.nodes(); ++m) {
                const Vec3 v = mid.vec_at(m);
                up[m] = v.x * v.y + v.y * v.z + v.z * v.x;
            }
            const VectorField gup = gradient(up);
            VectorField res(cfg.grid, mid.components(), "m/s^2");
            for (std::size_t m = 0; m < mid.nodes(); ++m)
                res.set_vec(m, lhs.vec_at(m) - gup.vec_at(m));
            const ResidualStats stats = residual_stats(res);
            r.refinement.push_back({h, stats.max_abs});
            r.table.push_back({h, stats.max_abs, stats.l2, cfg.dt});
            if (l == levels - 1) r.residual = stats;
        }
        r.order = estimate_order(r.refinement);
        r.inputs = "decaying vortex array, nu=0.1, snapshots centered at t=" + fmtg(t_snap) +
                   ", grids " + std::to_string(base) + "^2 doubling " +
                   std::to_string(levels - 1) + " times";
        r.verdict = convergence_verdict(r.refinement, 1e-6, &r.notes);
        r.notes += std::string(" ") + kScalarReadingNote +
                   " The residual approaches a nonzero limit: on this flow the claimed "
                   "right-hand side does not reproduce the advective acceleration.";
        r.metrics = {{"order", r.order}, {"finest_max_abs", r.refinement.back().error}};
        out.push_back(std::move(r));
    }

    return out;
}

std::vector<ClaimResult> audit_poiseuille(const AuditOptions& opt) {
    (void)opt;
    std::vector<ClaimResult> out;

    struct Level {
        double hy = 0.0;
        double centerline_dev = 0.0;
        double profile_dev = 0.0;
        double plane_dev = 0.0;
        double pipe_dev = 0.0;
        double curvature = 0.0;
        bool converged = false;
        long steps = 0;
    };
    const double G = 1.0, mu = 1.0, R = 1.0;
    std::vector<Level> lv;
    for (int l = 0; l < 2; ++l) {
        const int nx = 16 << l;
        const int ny = (16 << l) + 1;
        const ChannelSteady cs = run_channel_steady(nx, ny);
        Level L;
        L.hy = cs.cfg.grid.spacing[1];
        L.converged = cs.steady.converged;
        L.steps = cs.steady.steps;
        if (L.converged) {
            const ScalarField ux = comp_field(cs.state.velocity, 0);
            const int jc = (ny - 1) / 2;
            const double u_center = ux.at(0, jc);
            const double u_ref = G * R * R / (2.0 * mu);
            L.centerline_dev = std::abs(u_center - u_ref) / u_ref;
            double prof = 0.0;
            for (int j = 0; j < ny; ++j) {
                const double y = cs.cfg.grid.position(0, j, 0).y;
                prof = std::max(prof,
                                std::abs(ux.at(0, j) - plane_channel_speed(G, mu, R, y)));
            }
            L.profile_dev = prof / u_ref;
            const ScalarField d2 = second_derivative(ux, 1);
            double curv_sum = 0.0;
            int count = 0;
            double plane = 0.0, pipe = 0.0;
            const double plane_const = G / mu;
            const double pipe_const = G / (2.0 * mu);
            for (int j = 1; j < ny - 1; ++j) {
                const double c = -d2.at(0, j);
                curv_sum += c;
                ++count;
                plane = std::max(plane, std::abs(c - plane_const) / plane_const);
                pipe = std::max(pipe, std::abs(c - pipe_const) / pipe_const);
            }
            L.curvature = curv_sum / count;
            L.plane_dev = plane;
            L.pipe_dev = pipe;
        }
        lv.push_back(L);
    }

    const std::string inputs = "forced channel, G=1, mu=1, half-height 1, grids 16x17 and "
                               "32x33, steady to 1e-8";
    const bool all_converged = lv[0].converged && lv[1].converged;

    auto make_claim = [&](const std::string& id, const std::string& anchor,
                          double Level::*dev, double tol, const std::string& extra) {
        ClaimResult r;
        r.id = id;
        r.anchor = anchor;
        r.inputs = inputs;
        r.table_header = {"h", "rel_deviation", "steps"};
        for (const auto& L : lv) {
            r.refinement.push_back({L.hy, L.*dev});
            r.table.push_back({L.hy, L.*dev, double(L.steps)});
        }
        r.residual.max_abs = lv.back().*dev;
        r.residual.nodes = 2;
        if (!all_converged) {
            r.verdict = Verdict::not_applicable;
            r.notes = "steady state not reached within the step budget.";
        } else {
            r.verdict = convergence_verdict(r.refinement, tol, &r.notes);
        }
        r.notes += extra;
        r.metrics = {{"centerline_dev", lv.back().centerline_dev},
                     {"measured_curvature", lv.back().curvature},
                     {"plane_constant", G / mu},
                     {"pipe_constant", G / (2.0 * mu)}};
        out.push_back(std::move(r));
    };

    make_claim("poiseuille.profile-shape",
               "steady pressure-driven channel profile matches the parabola G(R^2-y^2)/(2 mu)",
               &Level::profile_dev, 1e-2,
               " the one-dimensional steady balance is quadratic, so the discrete profile "
               "reproduces the parabola to solver tolerance.");
    make_claim("poiseuille.curvature-plane-form",
               "steady channel profile curvature -d2u/dy2 equals G/mu",
               &Level::plane_dev, 1e-2, "");
    make_claim("poiseuille.curvature-pipe-form",
               "steady channel profile curvature -d2u/dy2 against the pipe-form constant "
               "G/(2 mu)",
               &Level::pipe_dev, 1e-2,
               " the measured curvature is G/mu; the pipe-form constant is half of it, so the "
               "relative deviation sits at 1.0 at every resolution (the plane-channel factor-2 "
               "difference, surfaced explicitly).");

    return out;
}

std::vector<ClaimResult> audit_decay(const AuditOptions& opt) {
    std::vector<ClaimResult> out;
    ClaimResult r;
    r.id = "decay.finite-stop";
    r.anchor = "an unforced decaying vortex array comes to a complete stop (energy below "
               "threshold) by the predicted finite time t0";

    const int n = opt.grid >= 16 ? opt.grid : 64;
    SolverConfig cfg;
    cfg.grid = taylor_green_grid(n);
    cfg.nu = 0.1;
    const TaylorGreenParams tg{cfg.nu, 1.0};
    const VectorField u0 = taylor_green(tg, 0.0, cfg.grid);
    const ScalarField p0 = taylor_green_pressure(tg, 0.0, cfg.rho, cfg.grid);

    const double k_gh = opt.config.get_double("audit.k_gh", 0.0);
    const MuRotEstimate mu_est = estimate_mu_rot(u0, k_gh);
    const double dp_du = opt.config.has("audit.dp_du") ? opt.config.get_double("audit.dp_du")
                                                       : estimate_dP_du(u0, p0);
    const double omega0 = opt.config.get_double("audit.omega0", 1.0);
    const double t0_cap = opt.config.get_double("audit.t0_cap", 20.0);

    SolutionParams sp;
    sp.omega0 = omega0;
    sp.vartheta = cfg.nu;
    sp.mu_rot = {mu_est.magnitude, 0.0, 0.0};
    const DecayTimeResult dt_res = decay_time(sp, cfg.rho, dp_du, {1.0, 0.0, 0.0});

    r.inputs = "decaying vortex array " + std::to_string(n) + "^2, nu=" + fmtg(cfg.nu) +
               ", omega0=" + fmtg(omega0) + ", dP/du " +
               (opt.config.has("audit.dp_du") ? "set to " : "estimated as ") + fmtg(dp_du);
    r.metrics = {{"mu_rot_magnitude", mu_est.magnitude},
                 {"mu_rot_usable_nodes", double(mu_est.usable_nodes)},
                 {"dp_du", dp_du},
                 {"stop_threshold", opt.stop_threshold}};

    if (dt_res.singular || dt_res.already_stopped || !(dt_res.t0 > 0.0)) {
        r.verdict = Verdict::not_applicable;
        r.notes = "predicted stopping time not computable from this flow: " + dt_res.note;
        out.push_back(std::move(r));
        return out;
    }

    double t0 = dt_res.t0;
    bool capped = false;
    if (t0 > t0_cap) {
        t0 = t0_cap;
        capped = true;
    }
    r.metrics.push_back({"t0", t0});

    const double h = cfg.grid.spacing[0];
    const double dt_limit =
        std::min(0.5 * h / tg.amplitude, 1.0 / (2.0 * cfg.nu * 2.0 / (h * h)));
    const long steps = std::max<long>(1, long(std::ceil(t0 / (0.9 * dt_limit))));
    cfg.dt = t0 / double(steps);

    SolverState s = make_state(cfg, u0);
    const double e0 = kinetic_energy(s, cfg.rho);
    RunOptions ro;
    ro.t_end = t0;
    ro.sample_every = static_cast<int>(std::max<long>(1, steps / 50));
    const TimeSeries ts = run(s, cfg, ro);

    const double ratio = kinetic_energy(s, cfg.rho) / e0;
    const double analytic = taylor_green_energy_ratio(tg, t0);
    const double rel_err = std::abs(ratio - analytic) / analytic;

    r.table_header = {"t", "energy_ratio", "analytic_ratio"};
    for (std::size_t i = 0; i < ts.t.size(); ++i)
        r.table.push_back({ts.t[i], ts.energy[i] / e0, taylor_green_energy_ratio(tg, ts.t[i])});

    r.residual.max_abs = ratio;
    r.residual.nodes = std::size_t(steps);
    r.metrics.push_back({"energy_ratio_measured", ratio});
    r.metrics.push_back({"energy_ratio_analytic", analytic});
    r.metrics.push_back({"measurement_rel_err", rel_err});

    if (rel_err > 0.03) {
        r.verdict = Verdict::not_applicable;
        r.notes = "solver energy disagrees with the analytic decay law by " + fmtg(rel_err) +
                  " — measurement not trusted.";
    } else if (ratio <= opt.stop_threshold) {
        r.verdict = Verdict::holds;
        r.notes = "energy at t0 is below the stop threshold.";
    } else {
        r.verdict = Verdict::fails;
        r.notes = "viscous decay is exponential: at the predicted stopping time t0=" + fmtg(t0) +
                  " the flow retains a fraction " + fmtg(ratio) +
                  " of its energy (analytic " + fmtg(analytic) +
                  "), far above the stop threshold " + fmtg(opt.stop_threshold) +
                  "; a complete stop at finite time is not observed.";
    }
    if (capped)
        r.notes += " predicted t0=" + fmtg(dt_res.t0) + " capped to " + fmtg(t0_cap) +
                   " to keep the run bounded.";
    out.push_back(std::move(r));
    return out;
}

std::vector<ClaimResult> audit_eq12(const AuditOptions& opt) {
    std::vector<ClaimResult> out;
    const int n = opt.grid >= 32 ? opt.grid : 128;
    const RadialFixture f = make_radial_fixture(n);
    const auto tubes = extract_density_structure(f.u, f.rho, f.seeds, f.flux);

    // --- back-prediction of station speeds --------------------------------
    {
        ClaimResult r;
        r.id = "eq12.tube-prediction";
        r.anchor = "station speeds along extracted streamtubes are reproduced by the "
                   "parametric velocity formula with least-squares-fitted coefficients";
        std::vector<double> xs, ys, ts;
        for (const auto& tube : tubes)
            for (const auto& st : tube.stations) {
                xs.push_back(1.0 / st.density.rho_L.norm());
                ys.push_back(1.0 / st.density.rho_S);
                ts.push_back(st.speed);
            }
        const PairFit fit = fit_two_columns(xs, ys, ts);
        double max_rel = 0.0, sum_sq = 0.0;
        r.table_header = {"inv_rho_L", "inv_rho_S", "speed", "predicted", "rel_err"};
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double pred = fit.a * xs[i] + fit.b * ys[i];
            const double rel = std::abs(pred - ts[i]) / ts[i];
            max_rel = std::max(max_rel, rel);
            sum_sq += rel * rel;
            if (i % 8 == 0) r.table.push_back({xs[i], ys[i], ts[i], pred, rel});
        }
        const double rms = std::sqrt(sum_sq / double(xs.size()));
        r.residual.max_abs = max_rel;
        r.residual.l2 = rms;
        r.residual.nodes = xs.size();
        r.refinement.push_back({f.grid.spacing[0], max_rel});
        r.inputs = "converging radial flow on " + grid_desc(f.grid) + ", " +
                   std::to_string(tubes.size()) + " tubes, " + std::to_string(xs.size()) +
                   " stations";
        r.verdict = convergence_verdict(r.refinement, 1e-2, &r.notes);
        r.notes += " caution: mass-per-length is defined through the carried flux, so "
                   "1/|rho_L| is proportional to the speed and this fit is consistent by "
                   "construction — a coherence check of the formula's density coupling, not "
                   "independent evidence for it.";
        r.metrics = {{"fit_taper_coeff", fit.a},
                     {"fit_cross_coeff", fit.b},
                     {"max_rel_err", max_rel},
                     {"rms_rel_err", rms},
                     {"degenerate_fit", fit.degenerate ? 1.0 : 0.0}};
        out.push_back(std::move(r));
    }

    // --- speed/density/pressure chain along tubes -------------------------
    {
        ClaimResult r;
        r.id = "eq12.bernoulli-chain";
        r.anchor = "along a streamtube, rising speed goes with rising mass-per-area, falling "
                   "mass-per-length and falling pressure";
        bool all_pass = true;
        std::string detail;
        std::size_t states_total = 0;
        r.table_header = {"tube", "states", "pass", "first_violation"};
        for (std::size_t t = 0; t < tubes.size(); ++t) {
            std::vector<ChainState> chain;
            for (std::size_t i = 0; i < tubes[t].stations.size(); i += 4) {
                const auto& st = tubes[t].stations[i];
                chain.push_back({st.speed, st.density.rho_S, st.density.rho_L.norm(),
                                 f.p.sample(st.position)});
            }
            const ChainAuditResult ca = bernoulli_chain_audit(chain);
            states_total += chain.size();
            all_pass = all_pass && ca.pass;
            if (!ca.pass && detail.empty()) detail = ca.note;
            r.table.push_back({double(t), double(chain.size()), ca.pass ? 1.0 : 0.0,
                               double(ca.first_violation)});
        }
        r.residual.max_abs = all_pass ? 0.0 : 1.0;
        r.residual.nodes = states_total;
        r.inputs = "station chains (every 4th station) along " + std::to_string(tubes.size()) +
                   " tubes of the converging radial flow, exact Bernoulli pressure sampled on "
                   "the centerline";
        r.verdict = all_pass ? Verdict::holds : Verdict::fails;
        r.notes = all_pass ? "speed rises toward the sink while mass-per-length and pressure "
                             "fall; mass-per-area is constant and passes the non-strict "
                             "comparison."
                           : "chain violated: " + detail;
        r.metrics = {{"tubes", double(tubes.size())}, {"states", double(states_total)}};
        out.push_back(std::move(r));
    }

    // --- cross-stream stations of a channel -------------------------------
    {
        ClaimResult r;
        r.id = "eq12.cross-stream";
        r.anchor = "parametric-formula prediction error across the channel at a fixed "
                   "streamwise position (reported, no pass/fail reading)";
        const GridSpec g = channel_grid(16, 33, 1.0, 1.0);
        const double G = 1.0, mu = 1.0, R = 1.0, q = 0.01;
        const double hy = g.spacing[1];
        std::vector<double> xs, ys, ts;
        std::vector<ChainState> chain;
        const int jc = (g.dims[1] - 1) / 2;
        for (int j = 1; j <= jc; ++j) {
            const double y = g.position(0, j, 0).y;
            const double u = plane_channel_speed(G, mu, R, y);
            xs.push_back(u / (1.0 * q)); // 1/|rho_L| with rho_L = rho q / u
            ys.push_back(1.0 / (1.0 * hy));
            ts.push_back(u);
            chain.push_back({u, 1.0 * hy, 1.0 * q / u, 0.0});
        }
        const PairFit fit = fit_two_columns(xs, ys, ts);
        double max_rel = 0.0, sum_sq = 0.0;
        r.table_header = {"inv_rho_L", "speed", "predicted", "rel_err"};
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double pred = fit.a * xs[i] + fit.b * ys[i];
            const double rel = std::abs(pred - ts[i]) / ts[i];
            max_rel = std::max(max_rel, rel);
            sum_sq += rel * rel;
            r.table.push_back({xs[i], ts[i], pred, rel});
        }
        const ChainAuditResult ca = bernoulli_chain_audit(chain);
        r.residual.max_abs = max_rel;
        r.residual.l2 = std::sqrt(sum_sq / double(xs.size()));
        r.residual.nodes = xs.size();
        r.inputs = "analytic channel profile on " + grid_desc(g) +
                   ", stations wall to centerline at fixed x, per-streamline flux " + fmtg(q);
        r.verdict = Verdict::not_applicable;
        r.notes = "cross-stream stations belong to different streamlines, so no pass/fail "
                  "reading is defined; the error distribution and chain outcome are reported. "
                  "Pressure is uniform across the channel, so the falling-pressure link of the "
                  "chain passes only under the non-strict comparison (chain_pass metric). "
                  "As with the tube fit, per-streamline mass-per-length is flux-defined and "
                  "makes the prediction consistent by construction.";
        r.metrics = {{"max_rel_err", max_rel},
                     {"rms_rel_err", r.residual.l2},
                     {"chain_pass", ca.pass ? 1.0 : 0.0},
                     {"fit_taper_coeff", fit.a},
                     {"fit_cross_coeff", fit.b}};
        out.push_back(std::move(r));
    }

    return out;
}

std::vector<ClaimResult> audit_all(const AuditOptions& opt) {
    std::vector<ClaimResult> all;
    for (auto* fn : {audit_foundations, audit_theorem1, audit_vector_line, audit_poiseuille,
                     audit_decay, audit_eq12}) {
        auto part = fn(opt);
        for (auto& r : part) all.push_back(std::move(r));
    }
    return all;
}

// ---------------------------------------------------------------------------
// Reporting
// ---------------------------------------------------------------------------

const std::vector<std::string>& known_config_keys() {
    static const std::vector<std::string> keys = {
        "audit.omega0", "audit.dp_du", "audit.k_gh", "audit.stop_threshold", "audit.t0_cap",
        "audit.rho_l_threshold", "audit.rho_s_threshold", "audit.grid", "audit.refinements",
        "sim.case", "sim.nx", "sim.ny", "sim.nu", "sim.rho", "sim.dt", "sim.t_end",
        "sim.forcing_x", "sim.forcing_y", "sim.bc", "sim.sample_every", "sim.amplitude",
        "sim.poisson_tol", "sim.poisson_max_iters", "sim.length_x", "sim.half_height",
        "tube.rho", "tube.flux", "tube.step", "tube.max_steps", "tube.stagnation_speed",
        "tube.div_tolerance",
        "eq12.omega0", "eq12.pressure_drop", "eq12.segment_length", "eq12.theta1",
        "eq12.theta2", "eq12.vartheta", "eq12.mu_rot", "eq12.theta3", "eq12.rho_l",
        "eq12.rho_s", "eq12.rho", "eq12.rho_l_threshold", "eq12.rho_s_threshold",
    };
    return keys;
}

void validate_config_keys(const Config& cfg) {
    const auto& known = known_config_keys();
    std::string bad;
    for (const auto& key : cfg.keys())
        if (std::find(known.begin(), known.end(), key) == known.end()) bad += " '" + key + "'";
    if (!bad.empty()) throw ConfigError("unknown config keys:" + bad);
}

void render_report(const std::vector<ClaimResult>& results, const std::string& out_dir,
                   const Config& cfg) {
    if (results.empty()) throw std::invalid_argument("render_report needs at least one result");
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);

    using json = nlohmann::ordered_json;
    auto num = [](double v) -> json {
        if (std::isfinite(v)) return v;
        return v > 0 ? "exact" : "nan";
    };

    json root;
    root["toolkit"]["name"] = kToolkitName;
    root["toolkit"]["version"] = kToolkitVersion;
    {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx",
                      static_cast<unsigned long long>(cfg.hash()));
        root["config_hash"] = buf;
    }
    root["config_text"] = cfg.canonical_text();
    root["claims"] = json::array();
    for (const auto& r : results) {
        json c;
        c["id"] = r.id;
        c["anchor"] = r.anchor;
        c["inputs"] = r.inputs;
        c["verdict"] = to_string(r.verdict);
        c["residual"]["max_abs"] = num(r.residual.max_abs);
        c["residual"]["l2"] = num(r.residual.l2);
        c["residual"]["nodes"] = r.residual.nodes;
        c["order"] = num(r.order);
        c["refinement"] = json::array();
        for (const auto& s : r.refinement)
            c["refinement"].push_back({{"h", num(s.h)}, {"error", num(s.error)}});
        c["metrics"] = json::object();
        for (const auto& [key, value] : r.metrics) c["metrics"][key] = num(value);
        c["notes"] = r.notes;
        root["claims"].push_back(std::move(c));
    }

    {
        std::ofstream os(out_dir + "/report.json");
        if (!os) throw ConfigError("cannot open '" + out_dir + "/report.json' for writing");
        os << root.dump(2) << "\n";
        if (!os) throw ConfigError("write to '" + out_dir + "/report.json' failed");
    }

    for (const auto& r : results) {
        std::vector<std::string> header = r.table_header;
        std::vector<std::vector<double>> rows = r.table;
        if (rows.empty() && !r.refinement.empty()) {
            header = {"h", "residual"};
            for (const auto& s : r.refinement) rows.push_back({s.h, s.error});
        }
        if (rows.empty()) continue;
        const std::string path = out_dir + "/" + r.id + ".csv";
        std::ofstream os(path);
        if (!os) throw ConfigError("cannot open '" + path + "' for writing");
        for (std::size_t i = 0; i < header.size(); ++i)
            os << (i ? "," : "") << header[i];
        os << "\n";
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << fmt17(row[i]);
            os << "\n";
        }
    }
}

} // namespace nsaudit
