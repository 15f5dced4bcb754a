#include "nsaudit/density.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "nsaudit/errors.hpp"
#include "nsaudit/operators.hpp"

namespace nsaudit {

void TubeDecomposition::validate() const {
    if (m < 1) throw std::invalid_argument("decomposition needs at least one piece");
    if (!(total_mass > 0.0)) throw std::invalid_argument("total mass must be positive");
    if (static_cast<int>(tube_lengths.size()) != m || static_cast<int>(slab_areas.size()) != m)
        throw std::invalid_argument("decomposition needs exactly m tube lengths and m slab areas");
    for (double l : tube_lengths)
        if (!(l > 0.0)) throw std::invalid_argument("tube lengths must be positive");
    for (double s : slab_areas)
        if (!(s > 0.0)) throw std::invalid_argument("slab areas must be positive");
}

TubeDecomposition consistent_decomposition(double total_mass, double rho, int m) {
    if (m < 1) throw std::invalid_argument("piece count must be at least 1");
    if (!(total_mass > 0.0) || !(rho > 0.0))
        throw std::invalid_argument("mass and density must be positive");
    // Every pair product (M/m)^2/(S L) equals 2*M*rho/m^2 exactly when
    // S*L = M/(2 rho); split that volume-like budget evenly.
    const double side = std::sqrt(total_mass / (2.0 * rho));
    TubeDecomposition d;
    d.total_mass = total_mass;
    d.m = m;
    d.tube_lengths.assign(m, side);
    d.slab_areas.assign(m, side);
    d.validate();
    return d;
}

double rho_S_of_slab(const TubeDecomposition& d, int slab) {
    d.validate();
    if (slab < 0 || slab >= d.m) throw std::invalid_argument("slab index out of range");
    return d.piece_mass() / d.slab_areas[slab];
}

double rho_L_of_tube(const TubeDecomposition& d, int tube) {
    d.validate();
    if (tube < 0 || tube >= d.m) throw std::invalid_argument("tube index out of range");
    return d.piece_mass() / d.tube_lengths[tube];
}

ProductInvariantResult product_invariant(const TubeDecomposition& d, double rho,
                                         double tolerance) {
    d.validate();
    if (!(rho > 0.0)) throw std::invalid_argument("density must be positive");
    ProductInvariantResult r;
    r.expected = 2.0 * d.total_mass * rho / (static_cast<double>(d.m) * d.m);
    r.products.reserve(static_cast<std::size_t>(d.m) * d.m);
    r.min_product = std::numeric_limits<double>::infinity();
    r.max_product = 0.0;
    const double piece = d.piece_mass();
    for (int i = 0; i < d.m; ++i) {
        const double rho_s = piece / d.slab_areas[i];
        for (int j = 0; j < d.m; ++j) {
            const double prod = rho_s * (piece / d.tube_lengths[j]);
            r.products.push_back(prod);
            r.min_product = std::min(r.min_product, prod);
            r.max_product = std::max(r.max_product, prod);
            r.worst_rel_dev =
                std::max(r.worst_rel_dev, std::abs(prod - r.expected) / r.expected);
        }
    }
    r.spread = r.max_product / r.min_product - 1.0;
    r.pass = r.spread < tolerance && r.worst_rel_dev < tolerance;
    r.note = r.pass ? "all pair products match 2*M*rho/m^2"
                    : "pair products deviate from 2*M*rho/m^2 (requires S*L = M/(2 rho) per pair)";
    return r;
}

std::string to_string(TubeTermination t) {
    switch (t) {
        case TubeTermination::exit_domain: return "exit";
        case TubeTermination::stagnation: return "stagnation";
        case TubeTermination::step_limit: return "step_limit";
    }
    return "unknown";
}

double StreamTube::arclength() const {
    return stations.empty() ? 0.0 : stations.back().arclength;
}

namespace {

struct ProbeResult {
    bool ok = false;       // false: left the domain
    bool stagnant = false; // speed below threshold
    Vec3 direction;
    double speed = 0.0;
};

ProbeResult probe(const VectorField& v, const Vec3& p, double stagnation_speed) {
    ProbeResult r;
    Vec3 u;
    try {
        u = v.sample(p);
    } catch (const GeometryError&) {
        return r; // outside the domain
    }
    r.ok = true;
    r.speed = u.norm();
    if (r.speed < stagnation_speed) {
        r.stagnant = true;
        return r;
    }
    r.direction = u / r.speed;
    return r;
}

StreamTube trace_tube(const VectorField& v, double rho, const Vec3& seed, double flux,
                      const TubeExtractionOptions& opts, double step) {
    StreamTube tube;
    tube.flux = flux;
    tube.rho = rho;
    tube.termination = TubeTermination::step_limit;

    double transit_time = 0.0;
    Vec3 x = seed;
    for (int n = 0; n <= opts.max_steps; ++n) {
        const ProbeResult here = probe(v, x, opts.stagnation_speed);
        if (!here.ok) {
            tube.termination = TubeTermination::exit_domain;
            break;
        }
        if (here.stagnant) {
            tube.termination = TubeTermination::stagnation;
            break;
        }

        TubeStation st;
        st.arclength = n * step;
        st.position = x;
        st.tangent = here.direction;
        st.speed = here.speed;
        st.area = flux / here.speed;
        st.density.rho = rho;
        st.density.rho_L = st.tangent * (rho * st.area);
        st.density.rho_S = rho * step;
        tube.stations.push_back(st);
        if (n == opts.max_steps) break; // step_limit, station budget spent

        // Classical fourth-order step along the unit-tangent field.
        const Vec3 k1 = here.direction;
        const ProbeResult p2 = probe(v, x + k1 * (step / 2.0), opts.stagnation_speed);
        if (!p2.ok || p2.stagnant) {
            tube.termination =
                p2.ok ? TubeTermination::stagnation : TubeTermination::exit_domain;
            break;
        }
        const ProbeResult p3 = probe(v, x + p2.direction * (step / 2.0), opts.stagnation_speed);
        if (!p3.ok || p3.stagnant) {
            tube.termination =
                p3.ok ? TubeTermination::stagnation : TubeTermination::exit_domain;
            break;
        }
        const ProbeResult p4 = probe(v, x + p3.direction * step, opts.stagnation_speed);
        if (!p4.ok || p4.stagnant) {
            tube.termination =
                p4.ok ? TubeTermination::stagnation : TubeTermination::exit_domain;
            break;
        }
        x += (k1 + p2.direction * 2.0 + p3.direction * 2.0 + p4.direction) * (step / 6.0);
        transit_time += step / here.speed;
    }
    tube.carried_mass = rho * flux * transit_time;
    return tube;
}

} // namespace

std::vector<StreamTube> extract_density_structure(const VectorField& v, double rho,
                                                  const std::vector<Vec3>& seeds, double flux,
                                                  const TubeExtractionOptions& opts) {
    v.check_finite("tube extraction input");
    if (!(rho > 0.0)) throw std::invalid_argument("density must be positive");
    if (!(flux > 0.0)) throw std::invalid_argument("tube flux must be positive");

    const GridSpec& g = v.grid();
    double min_h = g.spacing[0];
    for (double h : g.spacing) min_h = std::min(min_h, h);

    const double speed_scale = v.max_norm();
    if (speed_scale > 0.0) {
        const double div_scale = speed_scale / min_h;
        const double max_div = residual_stats(divergence(v)).max_abs;
        if (max_div > opts.div_tolerance * div_scale)
            throw GeometryError("field is not divergence-free enough for tube extraction: "
                                "max |div| = " +
                                std::to_string(max_div) + " exceeds " +
                                std::to_string(opts.div_tolerance) + " * max|u|/h");
    }

    const double step = opts.step > 0.0 ? opts.step : min_h / 2.0;
    std::vector<StreamTube> tubes;
    tubes.reserve(seeds.size());
    for (const Vec3& seed : seeds) tubes.push_back(trace_tube(v, rho, seed, flux, opts, step));
    return tubes;
}

Vec3 rho_L_at_station(const StreamTube& t, int station) {
    const int n = static_cast<int>(t.stations.size());
    if (n < 2) throw GeometryError("tube needs at least 2 stations for a tangent");
    if (station < 0 || station >= n) throw std::invalid_argument("station index out of range");
    const Vec3& here = t.stations[station].position;
    Vec3 d;
    if (station == 0)
        d = t.stations[1].position - here;
    else if (station == n - 1)
        d = here - t.stations[n - 2].position;
    else
        d = t.stations[station + 1].position - t.stations[station - 1].position;
    const double len = d.norm();
    if (!(len > 0.0))
        throw GeometryError("degenerate centerline tangent at station " + std::to_string(station));
    return d * ((t.rho * t.stations[station].area) / len);
}

StreamTube reverse_tube(const StreamTube& t) {
    StreamTube r = t;
    std::reverse(r.stations.begin(), r.stations.end());
    const double total = t.arclength();
    for (TubeStation& st : r.stations) {
        st.arclength = total - st.arclength;
        st.tangent = -st.tangent;
        st.density.rho_L = -st.density.rho_L;
    }
    return r;
}

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

void write_tube_csv(std::ostream& os, const StreamTube& t) {
    os << "arclength,x,y,z,tx,ty,tz,area,rho_L,rho_S,speed\n";
    for (const TubeStation& st : t.stations) {
        os << fmt17(st.arclength) << "," << fmt17(st.position.x) << "," << fmt17(st.position.y)
           << "," << fmt17(st.position.z) << "," << fmt17(st.tangent.x) << ","
           << fmt17(st.tangent.y) << "," << fmt17(st.tangent.z) << "," << fmt17(st.area) << ","
           << fmt17(st.density.rho_L.norm()) << "," << fmt17(st.density.rho_S) << ","
           << fmt17(st.speed) << "\n";
    }
}

void write_tube_csv_file(const std::string& path, const StreamTube& t) {
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot open '" + path + "' for writing");
    write_tube_csv(os, t);
    if (!os) throw ConfigError("write to '" + path + "' failed");
}

} // namespace nsaudit
