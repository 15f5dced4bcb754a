#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "nsaudit/field.hpp"
#include "nsaudit/vec.hpp"

namespace nsaudit {

/// Per-station mass bookkeeping of a moving medium: mass per unit tube
/// length (with the tube direction), mass per unit cross-section area,
/// and the bulk density they both derive from.
struct DensityStructure {
    Vec3 rho_L;          // kg/m, points along the tube
    double rho_S = 0.0;  // kg/m^2
    double rho = 0.0;    // kg/m^3
};

/// A body of fluid of mass M cut two ways into m equal-mass pieces:
/// lengthwise into tubes of length L_j and crosswise into slabs of
/// area S_i.
struct TubeDecomposition {
    double total_mass = 0.0;          // kg
    int m = 0;                        // piece count per cut
    std::vector<double> tube_lengths; // L_j, one per tube
    std::vector<double> slab_areas;   // S_i, one per slab

    double piece_mass() const { return total_mass / m; }
    /// Throws std::invalid_argument on m < 1, size mismatches, or
    /// non-positive entries.
    void validate() const;
};

/// Uniform decomposition sized so that every pair product
/// (mass/area)_i * (mass/length)_j lands exactly on 2*M*rho/m^2: this
/// forces S*L = M/(2 rho) for every (slab, tube) pair, and the builder
/// records that sizing in the returned pieces.
TubeDecomposition consistent_decomposition(double total_mass, double rho, int m);

/// Mass per unit area of one slab: (M/m)/S_i.
double rho_S_of_slab(const TubeDecomposition& d, int slab);

/// Mass per unit length of one tube: (M/m)/L_j.
double rho_L_of_tube(const TubeDecomposition& d, int tube);

/// All m*m pair products (mass/area)_i * (mass/length)_j, checked for
/// constancy and against the closed-form value 2*M*rho/m^2.
struct ProductInvariantResult {
    bool pass = false;
    double expected = 0.0;      // 2*M*rho/m^2
    double min_product = 0.0;
    double max_product = 0.0;
    double spread = 0.0;        // max/min - 1
    double worst_rel_dev = 0.0; // vs expected
    std::vector<double> products; // row-major, slab-major
    std::string note;
};

ProductInvariantResult product_invariant(const TubeDecomposition& d, double rho,
                                         double tolerance = 1e-12);

enum class TubeTermination { exit_domain, stagnation, step_limit };
std::string to_string(TubeTermination t);

struct TubeStation {
    double arclength = 0.0;
    Vec3 position;
    Vec3 tangent;       // unit
    double area = 0.0;  // m^2
    double speed = 0.0; // m/s
    DensityStructure density;
};

/// A streamtube traced through a sampled velocity field: centerline
/// stations plus the mass bookkeeping at each.
struct StreamTube {
    std::vector<TubeStation> stations;
    double flux = 0.0; // volumetric, m^3/s (2D: m^2/s)
    double rho = 0.0;
    double carried_mass = 0.0; // rho * flux * transit time, kg
    TubeTermination termination = TubeTermination::step_limit;

    double arclength() const;
};

struct TubeExtractionOptions {
    double step = 0.0;               // arclength step; <= 0 picks min(h)/2
    int max_steps = 100000;
    double stagnation_speed = 1e-9;  // m/s, tube ends below this
    double div_tolerance = 1e-3;     // max |div v| allowed, relative to max|v|/min(h)
};

/// Traces streamlines from each seed with classical fourth-order steps in
/// arclength and multilinear sampling, then sizes the tube so it carries
/// the given volumetric flux: area(s) = flux/|u(s)|, mass/length =
/// rho * area, mass/area = rho * (station spacing). Rejects fields whose
/// sampled divergence exceeds the option tolerance.
std::vector<StreamTube> extract_density_structure(const VectorField& v, double rho,
                                                  const std::vector<Vec3>& seeds, double flux,
                                                  const TubeExtractionOptions& opts = {});

/// Mass-per-length vector recomputed from the stored centerline: unit
/// tangent by central differences times rho * area. Throws GeometryError
/// on repeated centerline points.
Vec3 rho_L_at_station(const StreamTube& t, int station);

/// Same tube walked the other way; tangents and rho_L flip sign.
StreamTube reverse_tube(const StreamTube& t);

/// Station table as CSV. Columns, in order:
/// arclength,x,y,z,tx,ty,tz,area,rho_L,rho_S,speed
void write_tube_csv(std::ostream& os, const StreamTube& t);
void write_tube_csv_file(const std::string& path, const StreamTube& t);

} // namespace nsaudit
