/// @file
/// @brief Mass-decomposition invariants and streamtube extraction tests:
/// frozen per-piece densities, pair-product constancy, tracer
/// termination modes, and flux-consistent tube sizing.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "nsaudit/density.hpp"
#include "nsaudit/errors.hpp"
#include "nsaudit/field.hpp"
#include "nsaudit/grid.hpp"

using namespace nsaudit;

TEST_CASE("per-piece densities from frozen decompositions") {
    TubeDecomposition d;
    d.total_mass = 10.0;
    d.m = 5;
    d.tube_lengths.assign(5, 0.5);
    d.slab_areas.assign(5, 2.0);
    d.validate();
    CHECK(rho_S_of_slab(d, 0) == doctest::Approx(1.0)); // (10/5)/2
    CHECK(rho_L_of_tube(d, 4) == doctest::Approx(4.0)); // (10/5)/0.5

    TubeDecomposition e;
    e.total_mass = 12.0;
    e.m = 4;
    e.tube_lengths.assign(4, 1.0);
    e.slab_areas.assign(4, 1.5);
    CHECK(rho_S_of_slab(e, 2) == doctest::Approx(2.0)); // (12/4)/1.5
}

TEST_CASE("decomposition validation rejects malformed cuts") {
    TubeDecomposition d;
    d.total_mass = 1.0;
    d.m = 0;
    CHECK_THROWS_AS(d.validate(), std::invalid_argument);
    d.m = 2;
    d.tube_lengths = {1.0, 1.0};
    d.slab_areas = {1.0}; // size mismatch
    CHECK_THROWS_AS(d.validate(), std::invalid_argument);
    d.slab_areas = {1.0, -1.0};
    CHECK_THROWS_AS(d.validate(), std::invalid_argument);
}

TEST_CASE("consistent decomposition pins every pair product to 2 M rho / m^2") {
    const double M = 8.0;
    const double rho = 1.0;
    for (int m : {1, 4, 10, 100}) {
        CAPTURE(m);
        TubeDecomposition d = consistent_decomposition(M, rho, m);
        d.validate();
        // S * L = M / (2 rho) for every pair, so S = L = 2 here.
        CHECK(d.slab_areas[0] * d.tube_lengths[0] == doctest::Approx(4.0));
        ProductInvariantResult r = product_invariant(d, rho);
        CHECK(r.pass);
        CHECK(r.expected == doctest::Approx(2.0 * M * rho / (m * m)));
        CHECK(r.spread < 1e-12);
        CHECK(r.worst_rel_dev < 1e-12);
        CHECK(r.products.size() == static_cast<std::size_t>(m) * m);
    }
}

TEST_CASE("a 1% perturbation of one slab breaks the product invariant") {
    TubeDecomposition d = consistent_decomposition(8.0, 1.0, 10);
    d.slab_areas[3] *= 1.01;
    ProductInvariantResult r = product_invariant(d, 1.0);
    CHECK_FALSE(r.pass);
    CHECK(r.worst_rel_dev > 5e-3);
    CHECK(r.spread > 5e-3);
}

namespace {

VectorField uniform_flow(const GridSpec& g, const Vec3& u) {
    VectorField v(g);
    v.fill(u);
    return v;
}

} // namespace

TEST_CASE("uniform flow tube: flux sizing gives the frozen mass per length") {
    GridSpec g = clamped_box({33, 33}, {1.0, 1.0}, {0.0, 0.0});
    VectorField v = uniform_flow(g, {2.0, 0.0, 0.0});
    TubeExtractionOptions opts;
    opts.step = 0.05;
    const double rho = 1000.0;
    const double flux = 4.0;
    auto tubes = extract_density_structure(v, rho, {{0.05, 0.5, 0.0}}, flux, opts);
    REQUIRE(tubes.size() == 1);
    const StreamTube& t = tubes[0];
    CHECK(t.termination == TubeTermination::exit_domain);
    CHECK(t.rho == rho);
    CHECK(t.flux == flux);
    REQUIRE(t.stations.size() >= 5);
    for (const TubeStation& st : t.stations) {
        CHECK(st.speed == doctest::Approx(2.0));
        CHECK(st.area == doctest::Approx(2.0));                  // flux / speed
        CHECK(st.density.rho_L.norm() == doctest::Approx(2000.0)); // rho * area
        CHECK(st.density.rho_L.x > 0.0);                           // points downstream
        CHECK(st.density.rho == rho);
        CHECK(st.tangent.x == doctest::Approx(1.0));
    }
    // Mass per area uses the station spacing.
    CHECK(t.stations[1].density.rho_S == doctest::Approx(rho * opts.step));
    // carried mass = rho * flux * transit time, transit at speed 2.
    CHECK(t.carried_mass ==
          doctest::Approx(rho * flux * t.arclength() / 2.0).epsilon(0.05));
    // Exits through x = 1 from x = 0.05.
    CHECK(t.arclength() == doctest::Approx(0.95).epsilon(0.08));
}

TEST_CASE("recomputed mass-per-length matches the stored one and flips on reversal") {
    GridSpec g = clamped_box({33, 33}, {1.0, 1.0}, {0.0, 0.0});
    VectorField v = uniform_flow(g, {1.0, 1.0, 0.0});
    TubeExtractionOptions opts;
    opts.step = 0.02;
    auto tubes = extract_density_structure(v, 10.0, {{0.1, 0.1, 0.0}}, 0.5, opts);
    REQUIRE(tubes.size() == 1);
    const StreamTube& t = tubes[0];
    REQUIRE(t.stations.size() >= 5);
    for (int s = 1; s + 1 < static_cast<int>(t.stations.size()); ++s) {
        Vec3 recomputed = rho_L_at_station(t, s);
        Vec3 stored = t.stations[s].density.rho_L;
        CHECK((recomputed - stored).norm() < 1e-6 * stored.norm());
    }
    StreamTube r = reverse_tube(t);
    CHECK(r.stations.size() == t.stations.size());
    Vec3 p_first = r.stations.front().position;
    Vec3 p_last = t.stations.back().position;
    CHECK((p_first - p_last).norm() < 1e-14);
    CHECK(r.stations[2].tangent.x == doctest::Approx(-t.stations[t.stations.size() - 3].tangent.x));
    CHECK(r.stations[2].density.rho_L.x < 0.0);
    // Arclength still ascends after reversal.
    for (std::size_t s = 1; s < r.stations.size(); ++s)
        CHECK(r.stations[s].arclength > r.stations[s - 1].arclength - 1e-15);
}

TEST_CASE("tracing stops at a stagnation point") {
    GridSpec g = clamped_box({65, 65}, {2.0, 2.0}, {-1.0, -1.0});
    VectorField v = sample_vector(g, [](const Vec3& p) { return Vec3{-p.x, p.y}; });
    TubeExtractionOptions opts;
    opts.step = 0.01;
    opts.stagnation_speed = 0.05;
    auto tubes = extract_density_structure(v, 1.0, {{-0.8, 0.0, 0.0}}, 0.01, opts);
    REQUIRE(tubes.size() == 1);
    CHECK(tubes[0].termination == TubeTermination::stagnation);
    // The tube heads toward the origin along y = 0 and stops near it.
    CHECK(tubes[0].stations.back().position.x > -0.1);
    CHECK(std::abs(tubes[0].stations.back().position.y) < 1e-9);
}

TEST_CASE("closed orbits hit the step limit") {
    GridSpec g = clamped_box({65, 65}, {2.0, 2.0}, {-1.0, -1.0});
    VectorField v = sample_vector(g, [](const Vec3& p) { return Vec3{-p.y, p.x}; });
    TubeExtractionOptions opts;
    opts.step = 0.01;
    opts.max_steps = 50;
    auto tubes = extract_density_structure(v, 1.0, {{0.5, 0.0, 0.0}}, 0.01, opts);
    REQUIRE(tubes.size() == 1);
    CHECK(tubes[0].termination == TubeTermination::step_limit);
    CHECK(tubes[0].stations.size() == 51); // seed station + 50 steps
}

TEST_CASE("compressible samples are rejected up front") {
    GridSpec g = clamped_box({33, 33}, {2.0, 2.0}, {-1.0, -1.0});
    VectorField v = sample_vector(g, [](const Vec3& p) { return Vec3{p.x, p.y}; });
    CHECK_THROWS_AS(extract_density_structure(v, 1.0, {{0.5, 0.5, 0.0}}, 0.01, {}),
                    GeometryError);
}

TEST_CASE("tube CSV has the documented columns") {
    GridSpec g = clamped_box({33, 33}, {1.0, 1.0}, {0.0, 0.0});
    VectorField v = uniform_flow(g, {1.0, 0.0, 0.0});
    TubeExtractionOptions opts;
    opts.step = 0.1;
    auto tubes = extract_density_structure(v, 1.0, {{0.05, 0.5, 0.0}}, 0.1, opts);
    REQUIRE(tubes.size() == 1);
    std::ostringstream os;
    write_tube_csv(os, tubes[0]);
    std::istringstream is(os.str());
    std::string header;
    std::getline(is, header);
    CHECK(header == "arclength,x,y,z,tx,ty,tz,area,rho_L,rho_S,speed");
    int rows = 0;
    std::string line;
    while (std::getline(is, line))
        if (!line.empty()) ++rows;
    CHECK(rows == static_cast<int>(tubes[0].stations.size()));
}
