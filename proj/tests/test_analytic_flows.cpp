/// @file
/// @brief Closed-form flow oracles: frozen point values, scaling laws,
/// domain guards, and discrete consistency of the sampled fields.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "nsaudit/analytic_flows.hpp"
#include "nsaudit/operators.hpp"

using namespace nsaudit;

namespace {
const double kPi = 3.14159265358979323846;
}

TEST_CASE("pipe profile: frozen values, wall zero, domain guard") {
    PoiseuilleParams p{4.0, 1.0, 1.0, 1.0};
    CHECK(poiseuille_speed(p, 0.0) == doctest::Approx(1.0));
    CHECK(poiseuille_speed(p, 1.0) == doctest::Approx(0.0));
    CHECK(poiseuille_speed(p, -1.0) == doctest::Approx(0.0));

    PoiseuilleParams q{8.0, 2.0, 1.0, 2.0};
    CHECK(poiseuille_speed(q, 1.0) == doctest::Approx(3.0)); // 8*(4-1)/(4*2*1)

    CHECK_THROWS_AS(poiseuille_speed(p, 1.5), std::domain_error);
    PoiseuilleParams bad{1.0, -1.0, 1.0, 1.0};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("pipe profile curvature is constant in r") {
    PoiseuilleParams p{4.0, 1.0, 1.0, 1.0};
    CHECK(poiseuille_curvature(p) == doctest::Approx(2.0)); // P/(2 mu L)

    // Discrete cross-check: -u'' via central differences on the closed form.
    double h = 1e-3;
    for (double r : {0.0, 0.3, 0.7}) {
        double num = -(poiseuille_speed(p, r - h) - 2.0 * poiseuille_speed(p, r) +
                       poiseuille_speed(p, r + h)) / (h * h);
        CHECK(num == doctest::Approx(2.0).epsilon(1e-7));
    }
}

TEST_CASE("bent tube: angular velocity and straight-tube recovery") {
    PoiseuilleParams p{4.0, 1.0, 1.0, 1.0};
    // speed(0.5) = 4*(1-0.25)/4 = 0.75; omega = 0.75/(2+0.5) = 0.3
    CHECK(bent_tube_angular_velocity(p, 2.0, +1, 0.5) == doctest::Approx(0.3));
    CHECK(bent_tube_angular_velocity(p, 2.0, -1, 0.5) == doctest::Approx(0.5));

    double r0 = 1e12;
    double omega = bent_tube_angular_velocity(p, r0, +1, 0.5);
    CHECK(std::abs(omega * (r0 + 0.5) - poiseuille_speed(p, 0.5)) < 1e-9);

    CHECK_THROWS_AS(bent_tube_angular_velocity(p, 0.5, -1, 0.7), std::domain_error);
}

TEST_CASE("vortex curvature law: frozen values and r^-3 scaling") {
    VortexParams v;
    v.k_mu = 1.0;
    v.R = 2.0;
    v.x0 = 0.1;
    CHECK(vortex_curvature(v, 1.0) == doctest::Approx(4.0)); // k R^2 / r^3

    VortexParams w;
    w.k_mu = 1.0;
    w.R = 1.0;
    w.x0 = 0.1;
    CHECK(vortex_curvature(w, 0.5) == doctest::Approx(8.0));
    CHECK(vortex_curvature(w, 1.0) == doctest::Approx(1.0));
    double lam = 1.7;
    CHECK(vortex_curvature(w, 0.5 * lam) ==
          doctest::Approx(vortex_curvature(w, 0.5) / (lam * lam * lam)));

    CHECK(vortex_curvature(w, 0.05) == doctest::Approx(0.0)); // flat core
    CHECK_THROWS_AS(vortex_curvature(w, 0.0), std::domain_error);
    CHECK_THROWS_AS(vortex_curvature(w, 1.5), std::domain_error);
}

TEST_CASE("decaying vortex array: frozen point values") {
    TaylorGreenParams p{0.1, 1.0};
    Vec3 u = taylor_green_velocity(p, 0.0, {kPi / 2.0, 0.0, 0.0});
    CHECK(u.x == doctest::Approx(1.0));
    CHECK(std::abs(u.y) < 1e-15);

    CHECK(taylor_green_energy_ratio(p, 1.0) ==
          doctest::Approx(std::exp(-0.4)).epsilon(1e-12));

    ScalarField pf = taylor_green_pressure(p, 0.0, 2.0, taylor_green_grid(8));
    CHECK(pf.at(0, 0) == doctest::Approx(1.0)); // rho A^2/4 * (1+1)
}

TEST_CASE("decaying vortex array: grid-mean energy density is A^2/4") {
    GridSpec g = taylor_green_grid(16);
    TaylorGreenParams p{0.05, 1.0};
    VectorField u = taylor_green(p, 0.0, g);
    double sum = 0.0;
    for (std::size_t n = 0; n < u.nodes(); ++n) sum += u.vec_at(n).norm2();
    double mean_energy = 0.5 * sum / static_cast<double>(u.nodes()); // rho = 1
    CHECK(mean_energy == doctest::Approx(0.25).epsilon(1e-13));
}

TEST_CASE("decaying vortex array is discretely divergence-free on square grids") {
    GridSpec g = taylor_green_grid(32);
    TaylorGreenParams p{0.1, 1.3};
    VectorField u = taylor_green(p, 0.2, g);
    // With hx = hy the central-difference divergence cancels analytically.
    CHECK(divergence(u).max_abs() < 1e-13);
}

TEST_CASE("plane channel profile") {
    CHECK(plane_channel_speed(1.0, 1.0, 1.0, 0.0) == doctest::Approx(0.5));
    CHECK(plane_channel_speed(1.0, 1.0, 1.0, 1.0) == doctest::Approx(0.0));
    CHECK(plane_channel_speed(1.0, 1.0, 1.0, -1.0) == doctest::Approx(0.0));
    CHECK(plane_channel_speed(4.0, 2.0, 0.5, 0.25) == doctest::Approx(0.1875));
}

TEST_CASE("radial flow: frozen velocity/pressure and center guard") {
    RadialFlowParams p;
    p.center = {0.0, 0.5, 0.0};
    p.strength = 2.0;
    p.rho = 2.0;
    p.p_far = 1.0;
    Vec3 u = radial_flow_velocity(p, {1.0, 0.5, 0.0});
    CHECK(u.x == doctest::Approx(2.0)); // strength * d / |d|^2 with |d| = 1
    CHECK(std::abs(u.y) < 1e-15);

    GridSpec g = clamped_box({5, 5}, {1.0, 1.0}, {0.5, 0.0});
    ScalarField pr = radial_flow_pressure(p, g);
    // At (1, 0.5): |u| = 2, P = 1 - 2*4/2 = -3.
    CHECK(pr.sample({1.0, 0.5, 0.0}) == doctest::Approx(-3.0));

    CHECK_THROWS_AS(radial_flow_velocity(p, p.center), std::domain_error);
    RadialFlowParams bad;
    bad.strength = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("radial flow samples are discretely near-divergence-free away from the center") {
    RadialFlowParams p;
    p.center = {-0.25, 0.5, 0.0};
    p.strength = -0.05;
    p.rho = 1.0;
    p.p_far = 1.0;
    GridSpec g = clamped_box({65, 65}, {1.0, 1.0}, {0.0, 0.0});
    VectorField u = radial_flow(p, g);
    double scale = u.max_norm() / std::min(g.spacing[0], g.spacing[1]);
    CHECK(divergence(u).max_abs() < 1e-3 * scale);
}
