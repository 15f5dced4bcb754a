#pragma once

#include "nsaudit/field.hpp"
#include "nsaudit/grid.hpp"
#include "nsaudit/vec.hpp"

namespace nsaudit {

/// Pressure-driven laminar profile through a circular pipe section.
/// pressure_drop acts over segment length; radius is the distance from
/// the max-speed line to the wall.
struct PoiseuilleParams {
    double pressure_drop = 0.0; // Pa
    double mu = 1.0;            // Pa*s
    double length = 1.0;        // m
    double radius = 1.0;        // m

    /// Throws std::invalid_argument unless mu, length, radius > 0.
    void validate() const;
};

/// u(r) = pressure_drop * (R^2 - r^2) / (4 mu L). Peak at r = 0, zero at
/// the wall. Throws std::domain_error for |r| > R.
double poiseuille_speed(const PoiseuilleParams& p, double r);

/// -d2u/dr2 of the profile: pressure_drop / (2 mu L), independent of r.
double poiseuille_curvature(const PoiseuilleParams& p);

/// Angular velocity of fluid in the same profile bent around a gyration
/// center at distance r0: speed(r) / (r0 + sign*r). Throws
/// std::domain_error when the denominator is not positive. As r0 grows,
/// (r0 + sign*r) * omega recovers the straight-tube speed.
double bent_tube_angular_velocity(const PoiseuilleParams& p, double r0, int sign, double r);

/// Two-region curvature law for the angular-velocity profile of a decaying
/// vortex of radius R: flat inside |r| < x0, k_mu * R^2 / r^3 outside.
struct VortexParams {
    double k_mu = 1.0; // proportionality constant, caller-supplied
    double R = 1.0;    // vortex radius, m
    double r0 = 0.0;   // gyration-center line curvature radius, m
    double x0 = 0.0;   // inner/outer boundary, m

    void validate() const;
};

/// Throws std::domain_error at r = 0 (pole) and for |r| > R.
double vortex_curvature(const VortexParams& p, double r);

/// Decaying vortex array on a 2pi-periodic square: an exact unforced
/// incompressible flow used as the solver oracle.
///   u = A ( sin x cos y, -cos x sin y ) exp(-2 nu t)
///   P = rho A^2/4 (cos 2x + cos 2y) exp(-4 nu t)
/// Kinetic energy decays as exp(-4 nu t).
struct TaylorGreenParams {
    double nu = 0.1;        // m^2/s
    double amplitude = 1.0; // m/s

    void validate() const;
};

Vec3 taylor_green_velocity(const TaylorGreenParams& p, double t, const Vec3& pos);
VectorField taylor_green(const TaylorGreenParams& p, double t, const GridSpec& grid);
ScalarField taylor_green_pressure(const TaylorGreenParams& p, double t, double rho,
                                  const GridSpec& grid);
double taylor_green_energy_ratio(const TaylorGreenParams& p, double t);

/// n x n periodic grid over [0, 2pi)^2, the natural home of the flow above.
GridSpec taylor_green_grid(int n);

/// Plane-channel analog of the pipe profile: u(y) = G (R^2 - y^2)/(2 mu)
/// for a constant streamwise pressure gradient (or body force density) G,
/// half-height R, wall at |y| = R.
double plane_channel_speed(double G, double mu, double R, double y);

/// Steady radial flow from a 2D point source (strength > 0) or toward a
/// point sink (strength < 0): u = strength * (p - center) / |p - center|^2.
/// Away from the center this is an exact steady solution with pressure
/// P = p_far - rho |u|^2 / 2, so it doubles as a converging-flow fixture
/// where speed rises while pressure falls along every streamline.
struct RadialFlowParams {
    Vec3 center;
    double strength = 1.0; // m^2/s
    double rho = 1.0;      // kg/m^3
    double p_far = 0.0;    // Pa

    void validate() const;
};

Vec3 radial_flow_velocity(const RadialFlowParams& p, const Vec3& pos);
VectorField radial_flow(const RadialFlowParams& p, const GridSpec& grid);
ScalarField radial_flow_pressure(const RadialFlowParams& p, const GridSpec& grid);

} // namespace nsaudit
