#include "nsaudit/analytic_flows.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace nsaudit {

void PoiseuilleParams::validate() const {
    if (!(mu > 0.0)) throw std::invalid_argument("viscosity must be positive");
    if (!(length > 0.0)) throw std::invalid_argument("segment length must be positive");
    if (!(radius > 0.0)) throw std::invalid_argument("radius must be positive");
}

double poiseuille_speed(const PoiseuilleParams& p, double r) {
    p.validate();
    if (std::abs(r) > p.radius)
        throw std::domain_error("radial offset " + std::to_string(r) + " outside tube of radius " +
                                std::to_string(p.radius));
    return p.pressure_drop * (p.radius * p.radius - r * r) / (4.0 * p.mu * p.length);
}

double poiseuille_curvature(const PoiseuilleParams& p) {
    p.validate();
    return p.pressure_drop / (2.0 * p.mu * p.length);
}

double bent_tube_angular_velocity(const PoiseuilleParams& p, double r0, int sign, double r) {
    if (sign != 1 && sign != -1) throw std::invalid_argument("sign must be +1 or -1");
    const double arm = r0 + sign * r;
    if (!(arm > 0.0))
        throw std::domain_error("gyration arm r0 + sign*r = " + std::to_string(arm) +
                                " must be positive");
    return poiseuille_speed(p, r) / arm;
}

void VortexParams::validate() const {
    if (!(k_mu > 0.0)) throw std::invalid_argument("k_mu must be positive");
    if (!(R > 0.0)) throw std::invalid_argument("vortex radius must be positive");
    if (r0 < 0.0) throw std::invalid_argument("gyration radius must be non-negative");
    if (!(std::abs(x0) < R)) throw std::invalid_argument("|x0| must be below the vortex radius");
}

double vortex_curvature(const VortexParams& p, double r) {
    p.validate();
    if (r == 0.0) throw std::domain_error("curvature law has a pole at r = 0");
    const double ar = std::abs(r);
    if (ar > p.R)
        throw std::domain_error("radius " + std::to_string(r) + " outside vortex of radius " +
                                std::to_string(p.R));
    if (ar < p.x0) return 0.0; // inner region: flat law
    return p.k_mu * p.R * p.R / (ar * ar * ar);
}

void TaylorGreenParams::validate() const {
    if (!(nu > 0.0)) throw std::invalid_argument("viscosity must be positive");
}

Vec3 taylor_green_velocity(const TaylorGreenParams& p, double t, const Vec3& pos) {
    const double decay = std::exp(-2.0 * p.nu * t);
    return {p.amplitude * std::sin(pos.x) * std::cos(pos.y) * decay,
            -p.amplitude * std::cos(pos.x) * std::sin(pos.y) * decay, 0.0};
}

VectorField taylor_green(const TaylorGreenParams& p, double t, const GridSpec& grid) {
    p.validate();
    if (t < 0.0) throw std::invalid_argument("time must be non-negative");
    return sample_vector(
        grid, [&](const Vec3& pos) { return taylor_green_velocity(p, t, pos); }, "m/s");
}

ScalarField taylor_green_pressure(const TaylorGreenParams& p, double t, double rho,
                                  const GridSpec& grid) {
    p.validate();
    const double decay = std::exp(-4.0 * p.nu * t);
    const double a2 = p.amplitude * p.amplitude;
    return sample_scalar(
        grid,
        [&](const Vec3& pos) {
            return rho * a2 / 4.0 * (std::cos(2.0 * pos.x) + std::cos(2.0 * pos.y)) * decay;
        },
        "Pa");
}

double taylor_green_energy_ratio(const TaylorGreenParams& p, double t) {
    return std::exp(-4.0 * p.nu * t);
}

GridSpec taylor_green_grid(int n) {
    return periodic_square(n, 2.0 * std::numbers::pi);
}

double plane_channel_speed(double G, double mu, double R, double y) {
    if (!(mu > 0.0)) throw std::invalid_argument("viscosity must be positive");
    if (std::abs(y) > R)
        throw std::domain_error("offset " + std::to_string(y) + " outside channel half-height " +
                                std::to_string(R));
    return G * (R * R - y * y) / (2.0 * mu);
}

void RadialFlowParams::validate() const {
    if (strength == 0.0) throw std::invalid_argument("flow strength must be nonzero");
    if (!(rho > 0.0)) throw std::invalid_argument("density must be positive");
}

Vec3 radial_flow_velocity(const RadialFlowParams& p, const Vec3& pos) {
    const Vec3 d(pos.x - p.center.x, pos.y - p.center.y, 0.0);
    const double r2 = d.norm2();
    if (!(r2 > 0.0)) throw std::domain_error("radial flow is singular at its center");
    return d * (p.strength / r2);
}

VectorField radial_flow(const RadialFlowParams& p, const GridSpec& grid) {
    p.validate();
    return sample_vector(
        grid, [&](const Vec3& pos) { return radial_flow_velocity(p, pos); }, "m/s");
}

ScalarField radial_flow_pressure(const RadialFlowParams& p, const GridSpec& grid) {
    p.validate();
    return sample_scalar(
        grid,
        [&](const Vec3& pos) {
            const double speed2 = radial_flow_velocity(p, pos).norm2();
            return p.p_far - p.rho * speed2 / 2.0;
        },
        "Pa");
}

} // namespace nsaudit
