#include "nsaudit/parametric.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace nsaudit {

namespace {
// std::to_string keeps only 6 decimals, which renders the tiny densities
// these messages are about as "0.000000"; print full precision instead.
std::string num_str(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}
} // namespace

void SolutionParams::validate() const {
    if (!(omega0 > 0.0)) throw std::invalid_argument("omega0 must be positive");
    if (vartheta < 0.0) throw std::invalid_argument("viscosity must be non-negative");
    if (!(segment_length > 0.0)) throw std::invalid_argument("segment length must be positive");
    if (std::abs(theta2.norm() - 0.5) > 1e-12)
        throw std::invalid_argument("theta2 must have magnitude 1/2, got " +
                                    num_str(theta2.norm()));
}

Vec3 theta3_from_dP_dL(const Vec3& zeta, double dP_dL, double rho, double omega0) {
    if (!(rho > 0.0)) throw std::invalid_argument("density must be positive");
    if (!(omega0 > 0.0)) throw std::invalid_argument("omega0 must be positive");
    return zeta * (dP_dL / (rho * omega0));
}

Vec3 theta3_from_dP_du(const Vec3& zeta, double dP_du, double rho) {
    if (!(rho > 0.0)) throw std::invalid_argument("density must be positive");
    return zeta * (dP_du / rho);
}

std::string to_string(Regime r) {
    switch (r) {
        case Regime::laminar: return "Laminar";
        case Regime::turbulence_onset: return "TurbulenceOnset";
        case Regime::shock_onset: return "ShockOnset";
    }
    return "unknown";
}

RegimeVerdict classify_regime(const DensityStructure& ds, const RegimeThresholds& thr) {
    if (!(thr.rho_L > 0.0) || !(thr.rho_S > 0.0))
        throw std::invalid_argument("regime thresholds must be positive");
    RegimeVerdict v;
    const double mag_L = ds.rho_L.norm();
    const bool low_L = mag_L <= thr.rho_L;
    const bool low_S = ds.rho_S <= thr.rho_S;
    v.both_below = low_L && low_S;
    if (low_L) { // ties report the streamline rupture first
        v.regime = Regime::turbulence_onset;
        v.offending_quantity = "rho_L";
        v.value = mag_L;
    } else if (low_S) {
        v.regime = Regime::shock_onset;
        v.offending_quantity = "rho_S";
        v.value = ds.rho_S;
    }
    return v;
}

namespace {

Vec3 density_driven_part(const SolutionParams& p, const DensityStructure& ds,
                         const RegimeThresholds& thr) {
    const RegimeVerdict rv = classify_regime(ds, thr);
    if (rv.regime != Regime::laminar)
        throw SingularityError("velocity formula is singular: " + rv.offending_quantity + " = " +
                                   num_str(rv.value) + " (" + to_string(rv.regime) + ")",
                               rv);
    const double mag_L = ds.rho_L.norm();
    const Vec3 driver = p.theta1 / mag_L - p.theta2 / ds.rho_S;
    return (driver * p.pressure_drop - p.mu_rot * p.vartheta) / p.omega0;
}

} // namespace

Vec3 evaluate_velocity(const SolutionParams& p, const DensityStructure& ds,
                       const RegimeThresholds& thr) {
    p.validate();
    return density_driven_part(p, ds, thr) - p.theta3;
}

SplitVelocity split_velocity(const SolutionParams& p, const DensityStructure& ds,
                             const RegimeThresholds& thr) {
    p.validate();
    // u_L + u_0 and evaluate_velocity share the identical arithmetic:
    // a + (-b) and a - b round the same way.
    return {density_driven_part(p, ds, thr), -p.theta3};
}

VelocityTerms velocity_terms(const SolutionParams& p, const DensityStructure& ds,
                             const RegimeThresholds& thr) {
    p.validate();
    const RegimeVerdict rv = classify_regime(ds, thr);
    if (rv.regime != Regime::laminar)
        throw SingularityError("velocity formula is singular: " + rv.offending_quantity,
                               rv);
    VelocityTerms t;
    const double mag_L = ds.rho_L.norm();
    t.taper = p.theta1 * (p.pressure_drop / (p.omega0 * mag_L));
    t.cross = -p.theta2 * (p.pressure_drop / (p.omega0 * ds.rho_S));
    t.viscous = -p.mu_rot * (p.vartheta / p.omega0);
    t.drift = -p.theta3;
    return t;
}

DecayTimeResult decay_time(const SolutionParams& p, double rho, double dP_du, const Vec3& zeta) {
    p.validate();
    if (!(rho > 0.0)) throw std::invalid_argument("density must be positive");
    DecayTimeResult r;
    const double damping = rho * p.vartheta * p.mu_rot.norm();
    if (!(damping > 0.0)) {
        r.singular = true;
        r.note = "formula singular: rho * vartheta * |mu_rot| = 0 (division by zero)";
        return r;
    }
    r.t0 = std::abs(dP_du) / damping - 1.0 / p.omega0;
    r.already_stopped = r.t0 <= 0.0;
    r.note = "magnitudes taken along the supplied direction";
    if (zeta.norm() == 0.0) r.note += "; zeta not set";
    if (dP_du > 0.0) r.note += "; dP/du is positive (pressure rising with speed), magnitude used";
    if (p.pressure_drop != 0.0) r.note += "; pressure_drop nonzero, formula assumes free decay";
    return r;
}

ChainAuditResult bernoulli_chain_audit(const std::vector<ChainState>& states,
                                       double rel_tolerance) {
    if (states.size() < 2)
        throw std::invalid_argument("chain audit needs at least two states");
    if (rel_tolerance < 0.0) throw std::invalid_argument("tolerance must be non-negative");

    auto slack = [&](double ref) { return rel_tolerance * std::abs(ref); };
    ChainAuditResult r;
    for (std::size_t i = 0; i + 1 < states.size(); ++i) {
        const ChainState& a = states[i];
        const ChainState& b = states[i + 1];
        const double du = b.speed - a.speed;
        if (std::abs(du) <= slack(a.speed)) continue; // speed held, nothing to check
        const double dir = du > 0.0 ? 1.0 : -1.0;
        // Speed up: rho_S must not drop, rho_L and pressure must not rise
        // (all with slack); mirrored when speed drops.
        if (dir * (b.rho_S - a.rho_S) < -slack(a.rho_S)) {
            r.violating_quantity = "rho_S";
        } else if (dir * (b.rho_L - a.rho_L) > slack(a.rho_L)) {
            r.violating_quantity = "rho_L";
        } else if (dir * (b.pressure - a.pressure) > slack(a.pressure)) {
            r.violating_quantity = "pressure";
        } else {
            continue;
        }
        r.first_violation = static_cast<int>(i);
        r.note = "adjacent pair " + std::to_string(i) + "->" + std::to_string(i + 1) +
                 " breaks the chain at " + r.violating_quantity;
        return r;
    }
    r.pass = true;
    r.note = "speed, densities and pressure are co-/anti-monotone as claimed";
    return r;
}

} // namespace nsaudit
