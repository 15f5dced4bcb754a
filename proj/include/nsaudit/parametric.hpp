#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "nsaudit/density.hpp"
#include "nsaudit/vec.hpp"

namespace nsaudit {

/// Coefficients of the parametric velocity formula
///   u = (1/omega0) [ P_L ( theta1/|rho_L| - theta2/rho_S ) - vartheta*mu_rot ] - theta3
/// evaluated against a DensityStructure. All units SI; the formula is
/// implemented verbatim and its dimensional quirks are surfaced in audit
/// notes, not patched here.
struct SolutionParams {
    double omega0 = 1.0;        // natural frequency of the medium, rad/s
    double pressure_drop = 0.0; // P_L over the segment, Pa
    double segment_length = 1.0;// L, m
    Vec3 theta1;                // tube taper dS/dL, m
    Vec3 theta2 = {0.5, 0, 0};  // tube direction, |theta2| = 1/2 by definition
    double vartheta = 0.0;      // kinematic viscosity, m^2/s
    Vec3 mu_rot;                // vortex-viscosity vector, 1/(m*s)
    Vec3 theta3;                // pressure-change drift velocity, m/s

    double kappa() const { return pressure_drop / (2.0 * segment_length); } // Pa/m

    /// Throws std::invalid_argument unless omega0 > 0, vartheta >= 0,
    /// segment_length > 0 and |theta2| == 1/2 (to 1e-12).
    void validate() const;
};

/// Drift-velocity constructors. Both give theta3 in m/s; they agree when
/// dP_du = dP_dL / omega0 (chain rule through dL/du = 1/omega0).
Vec3 theta3_from_dP_dL(const Vec3& zeta, double dP_dL, double rho, double omega0);
Vec3 theta3_from_dP_du(const Vec3& zeta, double dP_du, double rho);

enum class Regime { laminar, turbulence_onset, shock_onset };
std::string to_string(Regime r);

struct RegimeThresholds {
    double rho_L = 1e-9; // kg/m
    double rho_S = 1e-9; // kg/m^2
};

/// Classification of a density state: mass-per-length collapsing to zero
/// flags turbulence onset, mass-per-area collapsing flags shock onset.
struct RegimeVerdict {
    Regime regime = Regime::laminar;
    std::string offending_quantity; // "rho_L", "rho_S", or ""
    double value = 0.0;
    bool both_below = false; // both densities under their thresholds
};

RegimeVerdict classify_regime(const DensityStructure& ds, const RegimeThresholds& thr = {});

/// Thrown when the velocity formula is evaluated at a state its own
/// regime classification rejects.
class SingularityError : public std::runtime_error {
  public:
    SingularityError(const std::string& what, RegimeVerdict v)
        : std::runtime_error(what), verdict(std::move(v)) {}
    RegimeVerdict verdict;
};

/// The full formula. Throws SingularityError exactly when classify_regime
/// at the same thresholds is non-laminar.
Vec3 evaluate_velocity(const SolutionParams& p, const DensityStructure& ds,
                       const RegimeThresholds& thr = {});

/// u split into the density-driven part and the pressure-change drift
/// u_0 = -theta3. u_L + u_0 reproduces evaluate_velocity bit for bit.
struct SplitVelocity {
    Vec3 u_L;
    Vec3 u_0;
};
SplitVelocity split_velocity(const SolutionParams& p, const DensityStructure& ds,
                             const RegimeThresholds& thr = {});

/// Individual additive terms of the formula, for term-wise scaling checks.
struct VelocityTerms {
    Vec3 taper;   // (1/omega0) P_L theta1 / |rho_L|
    Vec3 cross;   // -(1/omega0) P_L theta2 / rho_S
    Vec3 viscous; // -(1/omega0) vartheta mu_rot
    Vec3 drift;   // -theta3
};
VelocityTerms velocity_terms(const SolutionParams& p, const DensityStructure& ds,
                             const RegimeThresholds& thr = {});

/// Claimed finite stopping time of an unforced viscous flow:
///   t0 = |dP_du| / (rho * vartheta * |mu_rot|) - 1/omega0
/// read as magnitudes along the direction zeta. A non-positive result
/// means "already stopped"; |mu_rot| = 0 makes the formula singular
/// (reported, not thrown).
struct DecayTimeResult {
    double t0 = 0.0;
    bool already_stopped = false;
    bool singular = false;
    std::string note;
};
DecayTimeResult decay_time(const SolutionParams& p, double rho, double dP_du, const Vec3& zeta);

/// One observation along a tube for the speed/density/pressure chain:
/// speed up should go with mass-per-area up, mass-per-length down,
/// pressure down.
struct ChainState {
    double speed = 0.0;
    double rho_S = 0.0;
    double rho_L = 0.0;
    double pressure = 0.0;
};

struct ChainAuditResult {
    bool pass = false;
    int first_violation = -1;       // left index of the violating adjacent pair
    std::string violating_quantity; // "rho_S", "rho_L", or "pressure"
    std::string note;
};

/// Checks co-/anti-monotonicity across consecutive states. Comparisons
/// are non-strict with a relative slack so constant quantities never
/// violate the chain. Throws std::invalid_argument on fewer than 2
/// states.
ChainAuditResult bernoulli_chain_audit(const std::vector<ChainState>& states,
                                       double rel_tolerance = 1e-9);

} // namespace nsaudit
