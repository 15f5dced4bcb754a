#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nsaudit/config.hpp"
#include "nsaudit/field.hpp"
#include "nsaudit/operators.hpp"
#include "nsaudit/parametric.hpp"

namespace nsaudit {

/// Claim verdicts. A claim HOLDS when its residual sits below the claim
/// tolerance, FAILS when the residual is at least twice the tolerance
/// AND stable under grid refinement (changes by less than 10%), and is
/// NOT_APPLICABLE otherwise (undecided, ill-posed, or still converging).
enum class Verdict { holds, fails, not_applicable };
std::string to_string(Verdict v);

/// One audited claim: an identity or prediction evaluated against an
/// independent oracle, with residual statistics per refinement level.
struct ClaimResult {
    std::string id;       // stable dotted identifier, e.g. "theorem1.strain-flow"
    std::string anchor;   // one-line statement of what was checked
    std::string inputs;   // fixture description (grids, parameters)
    ResidualStats residual;                   // finest level
    std::vector<ConvergenceSample> refinement; // (h, residual) coarse -> fine
    double order = 0.0;                        // observed order; +inf = exact
    Verdict verdict = Verdict::not_applicable;
    std::string notes;
    std::vector<std::pair<std::string, double>> metrics; // named scalars
    std::vector<std::string> table_header;               // per-claim CSV columns
    std::vector<std::vector<double>> table;              // per-claim CSV rows

    double metric(const std::string& name) const; // throws if absent
    bool has_metric(const std::string& name) const;
};

/// Verdict from a refinement series: HOLDS when the finest residual is
/// within tol; FAILS when it exceeds 2*tol and the last refinement step
/// changed it by < 10% (a real, grid-converged discrepancy); otherwise
/// NOT_APPLICABLE with the reason appended to note.
Verdict convergence_verdict(const std::vector<ConvergenceSample>& residuals, double tol,
                            std::string* note);

struct AuditOptions {
    int grid = 0;        // base resolution override; 0 keeps per-claim defaults
    int refinements = 3; // levels in refinement studies (>= 2)
    RegimeThresholds thresholds;
    double stop_threshold = 1e-6; // decay claim: stopped means E(t0)/E(0) <= this
    std::string out_dir;          // where reports/CSV go; empty = don't write
    Config config;                // optional tuning knobs (audit.*, solver.*)
};

/// Claim groups, one per CLI subcommand.
std::vector<ClaimResult> audit_foundations(const AuditOptions& opt);
std::vector<ClaimResult> audit_theorem1(const AuditOptions& opt);
std::vector<ClaimResult> audit_vector_line(const AuditOptions& opt);
std::vector<ClaimResult> audit_poiseuille(const AuditOptions& opt);
std::vector<ClaimResult> audit_decay(const AuditOptions& opt);
std::vector<ClaimResult> audit_eq12(const AuditOptions& opt);
std::vector<ClaimResult> audit_all(const AuditOptions& opt);

/// Pointwise energy split of a velocity/pressure snapshot. u0 is the
/// reference boundary speed entering the closed forms.
///   U_P     = u1 u2 + u2 u3 + u3 u1
///   U_gradP = (|u|^2 - 3 u0^2)/2
///   U_F     = (|u|^2 + 3 u0^2)/2
///   U_0     = ((u1+u2)^2 + (u2+u3)^2 + (u3+u1)^2)/2
/// U_0 = U_F + U_gradP + U_P is a polynomial identity; its residual is
/// checked to round-off.
struct PotentialBreakdown {
    ScalarField U_F;
    ScalarField U_gradP;
    ScalarField U_P;
    ScalarField U_0;
    double identity_residual_max = 0.0;
};

PotentialBreakdown potential_breakdown(const VectorField& v, const ScalarField& p, double u0,
                                       double rho);

/// | (u1u2+u2u3+u3u1) + |u|^2  -  ((u1+u2)^2+(u2+u3)^2+(u3+u1)^2)/2 |
/// (the pure-algebra identity underlying the breakdown above).
double potential_identity_residual(const Vec3& u);

/// Field estimate of the vortex-viscosity magnitude: per node, build the
/// frame (f = flow direction, h = speed-gradient direction orthogonalized
/// against f, g = f x h), then
///   mu = | (1+k_gh) f.(Jh) - g.(Jh) - k_gh h.(Jh) |,  J = grad(curl u),
/// and take the median over well-conditioned nodes.
struct MuRotEstimate {
    double magnitude = 0.0;
    std::size_t usable_nodes = 0;
    std::string note;
};
MuRotEstimate estimate_mu_rot(const VectorField& u, double k_gh = 0.0);

/// Least-squares slope of pressure against speed over all nodes.
double estimate_dP_du(const VectorField& u, const ScalarField& p);

/// Writes report.json plus one CSV per claim into out_dir. Identical
/// results and config produce byte-identical files (fixed key order,
/// 17-significant-digit numbers, no timestamps).
void render_report(const std::vector<ClaimResult>& results, const std::string& out_dir,
                   const Config& cfg);

/// Every configuration key any part of the toolkit understands; used to
/// reject misspelled keys up front.
const std::vector<std::string>& known_config_keys();
void validate_config_keys(const Config& cfg);

} // namespace nsaudit
