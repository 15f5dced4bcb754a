/// @file
/// @brief Verdict-engine tests: config parsing and hashing, the algebraic
/// energy-split identities, field estimators against hand oracles,
/// refinement verdict logic, the claim groups, and byte-identical reports.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "nsaudit/analytic_flows.hpp"
#include "nsaudit/audit.hpp"
#include "nsaudit/config.hpp"
#include "nsaudit/errors.hpp"
#include "nsaudit/field.hpp"
#include "nsaudit/operators.hpp"

using namespace nsaudit;

namespace {

const ClaimResult* find_claim(const std::vector<ClaimResult>& v, const std::string& id) {
    for (const auto& r : v)
        if (r.id == id) return &r;
    return nullptr;
}

std::string slurp(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    REQUIRE(is.good());
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

} // namespace

TEST_CASE("config: parsing, typed getters, and consumption tracking") {
    Config cfg = Config::parse_string("a.b = 1.5\n"
                                      "# a comment\n"
                                      "flag = true\n"
                                      "name = hello world\n"
                                      "vec = 0.1 0.2 0.3\n"
                                      "count = 42\n");
    CHECK(cfg.has("a.b"));
    CHECK_FALSE(cfg.has("a.c"));
    CHECK(cfg.get_double("a.b") == 1.5);
    CHECK(cfg.get_bool("flag"));
    CHECK(cfg.get_string("name") == "hello world");
    CHECK(cfg.get_int("count") == 42);
    Vec3 v = cfg.get_vec3("vec");
    CHECK(v.y == doctest::Approx(0.2));

    CHECK(cfg.get_double("missing", 7.25) == 7.25);
    CHECK_THROWS_AS(cfg.get_double("missing"), ConfigError);
    CHECK_THROWS_AS(cfg.get_int("a.b"), ConfigError);   // 1.5 is not an integer
    CHECK_THROWS_AS(cfg.get_bool("name"), ConfigError);

    CHECK(cfg.unconsumed().empty()); // every key was read above
    Config cfg2 = Config::parse_string("x = 1\ny = 2\n");
    cfg2.get_double("x");
    auto left = cfg2.unconsumed();
    REQUIRE(left.size() == 1);
    CHECK(left[0] == "y");
    CHECK_THROWS_AS(cfg2.require_all_consumed(), ConfigError);
}

TEST_CASE("config: malformed lines and out-of-range ints are rejected") {
    CHECK_THROWS_AS(Config::parse_string("novalue\n"), ConfigError);
    CHECK_THROWS_AS(Config::parse_string(" = 3\n"), ConfigError);
    Config big = Config::parse_string("n = 99999999999\n");
    CHECK_THROWS_AS(big.get_int("n"), ConfigError);
    Config vec = Config::parse_string("v = 1 2\n");
    CHECK_THROWS_AS(vec.get_vec3("v"), ConfigError);
    Config vec2 = Config::parse_string("v = (1, 2, 3)\n");
    CHECK(vec2.get_vec3("v").z == doctest::Approx(3.0));
}

TEST_CASE("config: canonical text is sorted and the hash tracks content") {
    Config a = Config::parse_string("zeta = 1\nalpha = 2\n");
    Config b = Config::parse_string("alpha = 2\nzeta = 1\n");
    CHECK(a.canonical_text() == "alpha = 2\nzeta = 1\n");
    CHECK(a.canonical_text() == b.canonical_text());
    CHECK(a.hash() == b.hash());
    Config c = Config::parse_string("alpha = 2\nzeta = 3\n");
    CHECK(a.hash() != c.hash());
    auto ks = a.keys();
    REQUIRE(ks.size() == 2);
    CHECK(ks[0] == "alpha");
    CHECK(ks[1] == "zeta");
}

TEST_CASE("unknown config keys are rejected against the registry") {
    Config good = Config::parse_string("audit.omega0 = 2.0\naudit.dp_du = -0.5\n");
    CHECK_NOTHROW(validate_config_keys(good));
    Config bad = Config::parse_string("audit.omegaO = 2.0\n");
    CHECK_THROWS_AS(validate_config_keys(bad), ConfigError);
}

TEST_CASE("pointwise energy-split identity holds for frozen and random vectors") {
    CHECK(potential_identity_residual({1.0, 1.0, 1.0}) == 0.0); // both sides 6
    CHECK(potential_identity_residual({1.0, 0.0, 0.0}) == 0.0); // both sides 1
    std::mt19937 rng(11u);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i)
        worst = std::max(worst,
                         potential_identity_residual({dist(rng), dist(rng), dist(rng)}));
    CHECK(worst < 1e-14);
}

TEST_CASE("energy breakdown: frozen node values and closing identity") {
    GridSpec g = clamped_box({4, 4}, {1.0, 1.0}, {0.0, 0.0});
    VectorField u(g, 3);
    u.fill({1.0, 2.0, 3.0});
    ScalarField p(g);
    p.fill(0.0);
    PotentialBreakdown pb = potential_breakdown(u, p, 2.0, 1.0);
    // u=(1,2,3), u0=2: U_P=11, U_gradP=(14-12)/2=1, U_F=(14+12)/2=13, U_0=25.
    CHECK(pb.U_P.at(1, 1) == doctest::Approx(11.0));
    CHECK(pb.U_gradP.at(1, 1) == doctest::Approx(1.0));
    CHECK(pb.U_F.at(1, 1) == doctest::Approx(13.0));
    CHECK(pb.U_0.at(1, 1) == doctest::Approx(25.0));
    CHECK(pb.identity_residual_max < 1e-14);

    ScalarField wrong(clamped_box({5, 5}, {1.0, 1.0}, {0.0, 0.0}));
    CHECK_THROWS_AS(potential_breakdown(u, wrong, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("vortex-viscosity estimator: parabolic shear gives exactly 2") {
    GridSpec g = clamped_box({17, 17}, {1.0, 1.0}, {0.5, 0.5});
    VectorField u = sample_vector(g, [](const Vec3& p) { return Vec3{p.y * p.y, 0.0, 0.0}; });
    MuRotEstimate est = estimate_mu_rot(u);
    CHECK(est.usable_nodes > 200);
    // curl = (0,0,-2y); J h with h = +y direction leaves -g.(Jh) = 2 exactly.
    CHECK(est.magnitude == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("vortex-viscosity estimator: rigid rotation gives zero") {
    GridSpec g = clamped_box({17, 17}, {2.0, 2.0}, {-1.0, -1.0});
    VectorField u = sample_vector(g, [](const Vec3& p) { return Vec3{-p.y, p.x, 0.0}; });
    MuRotEstimate est = estimate_mu_rot(u);
    CHECK(est.magnitude < 1e-10); // constant curl, J = 0
    CHECK_FALSE(est.note.empty());
}

TEST_CASE("pressure/speed slope estimator recovers a linear relation") {
    GridSpec g = clamped_box({17, 17}, {1.0, 1.0}, {0.5, 0.0});
    VectorField u = sample_vector(g, [](const Vec3& p) { return Vec3{p.x, 0.0, 0.0}; });
    ScalarField p(g);
    for (std::size_t n = 0; n < u.nodes(); ++n) p[n] = -2.0 * u.vec_at(n).norm() + 7.0;
    CHECK(estimate_dP_du(u, p) == doctest::Approx(-2.0).epsilon(1e-12));
}

TEST_CASE("refinement verdict logic covers all branches") {
    std::string note;
    CHECK(convergence_verdict({{0.1, 1e-12}}, 1e-10, &note) == Verdict::holds);
    // Stable and far above tolerance: a converged discrepancy.
    CHECK(convergence_verdict({{0.2, 1.00}, {0.1, 0.99}}, 1e-3, &note) == Verdict::fails);
    // Still shrinking fast: undecided.
    note.clear();
    CHECK(convergence_verdict({{0.2, 1.0}, {0.1, 0.3}}, 1e-3, &note) ==
          Verdict::not_applicable);
    CHECK_FALSE(note.empty());
    // Above tolerance but below the 2x failure margin: undecided.
    CHECK(convergence_verdict({{0.2, 1.6e-3}, {0.1, 1.5e-3}}, 1e-3, &note) ==
          Verdict::not_applicable);
    // Single sample above tolerance: undecided.
    CHECK(convergence_verdict({{0.1, 1.0}}, 1e-3, &note) == Verdict::not_applicable);
    CHECK(convergence_verdict({}, 1e-3, &note) == Verdict::not_applicable);
}

TEST_CASE("claim metrics accessors") {
    ClaimResult r;
    r.id = "x";
    r.metrics = {{"alpha", 1.5}};
    CHECK(r.has_metric("alpha"));
    CHECK_FALSE(r.has_metric("beta"));
    CHECK(r.metric("alpha") == 1.5);
    CHECK_THROWS_AS(r.metric("beta"), std::out_of_range);
}

TEST_CASE("advection-identity claims: shear holds exactly, strain fails convergedly") {
    AuditOptions opt;
    opt.refinements = 2;
    auto claims = audit_theorem1(opt);
    REQUIRE(claims.size() == 2);

    const ClaimResult* shear = find_claim(claims, "theorem1.shear-flow");
    REQUIRE(shear != nullptr);
    CHECK(shear->verdict == Verdict::holds);
    CHECK(shear->residual.max_abs <= 1e-12);
    CHECK(std::isinf(shear->order));

    const ClaimResult* strain = find_claim(claims, "theorem1.strain-flow");
    REQUIRE(strain != nullptr);
    CHECK(strain->verdict == Verdict::fails);
    // Hand-derived residual (x+y, x+y, 0) peaks at 4 on [0,2]^2 and probes
    // to 2*sqrt(2) at (1,1), at every resolution.
    CHECK(strain->residual.max_abs == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(strain->metric("probe_magnitude_at_1_1") ==
          doctest::Approx(2.8284271247461903).epsilon(1e-9));
    CHECK(strain->refinement.size() == 2);
    CHECK(strain->table.size() == 2);
    CHECK_FALSE(strain->notes.empty());
}

TEST_CASE("foundation claims all hold with default options") {
    AuditOptions opt;
    opt.refinements = 2; // keep the unit run light; acceptance uses 3
    auto claims = audit_foundations(opt);
    REQUIRE(claims.size() == 4);
    for (const auto& r : claims) {
        CAPTURE(r.id);
        CHECK(r.verdict == Verdict::holds);
        CHECK_FALSE(r.anchor.empty());
        CHECK_FALSE(r.inputs.empty());
    }
    const ClaimResult* lap = find_claim(claims, "foundations.laplacian-identity");
    REQUIRE(lap != nullptr);
    CHECK(lap->metric("order") > 1.9);
    const ClaimResult* tube = find_claim(claims, "foundations.tube-reciprocity");
    REQUIRE(tube != nullptr);
    CHECK(tube->metric("worst_product_variation") < 1e-12); // constant by construction
    CHECK(tube->metric("worst_line_integral") < 1e-2);      // independent cross-check
    const ClaimResult* dens = find_claim(claims, "foundations.density-product");
    REQUIRE(dens != nullptr);
    CHECK(dens->metric("perturbation_detected") == 1.0);
}

TEST_CASE("material-derivative claims: steady channel degenerate-holds, vortex fails") {
    AuditOptions opt;
    opt.refinements = 2;
    auto claims = audit_vector_line(opt);
    REQUIRE(claims.size() == 2);

    const ClaimResult* chan = find_claim(claims, "vector-line.steady-channel");
    REQUIRE(chan != nullptr);
    CHECK(chan->verdict == Verdict::holds);
    CHECK(chan->residual.max_abs < 1e-10);

    const ClaimResult* vortex = find_claim(claims, "vector-line.decaying-vortex");
    REQUIRE(vortex != nullptr);
    CHECK(vortex->verdict == Verdict::fails);
    CHECK(vortex->residual.max_abs > 0.1); // an order-one converged discrepancy
    CHECK(vortex->notes.find("nonzero limit") != std::string::npos);
}

TEST_CASE("finite-stop claim: measured decay is exponential, so the claim fails") {
    AuditOptions opt;
    opt.grid = 32;
    opt.config = Config::parse_string("audit.dp_du = -0.5\n");
    auto claims = audit_decay(opt);
    REQUIRE(claims.size() == 1);
    const ClaimResult& r = claims[0];
    CHECK(r.verdict == Verdict::fails);
    CHECK(r.metric("t0") > 0.0);
    CHECK(r.metric("measurement_rel_err") <= 0.03);
    CHECK(r.metric("energy_ratio_measured") > opt.stop_threshold);
    CHECK(r.metric("dp_du") == -0.5);
    CHECK(r.notes.find("exponential") != std::string::npos);
}

TEST_CASE("tube-formula claims: fit and chain pass, cross-stream stays descriptive") {
    AuditOptions opt;
    opt.grid = 64;
    auto claims = audit_eq12(opt);
    REQUIRE(claims.size() == 3);

    const ClaimResult* fitc = find_claim(claims, "eq12.tube-prediction");
    REQUIRE(fitc != nullptr);
    CHECK(fitc->verdict == Verdict::holds);
    CHECK(fitc->metric("degenerate_fit") == 0.0);
    CHECK(fitc->notes.find("by construction") != std::string::npos);

    const ClaimResult* chain = find_claim(claims, "eq12.bernoulli-chain");
    REQUIRE(chain != nullptr);
    CHECK(chain->verdict == Verdict::holds);

    const ClaimResult* cross = find_claim(claims, "eq12.cross-stream");
    REQUIRE(cross != nullptr);
    CHECK(cross->verdict == Verdict::not_applicable);
    CHECK(cross->metric("chain_pass") == 1.0);
    CHECK_FALSE(cross->notes.empty());
}

TEST_CASE("reports are byte-identical across renders") {
    std::vector<ClaimResult> claims;
    ClaimResult a;
    a.id = "sample.first";
    a.anchor = "synthetic claim for the report writer";
    a.inputs = "fabricated";
    a.residual = {1.5e-3, 7.5e-4, 64};
    a.refinement = {{0.2, 3e-3}, {0.1, 1.5e-3}};
    a.order = 1.0;
    a.verdict = Verdict::fails;
    a.notes = "synthetic.";
    a.metrics = {{"alpha", 0.1}, {"beta", std::numeric_limits<double>::infinity()}};
    a.table_header = {"h", "value"};
    a.table = {{0.2, 3e-3}, {0.1, 1.5e-3}};
    claims.push_back(a);
    ClaimResult b;
    b.id = "sample.second";
    b.anchor = "second synthetic claim";
    b.inputs = "fabricated";
    b.verdict = Verdict::holds;
    b.order = std::numeric_limits<double>::infinity();
    b.refinement = {{0.1, 1e-13}};
    claims.push_back(b);

    Config cfg = Config::parse_string("audit.omega0 = 2\n");
    namespace fs = std::filesystem;
    const std::string d1 = "tmp_report_a", d2 = "tmp_report_b";
    render_report(claims, d1, cfg);
    render_report(claims, d2, cfg);

    const std::string r1 = slurp(d1 + "/report.json");
    const std::string r2 = slurp(d2 + "/report.json");
    CHECK(r1 == r2);
    CHECK(r1.find("fnv1a64:") != std::string::npos);
    CHECK(r1.find("\"verdict\": \"FAILS\"") != std::string::npos);
    CHECK(r1.find("\"order\": \"exact\"") != std::string::npos); // +inf spelled out
    CHECK(r1.find("audit.omega0 = 2") != std::string::npos);

    // Explicit table for the first claim, refinement fallback for the second.
    CHECK(slurp(d1 + "/sample.first.csv") == slurp(d2 + "/sample.first.csv"));
    const std::string fallback = slurp(d1 + "/sample.second.csv");
    CHECK(fallback.rfind("h,residual\n", 0) == 0);

    fs::remove_all(d1);
    fs::remove_all(d2);
}
