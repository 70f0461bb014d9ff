// Acceptance suite: one test case per criterion, one printed verdict line
// each. Heavy artifacts (the stationary circle example at N = 400 and its
// conjugate pairs) are computed once and shared.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <string>

#include "chjb/oracle.hpp"
#include "chjb/weakkam.hpp"

using namespace chjb;

namespace {

void verdict(int criterion, const char* name, bool pass, const std::string& detail) {
    std::printf("[criterion %d] %-24s %s   %s\n", criterion, name, pass ? "PASS" : "FAIL",
                detail.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list args;
    va_start(args, f);
    std::vsnprintf(buf, sizeof buf, f, args);
    va_end(args);
    return buf;
}

struct CircleExample {
    GridPtr grid;
    LagrangianModel lagrangian;
    SchemeParams params;      // velocity grid free; 641 resolves the minimization well
    GridFunction u1, u2;
    double h;
    double residual_u1 = 0.0;
    double residual_u2 = 0.0;

    CircleExample()
        : grid(PeriodicGrid::circle(2.0, 400)),
          lagrangian(LagrangianModel::analytic(HamiltonianModel::quadratic_contact(
              Expression::parse("-3*u", "u"), Expression::parse("0.5*x^2", "x"), 1.0, 3.0, 8.0))),
          u1(grid, 0.0),
          u2(grid, 0.0),
          h(grid->spacing(0)) {
        params.dt = 0.0025;
        params.v_max = 4.0;
        params.velocity_count = 641;
        auto pair = oracle::stationary_branches(3.0, grid);
        u1 = pair.first;
        u2 = pair.second;
        residual_u1 = sup_norm_diff(t_minus(u1, 1.0, lagrangian, params), u1);
        residual_u2 = sup_norm_diff(t_minus(u2, 1.0, lagrangian, params), u2);
    }
};

const CircleExample& circle_example() {
    static CircleExample setup;
    return setup;
}

ConjugateParams pair_params() {
    ConjugateParams cp;
    cp.chunk = 1.0;
    cp.max_horizon = 32.0;
    cp.tol_limit = 1e-6;
    cp.residual_tol = 0.05;
    return cp;
}

const WeakKamPair& pair_from_u2() {
    static WeakKamPair pair = conjugate_pair(circle_example().u2, pair_params(), circle_example().lagrangian, circle_example().params);
    return pair;
}

const WeakKamPair& pair_from_u1() {
    static WeakKamPair pair = conjugate_pair(circle_example().u1, pair_params(), circle_example().lagrangian, circle_example().params);
    return pair;
}

int node_at_origin(const PeriodicGrid& g) {
    for (int i = 0; i < g.node_count(); ++i)
        if (std::fabs(g.axis_coord(0, i)) < 1e-12) return i;
    return -1;
}

GridFunction random_smooth(GridPtr grid, std::mt19937& rng) {
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    double a1 = coef(rng), a2 = coef(rng), a3 = coef(rng), b1 = coef(rng), b2 = coef(rng);
    std::vector<double> vals(static_cast<std::size_t>(grid->node_count()));
    for (int i = 0; i < grid->node_count(); ++i) {
        double x = grid->axis_coord(0, i);
        vals[static_cast<std::size_t>(i)] = a1 * std::cos(M_PI * x + b1) +
                                            0.4 * a2 * std::cos(2.0 * M_PI * x + b2) +
                                            0.3 * a3;
    }
    return GridFunction(std::move(grid), std::move(vals));
}

}  // namespace

TEST_CASE("criterion 1: stationary references are fixed points at N = 400") {
    const auto& s = circle_example();
    bool pass = s.residual_u1 <= 0.02 && s.residual_u2 <= 0.02;
    verdict(1, "stationary fixed points", pass,
            fmt("|T1 u1 - u1| = %.5f, |T1 u2 - u2| = %.5f, bound 0.02", s.residual_u1,
                s.residual_u2));
    CHECK(s.residual_u2 <= 0.02);
    CHECK(s.residual_u1 <= 0.02);
}

TEST_CASE("criterion 2: equality set and traced curve near the origin") {
    const auto& s = circle_example();
    const auto& pair = pair_from_u2();
    const int origin = node_at_origin(*s.grid);
    REQUIRE(origin >= 0);

    const double u_plus_origin = std::fabs(pair.u_plus[origin]);
    bool origin_ok = u_plus_origin <= 0.01;

    double worst_excess = 0.0;
    for (int i = 0; i < s.grid->node_count(); ++i)
        worst_excess = std::max(worst_excess, pair.u_plus[i] - s.u2[i]);
    bool below_ok = worst_excess <= 1e-9;

    AubryEstimate aubry = aubry_equality_set(pair, 3.0 * s.h);
    double aubry_extent = 0.0;
    for (int node : aubry.nodes)
        aubry_extent = std::max(aubry_extent, std::fabs(s.grid->axis_coord(0, node)));
    bool contained_ok = !aubry.nodes.empty() && aubry_extent <= 2.0 * s.h + 1e-12;

    SchemeParams trace_params = s.params;
    trace_params.velocity_count = 2049;  // resolves the slow drift near the origin
    StationaryRun run = stationary_run(s.u2, 32.0, 0.25, s.lagrangian, trace_params);
    MinimizerCurve curve = trace_minimizer(run.field, {0.7, 0.0}, 32.0);
    std::vector<Vec2> alpha = alpha_limit(curve, 0.5, *s.grid);
    double alpha_extent = 0.0;
    for (const Vec2& p : alpha) alpha_extent = std::max(alpha_extent, std::fabs(p[0]));
    bool alpha_ok = !alpha.empty() && alpha_extent <= 2.0 * s.h + 1e-12;

    bool pass = origin_ok && below_ok && contained_ok && alpha_ok;
    verdict(2, "equality set and trace", pass,
            fmt("|u+(0)| = %.2e (<= 0.01: %s), max(u+ - u2) = %.2e (<= 1e-9: %s), "
                "equality set reaches |x| = %.3f (<= 2h = %.3f: %s), "
                "alpha limit reaches |x| = %.4f (<= 2h: %s)",
                u_plus_origin, origin_ok ? "yes" : "NO", worst_excess, below_ok ? "yes" : "NO",
                aubry_extent, 2.0 * s.h, contained_ok ? "yes" : "NO", alpha_extent,
                alpha_ok ? "yes" : "NO"));
    CHECK(origin_ok);
    CHECK(below_ok);
    CHECK(contained_ok);
    CHECK(alpha_ok);
}

TEST_CASE("criterion 3: the forward solution is unique") {
    const auto& a = pair_from_u1();
    const auto& b = pair_from_u2();
    double diff = sup_norm_diff(a.u_plus, b.u_plus);
    bool pass = diff <= 0.02;
    verdict(3, "forward uniqueness", pass, fmt("|u+(from u1) - u+(from u2)| = %.5f, bound 0.02", diff));
    CHECK(pass);
}

TEST_CASE("criterion 4: classical reduction against the closed form") {
    auto grid = PeriodicGrid::circle(2.0, 400);
    auto L = LagrangianModel::analytic(HamiltonianModel::quadratic_contact(
        Expression::parse("0", "u"), Expression::parse("0", "x"), 1.0, 0.0, 8.0));
    SchemeParams sp;
    sp.dt = 0.0025;
    sp.v_max = 4.0;
    sp.velocity_count = 161;
    GridFunction phi = GridFunction::from_expression(
        grid, Expression::parse("cos(3.14159265358979324*x)", "x"));
    auto result = picard(phi, 0.5, L, sp);
    double diff = sup_norm_diff(result.field.back(), oracle::hopf_lax(phi, 0.5));
    bool zero_increment = result.diagnostics.increments.size() >= 2 &&
                          result.diagnostics.increments[1] == 0.0;
    bool pass = diff <= 0.02 && zero_increment;
    verdict(4, "classical reduction", pass,
            fmt("|T u - hopf_lax| = %.5f (bound 0.02), second sweep increment = %.1e (exact 0)",
                diff,
                result.diagnostics.increments.size() >= 2 ? result.diagnostics.increments[1]
                                                          : -1.0));
    CHECK(diff <= 0.02);
    CHECK(zero_increment);
}

TEST_CASE("criterion 5: iteration increments contract factorially") {
    const auto& s = circle_example();
    SchemeParams sp = s.params;
    sp.velocity_count = 161;
    GridFunction zero(s.grid, 0.0);
    auto result = picard(zero, 1.0, s.lagrangian, sp);
    const auto& inc = result.diagnostics.increments;
    bool pass = inc.size() >= 9;
    std::string ratios;
    const double lambda_T = 3.0;
    for (std::size_t k = 2; k <= 8 && pass; ++k) {
        double ratio = inc[k] / inc[k - 1];
        double bound = (lambda_T / static_cast<double>(k)) * 1.5;
        ratios += fmt("%s%.2f/%.2f", k > 2 ? " " : "", ratio, bound);
        if (!(ratio <= bound)) pass = false;
    }
    verdict(5, "factorial contraction", pass, "ratio/bound pairs for k = 2..8: " + ratios);
    CHECK(pass);
}

TEST_CASE("criterion 6: separable decay and growth") {
    auto grid = PeriodicGrid::circle(2.0, 64);
    SchemeParams sp;
    sp.dt = 0.0025;
    sp.v_max = 2.0;
    sp.velocity_count = 33;
    auto decay = LagrangianModel::analytic(HamiltonianModel::quadratic_contact(
        Expression::parse("u", "u"), Expression::parse("0", "x"), 1.0, 1.0, 8.0));
    GridFunction one(grid, 1.0);
    GridFunction at1 = t_minus(one, 1.0, decay, sp);
    double worst = 0.0;
    for (int i = 0; i < 64; ++i) worst = std::max(worst, std::fabs(at1[i] - std::exp(-1.0)));
    bool decay_ok = worst <= 0.01;

    auto growth = LagrangianModel::analytic(HamiltonianModel::quadratic_contact(
        Expression::parse("-u", "u"), Expression::parse("0", "x"), 1.0, 1.0, 8.0));
    LongTimeParams lt;
    lt.chunk = 1.0;
    lt.max_horizon = 32.0;
    lt.blowup_threshold = 1e6;
    auto report = long_time(one, lt, growth, sp);
    bool growth_ok = report.status == LimitStatus::Unbounded && report.horizon_reached < 32.0;

    bool pass = decay_ok && growth_ok;
    verdict(6, "separable cases", pass,
            fmt("max |u(1) - exp(-1)| = %.2e (bound 0.01); growth flagged %s at t = %.0f",
                worst, to_string(report.status), report.horizon_reached));
    CHECK(decay_ok);
    CHECK(growth_ok);
}

TEST_CASE("criterion 7: order, nonexpansiveness, monotone forward decrease") {
    auto grid = PeriodicGrid::circle(2.0, 128);
    auto L = LagrangianModel::analytic(HamiltonianModel::quadratic_contact(
        Expression::parse("-3*u", "u"), Expression::parse("0.5*x^2", "x"), 1.0, 3.0, 8.0));
    SchemeParams sp;
    sp.dt = 0.0025;
    sp.v_max = 4.0;
    sp.velocity_count = 81;
    const double t = 0.25;
    const double lambda = 3.0;
    std::mt19937 rng(414243);
    int order_violations = 0, expansion_violations = 0;
    for (int rep = 0; rep < 25; ++rep) {
        GridFunction phi = random_smooth(grid, rng);
        std::vector<double> bigger(phi.values());
        std::uniform_real_distribution<double> bump(0.0, 0.6);
        for (double& v : bigger) v += bump(rng);
        GridFunction psi(grid, bigger);
        GridFunction tphi = t_minus(phi, t, L, sp);
        GridFunction tpsi = t_minus(psi, t, L, sp);
        for (int i = 0; i < 128; ++i)
            if (tphi[i] > tpsi[i] + 1e-9) ++order_violations;
        double lhs = sup_norm_diff(tphi, tpsi);
        double rhs = std::exp(lambda * t) * (1.0 + 10.0 * sp.dt) * sup_norm_diff(phi, psi);
        if (lhs > rhs) ++expansion_violations;
    }

    // forward snapshots of the stationary solution, resolved finely enough
    // for the nonincreasing property to hold within 1e-9
    auto fine_grid = PeriodicGrid::circle(2.0, 32768);
    auto fine_refs = oracle::stationary_branches(3.0, fine_grid);
    SchemeParams fine;
    fine.dt = 1e-4;
    fine.v_max = 2.0;
    fine.velocity_count = 65;
    auto evolution = t_plus_evolution(fine_refs.second, 0.01, L, fine);
    double worst_increase = 0.0;
    for (int n = 1; n <= evolution.field.steps(); ++n) {
        const auto& prev = evolution.field.snapshot(n - 1);
        const auto& cur = evolution.field.snapshot(n);
        for (int i = 0; i < fine_grid->node_count(); ++i)
            worst_increase = std::max(worst_increase, cur[i] - prev[i]);
    }
    int monotone_violations = worst_increase > 1e-9 ? 1 : 0;

    bool pass = order_violations == 0 && expansion_violations == 0 && monotone_violations == 0;
    verdict(7, "semigroup law suite", pass,
            fmt("order violations %d, expansion violations %d, worst forward increase %.2e "
                "(slack 1e-9)",
                order_violations, expansion_violations, worst_increase));
    CHECK(order_violations == 0);
    CHECK(expansion_violations == 0);
    CHECK(monotone_violations == 0);
}

TEST_CASE("criterion 8: exhaustive oracle equality on random instances") {
    std::mt19937 rng(20240808);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    int mismatches = 0;
    const int cases = 50;
    for (int c = 0; c < cases; ++c) {
        std::uniform_int_distribution<int> n_dist(8, 32);
        std::uniform_int_distribution<int> step_dist(1, 6);
        std::uniform_int_distribution<int> mv_dist(1, 3);
        const int n = n_dist(rng);
        const int steps = step_dist(rng);
        auto grid = PeriodicGrid::circle(2.0, n);
        SchemeParams sp;
        sp.v_max = 0.5 + 1.5 * std::fabs(unit(rng));
        sp.dt = std::min(0.2, 0.9 / sp.v_max) * (0.3 + 0.7 * std::fabs(unit(rng)));
        sp.velocity_count = 2 * mv_dist(rng) + 1;
        char g[48], V[48];
        std::snprintf(g, sizeof g, "%.6f*u", unit(rng));
        std::snprintf(V, sizeof V, "%.6f*x^2 + %.6f*cos(3.14159*x)", unit(rng),
                      0.5 * unit(rng));
        auto H = HamiltonianModel::quadratic_contact(Expression::parse(g, "u"),
                                                     Expression::parse(V, "x"),
                                                     0.5 + std::fabs(unit(rng)), 1.0, 8.0);
        auto L = LagrangianModel::analytic(H);
        if (c % 5 == 4) L = L.dual();

        std::vector<double> pv(static_cast<std::size_t>(n));
        for (double& v : pv) v = unit(rng);
        GridFunction phi(grid, pv);
        SpaceTimeField frozen(grid, sp.dt);
        for (int s = 0; s <= steps; ++s) {
            std::vector<double> fv(static_cast<std::size_t>(n));
            for (double& v : fv) v = unit(rng);
            frozen.push_snapshot(GridFunction(grid, fv));
        }
        GridFunction direct = solve_frozen(phi, frozen, steps * sp.dt, L, sp).back();
        GridFunction brute = oracle::brute_force_value(phi, frozen, steps, L, sp);
        if (direct.values() != brute.values()) ++mismatches;
    }
    bool pass = mismatches == 0;
    verdict(8, "oracle equivalence", pass,
            fmt("%d randomized instances, %d bitwise mismatches", cases, mismatches));
    CHECK(pass);
}

TEST_CASE("criterion 9: neighborhood comparison verdicts") {
    const auto& s = circle_example();
    ComparisonParams cp;
    cp.radius = 0.2;
    cp.tol = 1e-6;
    cp.residual_tol = 0.05;
    cp.chunk = 1.0;

    AubryEstimate aubry1 = aubry_equality_set(pair_from_u1(), 3.0 * s.h);
    auto forward = comparison_check(s.u2, s.u1, aubry1, cp, s.lagrangian, s.params);
    bool forward_ok = forward.hypothesis && forward.conclusion && !forward.falsified;

    AubryEstimate aubry2 = aubry_equality_set(pair_from_u2(), 3.0 * s.h);
    auto reversed = comparison_check(s.u1, s.u2, aubry2, cp, s.lagrangian, s.params);
    bool reversed_ok = reversed.hypothesis_margin > 0.0 && reversed.conclusion_margin > 0.0 &&
                       !reversed.falsified;

    bool pass = forward_ok && reversed_ok;
    verdict(9, "comparison theorem", pass,
            fmt("u2 vs u1: hypothesis %s, conclusion %s; reversed margins %.4f / %.4f "
                "(neighborhood hypothesis fails by a visible margin)",
                forward.hypothesis ? "true" : "false", forward.conclusion ? "true" : "false",
                reversed.hypothesis_margin, reversed.conclusion_margin));
    CHECK(forward_ok);
    CHECK(reversed_ok);
}
