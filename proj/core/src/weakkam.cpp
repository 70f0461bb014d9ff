#include "chjb/weakkam.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "chjb/errors.hpp"

namespace chjb {

const char* to_string(LimitStatus status) {
    switch (status) {
        case LimitStatus::Converged: return "converged";
        case LimitStatus::Unbounded: return "unbounded";
        case LimitStatus::Undecided: return "undecided";
    }
    return "undecided";
}

LimitReport long_time(const GridFunction& phi, const LongTimeParams& lt,
                      const LagrangianModel& lagrangian, const SchemeParams& params) {
    if (!(lt.chunk > 0.0) || lt.chunk > lt.max_horizon)
        throw Error(ErrorKind::InvalidInput, "long_time needs 0 < chunk <= max_horizon");
    LimitReport report;
    report.growth.sup_max = report.growth.sup_min = phi.max();
    report.growth.inf_max = report.growth.inf_min = phi.min();

    GridFunction current = phi;
    double t = 0.0;
    auto push_tail = [&](const GridFunction& f) {
        report.tail.push_back(f);
        if (static_cast<int>(report.tail.size()) > std::max(1, lt.tail_window))
            report.tail.erase(report.tail.begin());
    };
    push_tail(current);
    GridFunction previous = current;
    bool have_prev_endpoint = false;
    while (t < lt.max_horizon * (1.0 - 1e-12)) {
        GridFunction next = t_minus(current, lt.chunk, lagrangian, params);
        t += lt.chunk;
        report.horizon_reached = t;
        report.growth.sup_max = std::max(report.growth.sup_max, next.max());
        report.growth.sup_min = std::min(report.growth.sup_min, next.max());
        report.growth.inf_max = std::max(report.growth.inf_max, next.min());
        report.growth.inf_min = std::min(report.growth.inf_min, next.min());
        push_tail(next);

        bool ge = true, le = true;
        for (std::size_t i = 0; i < next.values().size(); ++i) {
            if (next.values()[i] < phi.values()[i]) ge = false;
            if (next.values()[i] > phi.values()[i]) le = false;
        }
        report.ge_witness = report.ge_witness || ge;
        report.le_witness = report.le_witness || le;

        if (std::max(std::fabs(next.max()), std::fabs(next.min())) > lt.blowup_threshold) {
            report.status = LimitStatus::Unbounded;
            return report;
        }
        if (have_prev_endpoint) {
            double diff = sup_norm_diff(next, previous);
            report.endpoint_diffs.push_back(diff);
            if (diff <= lt.tol_limit) {
                report.status = LimitStatus::Converged;
                report.limit = next;
                return report;
            }
        }
        previous = next;
        have_prev_endpoint = true;
        current = std::move(next);
    }
    report.status = LimitStatus::Undecided;
    return report;
}

GridFunction half_limit(const LimitReport& report) {
    if (report.status == LimitStatus::Unbounded)
        throw Error(ErrorKind::InvalidInput, "half limit of an unbounded evolution");
    if (report.tail.empty())
        throw Error(ErrorKind::InvalidInput, "half limit needs a nonempty tail window");
    const GridFunction& first = report.tail.front();
    const PeriodicGrid& g = first.grid();
    std::vector<double> window_min(first.values());
    for (std::size_t k = 1; k < report.tail.size(); ++k) {
        const auto& vals = report.tail[k].values();
        for (std::size_t i = 0; i < window_min.size(); ++i)
            window_min[i] = std::min(window_min[i], vals[i]);
    }
    // local spatial min over the 1-ring (radius-h proxy)
    const int nx = g.axis_nodes(0);
    std::vector<double> out(window_min.size());
    if (g.dimension() == 1) {
        for (int i = 0; i < nx; ++i) {
            int l = (i + nx - 1) % nx, r = (i + 1) % nx;
            out[static_cast<std::size_t>(i)] =
                std::min({window_min[static_cast<std::size_t>(l)],
                          window_min[static_cast<std::size_t>(i)],
                          window_min[static_cast<std::size_t>(r)]});
        }
    } else {
        const int ny = g.axis_nodes(1);
        for (int j = 0; j < ny; ++j) {
            for (int i = 0; i < nx; ++i) {
                int l = (i + nx - 1) % nx, r = (i + 1) % nx;
                int d = (j + ny - 1) % ny, u = (j + 1) % ny;
                double m = window_min[static_cast<std::size_t>(g.flat_index(i, j))];
                m = std::min(m, window_min[static_cast<std::size_t>(g.flat_index(l, j))]);
                m = std::min(m, window_min[static_cast<std::size_t>(g.flat_index(r, j))]);
                m = std::min(m, window_min[static_cast<std::size_t>(g.flat_index(i, d))]);
                m = std::min(m, window_min[static_cast<std::size_t>(g.flat_index(i, u))]);
                out[static_cast<std::size_t>(g.flat_index(i, j))] = m;
            }
        }
    }
    return GridFunction(first.grid_ptr(), std::move(out));
}

WeakKamPair conjugate_pair(const GridFunction& u_minus, const ConjugateParams& cp,
                           const LagrangianModel& lagrangian, const SchemeParams& params) {
    WeakKamPair pair{u_minus, u_minus};
    pair.residual_minus = sup_norm_diff(t_minus(u_minus, cp.chunk, lagrangian, params), u_minus);
    if (pair.residual_minus > cp.residual_tol) {
        std::ostringstream os;
        os << "conjugate_pair: input is not a fixed point of the backward evolution "
              "(residual "
           << pair.residual_minus << " > " << cp.residual_tol << ")";
        throw Error(ErrorKind::InvalidInput, os.str());
    }

    GridFunction envelope = u_minus;
    double t = 0.0;
    bool cauchy = false;
    while (t < cp.max_horizon * (1.0 - 1e-12)) {
        GridFunction raw = t_plus(envelope, cp.chunk, lagrangian, params);
        t += cp.chunk;
        ++pair.chunks_used;
        std::vector<double> vals(raw.values());
        double inc = 0.0, diff = 0.0;
        for (std::size_t i = 0; i < vals.size(); ++i) {
            double prev = envelope.values()[i];
            inc = std::max(inc, vals[i] - prev);
            vals[i] = std::min(vals[i], prev);
            diff = std::max(diff, prev - vals[i]);
        }
        pair.max_raw_increase = std::max(pair.max_raw_increase, inc);
        envelope = GridFunction(u_minus.grid_ptr(), std::move(vals));
        if (diff <= cp.tol_limit) {
            cauchy = true;
            break;
        }
    }
    if (!cauchy)
        throw Error(ErrorKind::Unconverged,
                    "conjugate_pair: forward limit not Cauchy within the horizon");
    pair.u_plus = envelope;
    pair.residual_plus =
        sup_norm_diff(t_plus(pair.u_plus, cp.chunk, lagrangian, params), pair.u_plus);
    return pair;
}

AubryEstimate aubry_equality_set(const WeakKamPair& pair, double eta) {
    if (!(eta > 0.0)) throw Error(ErrorKind::InvalidInput, "eta must be positive");
    std::vector<double> gap(pair.u_minus.values());
    for (std::size_t i = 0; i < gap.size(); ++i) gap[i] -= pair.u_plus.values()[i];
    AubryEstimate est{{}, GridFunction(pair.u_minus.grid_ptr(), std::move(gap)), eta};
    for (int i = 0; i < est.gap.grid().node_count(); ++i)
        if (std::fabs(est.gap[i]) <= eta) est.nodes.push_back(i);
    return est;
}

namespace {

int nearest_node(const PeriodicGrid& g, Vec2 p, double& snap) {
    Vec2 q = g.wrap(p);
    int idx[2] = {0, 0};
    snap = 0.0;
    for (int a = 0; a < g.dimension(); ++a) {
        double s = (q[static_cast<std::size_t>(a)] - g.axis_coord(a, 0)) / g.spacing(a);
        int i = static_cast<int>(std::lround(s));
        double d = std::fabs(s - i) * g.spacing(a);
        int n = g.axis_nodes(a);
        i %= n;
        if (i < 0) i += n;
        idx[a] = i;
        snap = std::max(snap, d);
    }
    return g.dimension() == 1 ? idx[0] : g.flat_index(idx[0], idx[1]);
}

}  // namespace

MinimizerCurve trace_minimizer(const SpaceTimeField& field, Vec2 anchor, double from_t) {
    if (!field.has_argmins())
        throw Error(ErrorKind::InvalidInput, "trace_minimizer needs recorded argmin velocities");
    const int steps = steps_for_horizon(from_t, field.dt());
    if (steps > field.steps())
        throw Error(ErrorKind::InvalidInput, "trace horizon exceeds the recorded field");
    const PeriodicGrid& g = field.grid();

    MinimizerCurve curve;
    curve.dt = field.dt();
    curve.points.reserve(static_cast<std::size_t>(steps) + 1);
    Vec2 point = g.wrap(anchor);
    curve.points.push_back(point);
    for (int n = steps; n >= 1; --n) {
        double snap = 0.0;
        const int node = nearest_node(g, point, snap);
        curve.snap_distance += snap;
        const Vec2 v = field.argmin(n)[static_cast<std::size_t>(node)];
        curve.velocities.push_back(v);
        point = g.wrap({point[0] - v[0] * field.dt(), point[1] - v[1] * field.dt()});
        curve.points.push_back(point);
    }
    return curve;
}

std::vector<Vec2> alpha_limit(const MinimizerCurve& curve, double tail_fraction,
                              const PeriodicGrid& grid) {
    if (!(tail_fraction > 0.0) || tail_fraction > 1.0)
        throw Error(ErrorKind::InvalidInput, "tail_fraction must lie in (0, 1]");
    const std::size_t n = curve.points.size();
    std::size_t count = static_cast<std::size_t>(std::ceil(tail_fraction * n));
    count = std::min(std::max<std::size_t>(count, 1), n);
    // earliest times sit at the end of the backward-ordered point list
    const double radius = 2.0 * grid.max_spacing();
    std::vector<Vec2> reps;
    for (std::size_t k = n - count; k < n; ++k) {
        const Vec2& p = curve.points[k];
        bool close = false;
        for (const Vec2& r : reps) {
            double d = grid.axis_distance(0, p[0], r[0]);
            if (grid.dimension() == 2) d = std::max(d, grid.axis_distance(1, p[1], r[1]));
            if (d <= radius) {
                close = true;
                break;
            }
        }
        if (!close) reps.push_back(p);
    }
    return reps;
}

ComparisonReport comparison_check(const GridFunction& v1, const GridFunction& v2,
                                  const AubryEstimate& aubry2, const ComparisonParams& cp,
                                  const LagrangianModel& lagrangian, const SchemeParams& params) {
    if (!lagrangian.hamiltonian()->strictly_decreasing_in_u())
        throw Error(ErrorKind::InvalidInput,
                    "comparison_check requires a Hamiltonian strictly decreasing in u");
    ComparisonReport report;
    report.residual_v1 = sup_norm_diff(t_minus(v1, cp.chunk, lagrangian, params), v1);
    report.residual_v2 = sup_norm_diff(t_minus(v2, cp.chunk, lagrangian, params), v2);
    if (report.residual_v1 > cp.residual_tol || report.residual_v2 > cp.residual_tol) {
        std::ostringstream os;
        os << "comparison_check: fixed-point residuals " << report.residual_v1 << ", "
           << report.residual_v2 << " exceed " << cp.residual_tol;
        throw Error(ErrorKind::InvalidInput, os.str());
    }

    const PeriodicGrid& g = v1.grid();
    double hyp_margin = -std::numeric_limits<double>::infinity();
    double all_margin = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < g.node_count(); ++i) {
        const double d = v1[i] - v2[i];
        all_margin = std::max(all_margin, d);
        const Vec2 p = g.node(i);
        bool near = false;
        for (int a : aubry2.nodes) {
            const Vec2 q = g.node(a);
            double dist = g.axis_distance(0, p[0], q[0]);
            if (g.dimension() == 2) dist = std::max(dist, g.axis_distance(1, p[1], q[1]));
            if (dist <= cp.radius) {
                near = true;
                break;
            }
        }
        if (near) hyp_margin = std::max(hyp_margin, d);
    }
    report.hypothesis_margin = hyp_margin;
    report.conclusion_margin = all_margin;
    report.hypothesis = hyp_margin <= cp.tol;
    report.conclusion = all_margin <= cp.tol;
    report.falsified = report.hypothesis && !report.conclusion;
    return report;
}

StationaryRun stationary_run(const GridFunction& u_minus, double horizon, double chunk,
                             const LagrangianModel& lagrangian, const SchemeParams& params) {
    const int chunk_steps = steps_for_horizon(chunk, params.dt);
    const int total_steps = steps_for_horizon(horizon, params.dt);
    if (chunk_steps < 1 || total_steps < chunk_steps)
        throw Error(ErrorKind::InvalidInput, "stationary_run needs 0 < chunk <= horizon");

    StationaryRun run{SpaceTimeField(u_minus.grid_ptr(), params.dt), 0.0};
    run.field.push_snapshot(u_minus);
    // every full chunk restarts from the same u_minus, so one evaluation
    // serves them all
    const int full_chunks = total_steps / chunk_steps;
    if (full_chunks > 0) {
        PicardResult chunk_result = picard(u_minus, chunk_steps * params.dt, lagrangian, params);
        run.max_reanchor_drift = sup_norm_diff(chunk_result.field.back(), u_minus);
        for (int c = 0; c < full_chunks; ++c) run.field.concatenate(chunk_result.field);
    }
    const int rest = total_steps - full_chunks * chunk_steps;
    if (rest > 0) {
        PicardResult tail = picard(u_minus, rest * params.dt, lagrangian, params);
        run.max_reanchor_drift =
            std::max(run.max_reanchor_drift, sup_norm_diff(tail.field.back(), u_minus));
        run.field.concatenate(tail.field);
    }
    return run;
}

}  // namespace chjb
