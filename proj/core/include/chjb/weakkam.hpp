#pragma once

#include <optional>
#include <vector>

#include "chjb/grid.hpp"
#include "chjb/model.hpp"
#include "chjb/semigroup.hpp"

namespace chjb {

enum class LimitStatus { Converged, Unbounded, Undecided };

const char* to_string(LimitStatus status);

struct GrowthStats {
    double sup_max = 0.0;  // max over time of the nodewise max
    double sup_min = 0.0;  // min over time of the nodewise max
    double inf_max = 0.0;
    double inf_min = 0.0;
};

/// Outcome of a chunked long-time evolution.
struct LimitReport {
    LimitStatus status = LimitStatus::Undecided;
    std::optional<GridFunction> limit;    // last endpoint, when Converged
    std::vector<GridFunction> tail;       // trailing chunk endpoints (window)
    GrowthStats growth;
    std::vector<double> endpoint_diffs;   // successive chunk-endpoint sup diffs
    double horizon_reached = 0.0;
    bool ge_witness = false;  // some endpoint dominates the initial data nodewise
    bool le_witness = false;  // some endpoint is dominated by it nodewise
};

struct LongTimeParams {
    double chunk = 1.0;
    double max_horizon = 64.0;
    double tol_limit = 1e-6;
    double blowup_threshold = 1e6;
    int tail_window = 4;
};

/// Applies the backward evolution in chunks, restarting each chunk from the
/// previous endpoint. Converged once two successive endpoints agree within
/// tol_limit; Unbounded once sup |u| passes the blowup threshold; Undecided
/// at max_horizon.
LimitReport long_time(const GridFunction& phi, const LongTimeParams& lt,
                      const LagrangianModel& lagrangian, const SchemeParams& params);

/// Discrete lower half limit: nodewise minimum over the tail window followed
/// by a spatial minimum over each node's 1-ring. Rejects Unbounded reports.
GridFunction half_limit(const LimitReport& report);

struct WeakKamPair {
    GridFunction u_minus;
    GridFunction u_plus;
    double residual_minus = 0.0;  // |t_minus(u_minus, chunk) - u_minus|_inf
    double residual_plus = 0.0;   // |t_plus(u_plus, chunk) - u_plus|_inf
    int chunks_used = 0;
    double max_raw_increase = 0.0;  // worst nodewise increase of a raw forward
                                    // chunk before the monotone envelope
};

struct ConjugateParams {
    double chunk = 1.0;
    double max_horizon = 32.0;
    double tol_limit = 1e-6;
    double residual_tol = 0.05;
};

/// Computes the forward partner of a stationary backward solution by chunked
/// forward evolution. Chunk endpoints are accumulated through a pointwise
/// running minimum, the discrete form of the decreasing limit, so the result
/// never exceeds u_minus. The worst raw increase a chunk produced is reported.
WeakKamPair conjugate_pair(const GridFunction& u_minus, const ConjugateParams& cp,
                           const LagrangianModel& lagrangian, const SchemeParams& params);

struct AubryEstimate {
    std::vector<int> nodes;  // flat indices where the gap is <= eta
    GridFunction gap;        // u_minus - u_plus
    double eta = 0.0;
};

/// Nodes where u_minus and u_plus agree within eta.
AubryEstimate aubry_equality_set(const WeakKamPair& pair, double eta);

/// Discrete backward-traced minimizing curve. points[0] is the anchor at
/// from_t; points[k] sits k steps earlier. Each step satisfies
/// point_{k+1} = wrap(point_k - v_k * dt) with v_k the recorded argmin at the
/// snapped node.
struct MinimizerCurve {
    double dt = 0.0;
    std::vector<Vec2> points;
    std::vector<Vec2> velocities;
    double snap_distance = 0.0;  // accumulated foot-to-node snapping
};

/// Backtracks through the recorded argmin velocities of an evolution field.
MinimizerCurve trace_minimizer(const SpaceTimeField& field, Vec2 anchor, double from_t);

/// Cluster representatives of the earliest tail_fraction of curve points,
/// clustered at radius 2h in the quotient metric.
std::vector<Vec2> alpha_limit(const MinimizerCurve& curve, double tail_fraction,
                              const PeriodicGrid& grid);

struct ComparisonParams {
    double radius = 0.2;
    double tol = 1e-6;
    double residual_tol = 0.05;
    double chunk = 1.0;
};

struct ComparisonReport {
    bool hypothesis = false;       // v1 <= v2 + tol near the estimated Aubry set
    bool conclusion = false;       // v1 <= v2 + tol everywhere
    double hypothesis_margin = 0.0;  // max of v1 - v2 over the neighborhood
    double conclusion_margin = 0.0;  // max of v1 - v2 over all nodes
    bool falsified = false;          // hypothesis held but conclusion failed
    double residual_v1 = 0.0;
    double residual_v2 = 0.0;
};

/// Checks the neighborhood comparison statement on two stationary solutions:
/// if v1 <= v2 on a radius-neighborhood of the estimated Aubry set of v2,
/// then v1 <= v2 everywhere. Requires H strictly decreasing in u and both
/// inputs to pass a fixed-point residual test.
ComparisonReport comparison_check(const GridFunction& v1, const GridFunction& v2,
                                  const AubryEstimate& aubry2, const ComparisonParams& cp,
                                  const LagrangianModel& lagrangian, const SchemeParams& params);

/// Long-horizon evolution of a (numerically verified) stationary solution,
/// assembled from chunks that each restart from u_minus. Restarting suppresses
/// the exponential amplification of discretization noise that a raw
/// evolution of a stationary state suffers when H decreases in u; the drift
/// each chunk would have accumulated is returned separately.
struct StationaryRun {
    SpaceTimeField field;
    double max_reanchor_drift = 0.0;  // sup diff between chunk end and u_minus
};

StationaryRun stationary_run(const GridFunction& u_minus, double horizon, double chunk,
                             const LagrangianModel& lagrangian, const SchemeParams& params);

}  // namespace chjb
