#pragma once

#include <limits>
#include <vector>

#include "chjb/grid.hpp"
#include "chjb/model.hpp"

namespace chjb {

/// Discretization knobs for the semi-Lagrangian evolution.
struct SchemeParams {
    double dt = 0.0;
    double v_max = 0.0;
    int velocity_count = 161;          // per axis, odd so v = 0 is on the grid
    double picard_tol = -1.0;          // < 0: auto, 1e-10 * max(1, |phi|_inf)
    int picard_max_iterations = 64;
    double horizon_cap = 64.0;         // longest single evolution; chunk beyond

    void validate(const PeriodicGrid& grid) const;
};

struct PicardDiagnostics {
    std::vector<double> increments;  // sup over snapshots of |u_k - u_{k-1}|
    int iterations = 0;
    bool converged = false;
    int argmin_at_bound = 0;  // node-steps whose argmin sat on +-v_max
};

/// One velocity of the discrete minimization, with its precomputed foot-point
/// cell shift and interpolation weight per axis.
struct VelocityEntry {
    Vec2 v{0.0, 0.0};
    double norm2 = 0.0;
    int shift[2] = {0, 0};
    double weight[2] = {0.0, 0.0};
    bool at_bound = false;
};

/// The per-node minimization shared by the marching scheme and the exhaustive
/// oracle: value(i) = min over velocities of
///     interpolate(prev, x_i - v*dt) + dt * L(x_i, frozen(x_i), v),
/// with ties broken toward smaller |v| (then lexicographically). Costs and
/// interpolation weights are computed once here so both callers perform
/// identical arithmetic.
class StepKernel {
  public:
    StepKernel(GridPtr grid, const LagrangianModel& lagrangian, const SchemeParams& params);

    const PeriodicGrid& grid() const { return *grid_; }
    int velocity_count() const { return static_cast<int>(velocities_.size()); }
    const std::vector<VelocityEntry>& velocities() const { return velocities_; }
    double dt() const { return dt_; }

    /// Fills rc[i * nv + j] = dt * L(x_i, frozen(x_i), v_j); +infinity marks
    /// infeasible velocities.
    void run_costs(const GridFunction& frozen, std::vector<double>& rc) const;

    struct Update {
        double value;
        int argmin;  // index into velocities()
    };

    /// Minimizes at one node given the prev-snapshot accessor (flat node index
    /// -> value). Throws a scheme error if every velocity is infeasible.
    template <typename Prev>
    Update update(int node, const double* rc_row, Prev&& prev) const {
        const int nx = grid_->axis_nodes(0);
        const int ix = node % nx;
        double best = kInfinity;
        int best_j = -1;
        if (grid_->dimension() == 1) {
            for (int j = 0; j < velocity_count(); ++j) {
                const double rc = rc_row[j];
                if (!(rc < kInfinity)) continue;
                const VelocityEntry& e = velocities_[static_cast<std::size_t>(j)];
                int hi = ix - e.shift[0];
                if (hi >= nx) hi -= nx;
                if (hi < 0) hi += nx;
                int lo = hi - 1;
                if (lo < 0) lo += nx;
                const double c =
                    e.weight[0] * prev(lo) + (1.0 - e.weight[0]) * prev(hi) + rc;
                consider(c, j, best, best_j);
            }
        } else {
            const int ny = grid_->axis_nodes(1);
            const int iy = node / nx;
            for (int j = 0; j < velocity_count(); ++j) {
                const double rc = rc_row[j];
                if (!(rc < kInfinity)) continue;
                const VelocityEntry& e = velocities_[static_cast<std::size_t>(j)];
                int hx = ix - e.shift[0];
                if (hx >= nx) hx -= nx;
                if (hx < 0) hx += nx;
                int lx = hx - 1;
                if (lx < 0) lx += nx;
                int hy = iy - e.shift[1];
                if (hy >= ny) hy -= ny;
                if (hy < 0) hy += ny;
                int ly = hy - 1;
                if (ly < 0) ly += ny;
                const double w0 = e.weight[0], w1 = e.weight[1];
                const double row_lo = w0 * prev(lx + nx * ly) + (1.0 - w0) * prev(hx + nx * ly);
                const double row_hi = w0 * prev(lx + nx * hy) + (1.0 - w0) * prev(hx + nx * hy);
                const double c = w1 * row_lo + (1.0 - w1) * row_hi + rc;
                consider(c, j, best, best_j);
            }
        }
        if (best_j < 0) report_infeasible(node);
        return {best, best_j};
    }

  private:
    void consider(double c, int j, double& best, int& best_j) const {
        if (best_j < 0 || c < best) {
            best = c;
            best_j = j;
            return;
        }
        if (c == best) {
            const VelocityEntry& e = velocities_[static_cast<std::size_t>(j)];
            const VelocityEntry& b = velocities_[static_cast<std::size_t>(best_j)];
            if (e.norm2 < b.norm2 ||
                (e.norm2 == b.norm2 &&
                 (e.v[0] < b.v[0] || (e.v[0] == b.v[0] && e.v[1] < b.v[1]))))
                best_j = j;
        }
    }

    [[noreturn]] void report_infeasible(int node) const;

    static constexpr double kInfinity = std::numeric_limits<double>::infinity();

    GridPtr grid_;
    const LagrangianModel* lagrangian_;
    double dt_;
    std::vector<VelocityEntry> velocities_;

    // fast path for the closed-form family: rc = dt * (node_part + kinetic_j)
    bool separable_ = false;
    std::vector<double> potential_;  // V(x_i)
    std::vector<double> kinetic_;    // |v_j|^2 / (2a)
};

struct SlStepResult {
    GridFunction value;
    std::vector<Vec2> argmin;
    int at_bound_count = 0;
};

/// One semi-Lagrangian step with the contact argument frozen at the arrival
/// node: new(x) = min_v interp(u_prev, x - v dt) + dt L(x, frozen(x), v).
SlStepResult sl_step(const GridFunction& u_prev, const GridFunction& frozen,
                     const LagrangianModel& lagrangian, const SchemeParams& params);

/// Marches sl_step over [0, T], reading the contact argument from the given
/// field at each step's left endpoint. Snapshot 0 equals phi.
SpaceTimeField solve_frozen(const GridFunction& phi, const SpaceTimeField& frozen_field, double T,
                            const LagrangianModel& lagrangian, const SchemeParams& params);

struct PicardResult {
    SpaceTimeField field;
    PicardDiagnostics diagnostics;
};

/// Fixed-point iteration for the self-referential evolution: u_0 is phi
/// extended constant in time, u_k solves the frozen problem against u_{k-1},
/// and iteration stops once the sup-over-snapshots increment drops below the
/// tolerance (or the iteration budget runs out, reported as unconverged).
PicardResult picard(const GridFunction& phi, double T, const LagrangianModel& lagrangian,
                    const SchemeParams& params);

/// Backward evolution operator: final snapshot of picard over [0, t].
GridFunction t_minus(const GridFunction& phi, double t, const LagrangianModel& lagrangian,
                     const SchemeParams& params);

/// Forward evolution operator, defined through the dual Lagrangian
/// L(x,-u,-v): t_plus(phi, t) = -t_minus(-phi, t) under the dual.
GridFunction t_plus(const GridFunction& phi, double t, const LagrangianModel& lagrangian,
                    const SchemeParams& params);

/// Full forward evolution with snapshots in the forward orientation
/// (snapshot n = t_plus(phi, n dt)). Argmins are not carried.
PicardResult t_plus_evolution(const GridFunction& phi, double t,
                              const LagrangianModel& lagrangian, const SchemeParams& params);

/// Number of dt-steps covering t (t must sit on the time grid).
int steps_for_horizon(double t, double dt);

}  // namespace chjb
