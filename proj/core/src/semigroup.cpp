#include "chjb/semigroup.hpp"

#include <cmath>
#include <sstream>

#include "chjb/errors.hpp"
#include "chjb/parallel.hpp"

namespace chjb {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

void SchemeParams::validate(const PeriodicGrid& grid) const {
    if (!(dt > 0.0)) throw Error(ErrorKind::InvalidInput, "dt must be positive");
    if (!(v_max > 0.0)) throw Error(ErrorKind::InvalidInput, "v_max must be positive");
    if (velocity_count < 3 || velocity_count % 2 == 0)
        throw Error(ErrorKind::InvalidInput, "velocity_count must be odd and >= 3");
    if (picard_max_iterations < 1)
        throw Error(ErrorKind::InvalidInput, "picard_max_iterations must be >= 1");
    for (int a = 0; a < grid.dimension(); ++a) {
        if (dt * v_max > 0.5 * grid.length(a) * (1.0 + 1e-12))
            throw Error(ErrorKind::InvalidInput,
                        "dt * v_max exceeds half a period; the foot point would leave the "
                        "fundamental domain");
    }
}

int steps_for_horizon(double t, double dt) {
    double raw = t / dt;
    int n = static_cast<int>(std::lround(raw));
    if (n < 0 || std::fabs(n * dt - t) > 1e-9 * std::max(1.0, std::fabs(t)))
        throw Error(ErrorKind::InvalidInput, "horizon is not a multiple of dt");
    return n;
}

StepKernel::StepKernel(GridPtr grid, const LagrangianModel& lagrangian,
                       const SchemeParams& params)
    : grid_(std::move(grid)), lagrangian_(&lagrangian), dt_(params.dt) {
    params.validate(*grid_);
    if (lagrangian.dimension() != grid_->dimension())
        throw Error(ErrorKind::InvalidInput, "model dimension does not match grid dimension");

    const int m = params.velocity_count;
    auto axis_velocity = [&](int k) { return -params.v_max + 2.0 * params.v_max * k / (m - 1); };
    auto split = [&](double v, int axis, int& shift, double& weight) {
        double s = v * dt_ / grid_->spacing(axis);
        double r = std::round(s);
        if (std::fabs(s - r) < 1e-9) {
            shift = static_cast<int>(r);
            weight = 0.0;
        } else {
            shift = static_cast<int>(std::floor(s));
            weight = s - shift;
        }
    };
    if (grid_->dimension() == 1) {
        velocities_.resize(static_cast<std::size_t>(m));
        for (int j = 0; j < m; ++j) {
            VelocityEntry& e = velocities_[static_cast<std::size_t>(j)];
            e.v = {axis_velocity(j), 0.0};
            e.norm2 = e.v[0] * e.v[0];
            split(e.v[0], 0, e.shift[0], e.weight[0]);
            e.at_bound = (j == 0 || j == m - 1);
        }
    } else {
        velocities_.resize(static_cast<std::size_t>(m) * static_cast<std::size_t>(m));
        std::size_t idx = 0;
        for (int jy = 0; jy < m; ++jy) {
            for (int jx = 0; jx < m; ++jx, ++idx) {
                VelocityEntry& e = velocities_[idx];
                e.v = {axis_velocity(jx), axis_velocity(jy)};
                e.norm2 = e.v[0] * e.v[0] + e.v[1] * e.v[1];
                split(e.v[0], 0, e.shift[0], e.weight[0]);
                split(e.v[1], 1, e.shift[1], e.weight[1]);
                e.at_bound = (jx == 0 || jx == m - 1 || jy == 0 || jy == m - 1);
            }
        }
    }

    const HamiltonianModel& H = *lagrangian.hamiltonian();
    separable_ = lagrangian.analytic_form();
    if (separable_) {
        potential_.resize(static_cast<std::size_t>(grid_->node_count()));
        for (int i = 0; i < grid_->node_count(); ++i)
            potential_[static_cast<std::size_t>(i)] = H.potential_at(grid_->node(i));
        kinetic_.resize(velocities_.size());
        for (std::size_t j = 0; j < velocities_.size(); ++j)
            kinetic_[j] = 0.5 * velocities_[j].norm2 / H.kinetic_coeff();
    }
}

void StepKernel::run_costs(const GridFunction& frozen, std::vector<double>& rc) const {
    const int n = grid_->node_count();
    const int nv = velocity_count();
    rc.resize(static_cast<std::size_t>(n) * static_cast<std::size_t>(nv));
    if (separable_) {
        const HamiltonianModel& H = *lagrangian_->hamiltonian();
        const bool dual = lagrangian_->is_dual();
        parallel_for(static_cast<std::size_t>(n), [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i) {
                double u = frozen[static_cast<int>(i)];
                if (dual) u = -u;
                const double base = -H.contact_term().eval(u) - potential_[i];
                double* row = rc.data() + i * static_cast<std::size_t>(nv);
                for (int j = 0; j < nv; ++j)
                    row[j] = dt_ * (base + kinetic_[static_cast<std::size_t>(j)]);
            }
        });
        return;
    }
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            const Vec2 x = grid_->node(static_cast<int>(i));
            const double u = frozen[static_cast<int>(i)];
            double* row = rc.data() + i * static_cast<std::size_t>(nv);
            for (int j = 0; j < nv; ++j) {
                double l = lagrangian_->eval(x, u, velocities_[static_cast<std::size_t>(j)].v);
                row[j] = l < kInf ? dt_ * l : kInf;
            }
        }
    });
}

void StepKernel::report_infeasible(int node) const {
    Vec2 x = grid_->node(node);
    std::ostringstream os;
    os << "every velocity is infeasible (L = +inf) at node " << node << ", x = (" << x[0];
    if (grid_->dimension() == 2) os << ", " << x[1];
    os << ")";
    throw Error(ErrorKind::Scheme, os.str());
}

namespace {

SlStepResult run_step(const StepKernel& kernel, const GridFunction& u_prev,
                      const std::vector<double>& rc) {
    const PeriodicGrid& g = kernel.grid();
    const int n = g.node_count();
    const int nv = kernel.velocity_count();
    std::vector<double> out(static_cast<std::size_t>(n));
    std::vector<Vec2> argmin(static_cast<std::size_t>(n));
    std::vector<int> bound_flags(static_cast<std::size_t>(n), 0);
    const double* prev_data = u_prev.values().data();
    auto prev = [prev_data](int k) { return prev_data[k]; };
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            auto res = kernel.update(static_cast<int>(i),
                                     rc.data() + i * static_cast<std::size_t>(nv), prev);
            const VelocityEntry& e = kernel.velocities()[static_cast<std::size_t>(res.argmin)];
            out[i] = res.value;
            argmin[i] = e.v;
            bound_flags[i] = e.at_bound ? 1 : 0;
        }
    });
    int at_bound = 0;
    for (int f : bound_flags) at_bound += f;
    return {GridFunction(u_prev.grid_ptr(), std::move(out)), std::move(argmin), at_bound};
}

}  // namespace

SlStepResult sl_step(const GridFunction& u_prev, const GridFunction& frozen,
                     const LagrangianModel& lagrangian, const SchemeParams& params) {
    if (!(u_prev.grid() == frozen.grid()))
        throw Error(ErrorKind::InvalidInput, "sl_step: grids of u_prev and frozen differ");
    StepKernel kernel(u_prev.grid_ptr(), lagrangian, params);
    std::vector<double> rc;
    kernel.run_costs(frozen, rc);
    return run_step(kernel, u_prev, rc);
}

SpaceTimeField solve_frozen(const GridFunction& phi, const SpaceTimeField& frozen_field, double T,
                            const LagrangianModel& lagrangian, const SchemeParams& params) {
    const int steps = steps_for_horizon(T, params.dt);
    if (frozen_field.dt() != params.dt)
        throw Error(ErrorKind::InvalidInput, "frozen field dt differs from scheme dt");
    if (frozen_field.steps() < steps)
        throw Error(ErrorKind::InvalidInput, "frozen field does not cover the horizon");
    if (!(phi.grid() == frozen_field.grid()))
        throw Error(ErrorKind::InvalidInput, "solve_frozen: grid mismatch");

    StepKernel kernel(phi.grid_ptr(), lagrangian, params);
    SpaceTimeField out(phi.grid_ptr(), params.dt);
    out.push_snapshot(phi);
    GridFunction current = phi;
    std::vector<double> rc;
    for (int n = 0; n < steps; ++n) {
        kernel.run_costs(frozen_field.snapshot(n), rc);
        SlStepResult step = run_step(kernel, current, rc);
        current = step.value;
        out.push_snapshot(std::move(step.value), std::move(step.argmin), step.at_bound_count);
    }
    return out;
}

PicardResult picard(const GridFunction& phi, double T, const LagrangianModel& lagrangian,
                    const SchemeParams& params) {
    const int steps = steps_for_horizon(T, params.dt);
    if (steps < 1) throw Error(ErrorKind::InvalidInput, "picard needs a positive horizon");
    params.validate(phi.grid());

    double tol = params.picard_tol;
    if (tol < 0.0) {
        double scale = std::max(std::fabs(phi.min()), std::fabs(phi.max()));
        tol = 1e-10 * std::max(1.0, scale);
    }

    SpaceTimeField prev(phi.grid_ptr(), params.dt);
    prev.push_snapshot(phi);
    for (int n = 0; n < steps; ++n) prev.push_snapshot(phi);

    PicardDiagnostics diag;
    SpaceTimeField current = prev;
    for (int k = 1; k <= params.picard_max_iterations; ++k) {
        current = solve_frozen(phi, prev, T, lagrangian, params);
        double inc = 0.0;
        for (int n = 1; n <= steps; ++n)
            inc = std::max(inc, sup_norm_diff(current.snapshot(n), prev.snapshot(n)));
        diag.increments.push_back(inc);
        diag.iterations = k;
        prev = current;
        if (inc <= tol) {
            diag.converged = true;
            break;
        }
    }
    diag.argmin_at_bound = current.argmin_at_bound_total();
    return {std::move(current), std::move(diag)};
}

GridFunction t_minus(const GridFunction& phi, double t, const LagrangianModel& lagrangian,
                     const SchemeParams& params) {
    if (t < 0.0) throw Error(ErrorKind::InvalidInput, "t_minus needs t >= 0");
    if (t == 0.0) return phi;
    if (t > params.horizon_cap * (1.0 + 1e-12))
        throw Error(ErrorKind::InvalidInput,
                    "horizon exceeds the per-call cap; evolve in chunks instead");
    return picard(phi, t, lagrangian, params).field.back();
}

GridFunction t_plus(const GridFunction& phi, double t, const LagrangianModel& lagrangian,
                    const SchemeParams& params) {
    if (t < 0.0) throw Error(ErrorKind::InvalidInput, "t_plus needs t >= 0");
    if (t == 0.0) return phi;
    std::vector<double> neg(phi.values());
    for (double& v : neg) v = -v;
    GridFunction mphi(phi.grid_ptr(), std::move(neg));
    LagrangianModel dual = lagrangian.dual();
    GridFunction res = t_minus(mphi, t, dual, params);
    std::vector<double> out(res.values());
    for (double& v : out) v = -v;
    return GridFunction(phi.grid_ptr(), std::move(out));
}

PicardResult t_plus_evolution(const GridFunction& phi, double t,
                              const LagrangianModel& lagrangian, const SchemeParams& params) {
    std::vector<double> neg(phi.values());
    for (double& v : neg) v = -v;
    GridFunction mphi(phi.grid_ptr(), std::move(neg));
    LagrangianModel dual = lagrangian.dual();
    PicardResult res = picard(mphi, t, dual, params);
    SpaceTimeField flipped(phi.grid_ptr(), params.dt);
    for (int n = 0; n <= res.field.steps(); ++n) {
        std::vector<double> vals(res.field.snapshot(n).values());
        for (double& v : vals) v = -v;
        flipped.push_snapshot(GridFunction(phi.grid_ptr(), std::move(vals)));
    }
    return {std::move(flipped), std::move(res.diagnostics)};
}

}  // namespace chjb
