#include "chjb/oracle.hpp"

#include <cmath>
#include <vector>

#include "chjb/errors.hpp"

namespace chjb {
namespace oracle {

namespace {

// Recursive expansion of the minimization tree: value(node, level) repeats
// the exact per-node arithmetic of the marching scheme, with the previous
// level supplied by recursion instead of a stored snapshot.
struct Expansion {
    const StepKernel& kernel;
    const GridFunction& phi;
    const std::vector<std::vector<double>>& run_costs;  // per level

    double value(int node, int level) const {
        if (level == 0) return phi[node];
        auto prev = [this, level](int k) { return value(k, level - 1); };
        return kernel
            .update(node,
                    run_costs[static_cast<std::size_t>(level - 1)].data() +
                        static_cast<std::size_t>(node) *
                            static_cast<std::size_t>(kernel.velocity_count()),
                    prev)
            .value;
    }
};

}  // namespace

GridFunction brute_force_value(const GridFunction& phi, const SpaceTimeField& frozen_field,
                               int n_steps, const LagrangianModel& lagrangian,
                               const SchemeParams& params) {
    if (n_steps < 0 || n_steps > 6)
        throw Error(ErrorKind::InvalidInput, "brute force supports 0 <= n_steps <= 6");
    if (phi.grid().node_count() > 32)
        throw Error(ErrorKind::InvalidInput, "brute force supports at most 32 nodes");
    if (params.velocity_count > 7)
        throw Error(ErrorKind::InvalidInput, "brute force supports at most 7 velocities per axis");
    if (n_steps == 0) return phi;
    if (frozen_field.steps() < n_steps || frozen_field.dt() != params.dt)
        throw Error(ErrorKind::InvalidInput, "frozen field does not cover the requested steps");

    StepKernel kernel(phi.grid_ptr(), lagrangian, params);
    std::vector<std::vector<double>> rc(static_cast<std::size_t>(n_steps));
    for (int n = 0; n < n_steps; ++n)
        kernel.run_costs(frozen_field.snapshot(n), rc[static_cast<std::size_t>(n)]);

    Expansion expansion{kernel, phi, rc};
    std::vector<double> out(static_cast<std::size_t>(phi.grid().node_count()));
    for (int i = 0; i < phi.grid().node_count(); ++i)
        out[static_cast<std::size_t>(i)] = expansion.value(i, n_steps);
    return GridFunction(phi.grid_ptr(), std::move(out));
}

GridFunction hopf_lax(const GridFunction& phi, double t) {
    const PeriodicGrid& g = phi.grid();
    if (g.dimension() != 1)
        throw Error(ErrorKind::InvalidInput, "the Hopf-Lax reference is for the circle");
    if (!(t > 0.0)) throw Error(ErrorKind::InvalidInput, "the Hopf-Lax reference needs t > 0");
    const int n = g.node_count();
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double x = g.axis_coord(0, i);
        double best = std::numeric_limits<double>::infinity();
        for (int j = 0; j < n; ++j) {
            const double d = g.axis_distance(0, x, g.axis_coord(0, j));
            best = std::min(best, phi[j] + d * d / (2.0 * t));
        }
        out[static_cast<std::size_t>(i)] = best;
    }
    return GridFunction(phi.grid_ptr(), std::move(out));
}

std::pair<GridFunction, GridFunction> stationary_branches(double lambda, GridPtr grid) {
    if (!(lambda > 2.0))
        throw Error(ErrorKind::Range, "the circle example needs lambda > 2");
    if (grid->dimension() != 1 || std::fabs(grid->length(0) - 2.0) > 1e-12)
        throw Error(ErrorKind::InvalidInput,
                    "the circle example lives on the circle with fundamental domain (-1, 1]");
    const double root = std::sqrt(lambda * lambda - 4.0);
    const double c1 = 0.5 * (lambda + root);
    const double c2 = 0.5 * (lambda - root);
    const int n = grid->node_count();
    std::vector<double> u1(static_cast<std::size_t>(n)), u2(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double x = grid->axis_coord(0, i);
        const double V = 0.5 * x * x;
        u1[static_cast<std::size_t>(i)] = c1 * V;
        u2[static_cast<std::size_t>(i)] = c2 * V;
    }
    return {GridFunction(grid, std::move(u1)), GridFunction(grid, std::move(u2))};
}

}  // namespace oracle
}  // namespace chjb
