#pragma once

#include <utility>

#include "chjb/grid.hpp"
#include "chjb/model.hpp"
#include "chjb/semigroup.hpp"

namespace chjb {
namespace oracle {

/// Exhaustive reference for the marching scheme: expands every discrete
/// velocity choice recursively (no value table), using the same StepKernel
/// minimization, run costs, interpolation and tie-break as sl_step. The
/// result therefore matches n_steps iterated sl_step calls bit for bit.
/// Guarded to tiny instances: n_steps <= 6, nodes <= 32, velocities <= 7 per
/// axis.
GridFunction brute_force_value(const GridFunction& phi, const SpaceTimeField& frozen_field,
                               int n_steps, const LagrangianModel& lagrangian,
                               const SchemeParams& params);

/// Closed-form reference for the u-independent quadratic Hamiltonian
/// H = |p|^2/2 on the circle: min over nodes y of
/// phi(y) + d(x, y)^2 / (2t).
GridFunction hopf_lax(const GridFunction& phi, double t);

/// The two stationary reference solutions of the worked circle example
/// -lambda u + |u'|^2/2 + V = 0 with V = x^2/2 on the circle (-1, 1]:
/// u = c V with c^2 - lambda c + 1 = 0. Requires lambda > 2. Returned as
/// (larger root solution, smaller root solution).
std::pair<GridFunction, GridFunction> stationary_branches(double lambda, GridPtr grid);

}  // namespace oracle
}  // namespace chjb
