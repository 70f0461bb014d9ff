#pragma once

#include <array>
#include <memory>
#include <vector>

#include "chjb/expression.hpp"

namespace chjb {

/// Point / vector on the flat circle or 2-torus. Component 1 is unused in
/// dimension 1.
using Vec2 = std::array<double, 2>;

/// Uniform periodic grid on a flat circle (d = 1) or flat 2-torus (d = 2).
/// The fundamental domain per axis is (-length/2, length/2] and the nodes are
/// x_i = -length/2 + (i+1)*h, so the right endpoint is on the grid.
class PeriodicGrid {
  public:
    PeriodicGrid(int dimension, Vec2 length, std::array<int, 2> nodes);

    static std::shared_ptr<const PeriodicGrid> circle(double length, int n);
    static std::shared_ptr<const PeriodicGrid> torus(Vec2 length, std::array<int, 2> n);

    int dimension() const { return dimension_; }
    double length(int axis) const { return length_[static_cast<std::size_t>(axis)]; }
    int axis_nodes(int axis) const { return nodes_[static_cast<std::size_t>(axis)]; }
    double spacing(int axis) const { return spacing_[static_cast<std::size_t>(axis)]; }
    double max_spacing() const;
    int node_count() const { return total_; }

    /// Coordinate of node i along one axis.
    double axis_coord(int axis, int i) const {
        return -0.5 * length(axis) + (i + 1) * spacing(axis);
    }

    /// Flat index <-> per-axis indices; x varies fastest in dimension 2.
    int flat_index(int ix, int iy) const { return iy * axis_nodes(0) + ix; }
    Vec2 node(int flat) const;

    /// Maps a point into the fundamental domain, componentwise.
    Vec2 wrap(Vec2 p) const;

    /// Distance in the quotient metric, componentwise max norm per axis
    /// handled by the caller; this returns per-axis distances.
    double axis_distance(int axis, double a, double b) const;

    bool operator==(const PeriodicGrid& other) const;

  private:
    int dimension_;
    Vec2 length_;
    std::array<int, 2> nodes_;
    Vec2 spacing_;
    int total_;
};

using GridPtr = std::shared_ptr<const PeriodicGrid>;

/// Scalar function sampled on the nodes of a PeriodicGrid. Values are finite.
class GridFunction {
  public:
    GridFunction(GridPtr grid, std::vector<double> values);
    GridFunction(GridPtr grid, double fill = 0.0);

    const PeriodicGrid& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& mutable_values() { return values_; }
    double operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }

    double min() const;
    double max() const;

    /// Periodic multilinear interpolation; exact at nodes.
    double interpolate(Vec2 p) const;

    /// Nodewise evaluation of an expression in x. On the torus the expression
    /// is evaluated per component and summed.
    static GridFunction from_expression(GridPtr grid, const Expression& expr);

  private:
    GridPtr grid_;
    std::vector<double> values_;
};

/// Max-norm distance between two functions on the same grid.
double sup_norm_diff(const GridFunction& f, const GridFunction& g);

/// Time-indexed sequence of snapshots at t_n = n*dt plus, optionally, the
/// per-step minimizing velocities (one Vec2 per node per step, step n holding
/// the velocity that produced snapshot n from snapshot n-1).
class SpaceTimeField {
  public:
    SpaceTimeField(GridPtr grid, double dt);

    double dt() const { return dt_; }
    int steps() const { return static_cast<int>(snapshots_.size()) - 1; }
    double horizon() const { return steps() * dt_; }
    const PeriodicGrid& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }

    const GridFunction& snapshot(int n) const { return snapshots_[static_cast<std::size_t>(n)]; }
    const GridFunction& back() const { return snapshots_.back(); }
    const std::vector<GridFunction>& snapshots() const { return snapshots_; }

    void push_snapshot(GridFunction f);
    void push_snapshot(GridFunction f, std::vector<Vec2> argmin, int at_bound_count);

    bool has_argmins() const { return !argmin_.empty(); }
    /// Minimizing velocities of step n (1-based: produced snapshot n).
    const std::vector<Vec2>& argmin(int n) const { return argmin_[static_cast<std::size_t>(n - 1)]; }
    /// Steps whose argmin touched the velocity bound, summed over the field.
    int argmin_at_bound_total() const;

    /// Appends another field's steps after this one (same grid and dt). The
    /// other field's snapshot 0 is dropped; its steps and argmins follow ours.
    void concatenate(const SpaceTimeField& tail);

  private:
    GridPtr grid_;
    double dt_;
    std::vector<GridFunction> snapshots_;
    std::vector<std::vector<Vec2>> argmin_;
    std::vector<int> at_bound_;
};

}  // namespace chjb
