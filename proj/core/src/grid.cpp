#include "chjb/grid.hpp"

#include <algorithm>
#include <cmath>

#include "chjb/errors.hpp"

namespace chjb {

namespace {

int wrap_index(int i, int n) {
    int r = i % n;
    return r < 0 ? r + n : r;
}

double wrap_coord(double x, double length) {
    // maps into (-length/2, length/2]
    double k = std::ceil(x / length - 0.5);
    double y = x - k * length;
    if (y <= -0.5 * length) y += length;
    if (y > 0.5 * length) y -= length;
    return y;
}

}  // namespace

PeriodicGrid::PeriodicGrid(int dimension, Vec2 length, std::array<int, 2> nodes)
    : dimension_(dimension), length_(length), nodes_(nodes) {
    if (dimension != 1 && dimension != 2)
        throw Error(ErrorKind::InvalidInput, "grid dimension must be 1 or 2");
    if (dimension == 1) {
        nodes_[1] = 1;
        length_[1] = 1.0;
    }
    for (int a = 0; a < dimension; ++a) {
        if (nodes_[static_cast<std::size_t>(a)] < 4)
            throw Error(ErrorKind::InvalidInput, "grid needs at least 4 nodes per axis");
        if (!(length_[static_cast<std::size_t>(a)] > 0.0))
            throw Error(ErrorKind::InvalidInput, "grid period length must be positive");
    }
    spacing_[0] = length_[0] / nodes_[0];
    spacing_[1] = dimension == 2 ? length_[1] / nodes_[1] : 1.0;
    total_ = nodes_[0] * nodes_[1];
}

GridPtr PeriodicGrid::circle(double length, int n) {
    return std::make_shared<const PeriodicGrid>(1, Vec2{length, 1.0}, std::array<int, 2>{n, 1});
}

GridPtr PeriodicGrid::torus(Vec2 length, std::array<int, 2> n) {
    return std::make_shared<const PeriodicGrid>(2, length, n);
}

double PeriodicGrid::max_spacing() const {
    return dimension_ == 2 ? std::max(spacing_[0], spacing_[1]) : spacing_[0];
}

Vec2 PeriodicGrid::node(int flat) const {
    int ix = flat % nodes_[0];
    int iy = flat / nodes_[0];
    return {axis_coord(0, ix), dimension_ == 2 ? axis_coord(1, iy) : 0.0};
}

Vec2 PeriodicGrid::wrap(Vec2 p) const {
    Vec2 out{wrap_coord(p[0], length_[0]), 0.0};
    if (dimension_ == 2) out[1] = wrap_coord(p[1], length_[1]);
    return out;
}

double PeriodicGrid::axis_distance(int axis, double a, double b) const {
    double L = length(axis);
    double d = std::fabs(wrap_coord(a - b, L));
    return std::min(d, L - d);
}

bool PeriodicGrid::operator==(const PeriodicGrid& other) const {
    if (dimension_ != other.dimension_) return false;
    for (int a = 0; a < dimension_; ++a) {
        std::size_t s = static_cast<std::size_t>(a);
        if (length_[s] != other.length_[s] || nodes_[s] != other.nodes_[s]) return false;
    }
    return true;
}

GridFunction::GridFunction(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (static_cast<int>(values_.size()) != grid_->node_count())
        throw Error(ErrorKind::InvalidInput, "grid function value count does not match grid");
    for (double v : values_)
        if (!std::isfinite(v))
            throw Error(ErrorKind::InvalidInput, "grid function values must be finite");
}

GridFunction::GridFunction(GridPtr grid, double fill)
    : grid_(std::move(grid)), values_(static_cast<std::size_t>(grid_->node_count()), fill) {
    if (!std::isfinite(fill))
        throw Error(ErrorKind::InvalidInput, "grid function values must be finite");
}

double GridFunction::min() const { return *std::min_element(values_.begin(), values_.end()); }
double GridFunction::max() const { return *std::max_element(values_.begin(), values_.end()); }

namespace {

// Splits an axis query into a base node index and interpolation weight, with
// exact results when the query sits on a node.
void locate(const PeriodicGrid& g, int axis, double q, int& lo, double& w) {
    double s = (q - g.axis_coord(axis, 0)) / g.spacing(axis);
    double r = std::round(s);
    double frac = s - std::floor(s);
    int base;
    if (std::fabs(s - r) < 1e-12) {
        base = static_cast<int>(r);
        frac = 0.0;
    } else {
        base = static_cast<int>(std::floor(s));
    }
    lo = wrap_index(base, g.axis_nodes(axis));
    w = frac;
}

}  // namespace

double GridFunction::interpolate(Vec2 p) const {
    const PeriodicGrid& g = *grid_;
    Vec2 q = g.wrap(p);
    int ix;
    double wx;
    locate(g, 0, q[0], ix, wx);
    int ix1 = wrap_index(ix + 1, g.axis_nodes(0));
    if (g.dimension() == 1) {
        return (1.0 - wx) * values_[static_cast<std::size_t>(ix)] +
               wx * values_[static_cast<std::size_t>(ix1)];
    }
    int iy;
    double wy;
    locate(g, 1, q[1], iy, wy);
    int iy1 = wrap_index(iy + 1, g.axis_nodes(1));
    auto at = [&](int jx, int jy) { return values_[static_cast<std::size_t>(g.flat_index(jx, jy))]; };
    double low = (1.0 - wx) * at(ix, iy) + wx * at(ix1, iy);
    double high = (1.0 - wx) * at(ix, iy1) + wx * at(ix1, iy1);
    return (1.0 - wy) * low + wy * high;
}

GridFunction GridFunction::from_expression(GridPtr grid, const Expression& expr) {
    std::vector<double> values(static_cast<std::size_t>(grid->node_count()));
    const int nx = grid->axis_nodes(0);
    if (grid->dimension() == 1) {
        for (int i = 0; i < nx; ++i)
            values[static_cast<std::size_t>(i)] = expr.eval(grid->axis_coord(0, i));
    } else {
        std::vector<double> ex(static_cast<std::size_t>(nx));
        for (int i = 0; i < nx; ++i) ex[static_cast<std::size_t>(i)] = expr.eval(grid->axis_coord(0, i));
        const int ny = grid->axis_nodes(1);
        for (int j = 0; j < ny; ++j) {
            double ey = expr.eval(grid->axis_coord(1, j));
            for (int i = 0; i < nx; ++i)
                values[static_cast<std::size_t>(grid->flat_index(i, j))] =
                    ex[static_cast<std::size_t>(i)] + ey;
        }
    }
    return GridFunction(std::move(grid), std::move(values));
}

double sup_norm_diff(const GridFunction& f, const GridFunction& g) {
    if (!(f.grid() == g.grid()))
        throw Error(ErrorKind::InvalidInput, "sup_norm_diff: grid mismatch");
    double m = 0.0;
    const auto& a = f.values();
    const auto& b = g.values();
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
    return m;
}

SpaceTimeField::SpaceTimeField(GridPtr grid, double dt) : grid_(std::move(grid)), dt_(dt) {
    if (!(dt > 0.0)) throw Error(ErrorKind::InvalidInput, "time step must be positive");
}

void SpaceTimeField::push_snapshot(GridFunction f) {
    if (!(f.grid() == *grid_))
        throw Error(ErrorKind::InvalidInput, "snapshot grid does not match field grid");
    if (!argmin_.empty())
        throw Error(ErrorKind::InvalidInput, "field mixes snapshots with and without argmins");
    snapshots_.push_back(std::move(f));
}

void SpaceTimeField::push_snapshot(GridFunction f, std::vector<Vec2> argmin, int at_bound_count) {
    if (snapshots_.empty())
        throw Error(ErrorKind::InvalidInput, "initial snapshot carries no argmin");
    if (!(f.grid() == *grid_))
        throw Error(ErrorKind::InvalidInput, "snapshot grid does not match field grid");
    snapshots_.push_back(std::move(f));
    argmin_.push_back(std::move(argmin));
    at_bound_.push_back(at_bound_count);
}

int SpaceTimeField::argmin_at_bound_total() const {
    int total = 0;
    for (int c : at_bound_) total += c;
    return total;
}

void SpaceTimeField::concatenate(const SpaceTimeField& tail) {
    if (!(tail.grid() == *grid_) || tail.dt() != dt_)
        throw Error(ErrorKind::InvalidInput, "cannot concatenate fields with different grid or dt");
    if (steps() > 0 && has_argmins() != tail.has_argmins())
        throw Error(ErrorKind::InvalidInput, "cannot concatenate fields with and without argmins");
    for (int n = 1; n <= tail.steps(); ++n) {
        snapshots_.push_back(tail.snapshot(n));
        if (tail.has_argmins()) {
            argmin_.push_back(tail.argmin(n));
            at_bound_.push_back(tail.at_bound_[static_cast<std::size_t>(n - 1)]);
        }
    }
}

}  // namespace chjb
