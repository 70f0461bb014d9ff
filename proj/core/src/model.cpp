#include "chjb/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "chjb/errors.hpp"

namespace chjb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// index of the cell containing q in a sorted node list, clamped
int clamped_cell(const std::vector<double>& nodes, double q, double& w) {
    const int n = static_cast<int>(nodes.size());
    if (n == 1 || q <= nodes.front()) {
        w = 0.0;
        return 0;
    }
    if (q >= nodes.back()) {
        w = 0.0;
        return n - 1;
    }
    int lo = static_cast<int>(std::upper_bound(nodes.begin(), nodes.end(), q) - nodes.begin()) - 1;
    double h = nodes[static_cast<std::size_t>(lo + 1)] - nodes[static_cast<std::size_t>(lo)];
    w = (q - nodes[static_cast<std::size_t>(lo)]) / h;
    return lo;
}

void check_uniform_symmetric(const std::vector<double>& grid, const char* name) {
    if (grid.size() < 2) throw Error(ErrorKind::InvalidInput, std::string(name) + " grid too small");
    double h = grid[1] - grid[0];
    if (!(h > 0.0)) throw Error(ErrorKind::InvalidInput, std::string(name) + " grid not increasing");
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
        double d = grid[i + 1] - grid[i];
        if (std::fabs(d - h) > 1e-9 * std::max(1.0, std::fabs(h)))
            throw Error(ErrorKind::InvalidInput, std::string(name) + " grid not uniform");
    }
    if (std::fabs(grid.front() + grid.back()) > 1e-9 * std::max(1.0, std::fabs(grid.back())))
        throw Error(ErrorKind::InvalidInput, std::string(name) + " grid not symmetric");
}

}  // namespace

HamiltonianPtr HamiltonianModel::quadratic_contact(Expression g, Expression potential,
                                                   double kinetic_coeff, double lambda,
                                                   double p_max, int dimension) {
    if (!(kinetic_coeff > 0.0))
        throw Error(ErrorKind::Model, "kinetic coefficient must be positive");
    if (lambda < 0.0) throw Error(ErrorKind::Model, "lambda must be nonnegative");
    auto m = std::shared_ptr<HamiltonianModel>(new HamiltonianModel());
    m->family_ = HamiltonianFamily::QuadraticContact;
    m->dimension_ = dimension;
    m->lambda_ = lambda;
    m->p_max_ = p_max;
    m->kinetic_coeff_ = kinetic_coeff;
    m->g_ = std::move(g);
    m->potential_ = std::move(potential);
    return m;
}

HamiltonianPtr HamiltonianModel::tabulated(TabulatedHamiltonian table, double lambda) {
    if (lambda < 0.0) throw Error(ErrorKind::Model, "lambda must be nonnegative");
    if (table.x_nodes.empty() || table.u_nodes.empty() || table.p_nodes.size() < 3)
        throw Error(ErrorKind::Model, "tabulated Hamiltonian needs a full (x,u,p) lattice");
    if (table.values.size() !=
        table.x_nodes.size() * table.u_nodes.size() * table.p_nodes.size())
        throw Error(ErrorKind::Model, "tabulated Hamiltonian lattice is incomplete");
    check_uniform_symmetric(table.p_nodes, "p");
    if (!(table.x_period > 0.0))
        throw Error(ErrorKind::Model, "tabulated Hamiltonian needs a positive x period");
    auto m = std::shared_ptr<HamiltonianModel>(new HamiltonianModel());
    m->family_ = HamiltonianFamily::Tabulated;
    m->dimension_ = 1;
    m->lambda_ = lambda;
    m->p_max_ = table.p_nodes.back();
    m->table_ = std::move(table);
    return m;
}

HamiltonianPtr HamiltonianModel::from_csv(const std::string& path, double lambda) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorKind::Io, "empty CSV " + path);
    // header must be x,u,p,H
    {
        std::string stripped;
        for (char c : line)
            if (!std::isspace(static_cast<unsigned char>(c))) stripped += c;
        if (stripped != "x,u,p,H")
            throw Error(ErrorKind::Io, "expected header x,u,p,H in " + path);
    }
    struct Row {
        double x, u, p, h;
    };
    std::vector<Row> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ss(line);
        Row r{};
        char c1, c2, c3;
        if (!(ss >> r.x >> c1 >> r.u >> c2 >> r.p >> c3 >> r.h) || c1 != ',' || c2 != ',' ||
            c3 != ',')
            throw Error(ErrorKind::Io,
                        "bad CSV row at line " + std::to_string(lineno) + " of " + path);
        rows.push_back(r);
    }
    auto collect = [&](auto proj) {
        std::vector<double> vals;
        for (const Row& r : rows) vals.push_back(proj(r));
        std::sort(vals.begin(), vals.end());
        vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
        return vals;
    };
    TabulatedHamiltonian t;
    t.x_nodes = collect([](const Row& r) { return r.x; });
    t.u_nodes = collect([](const Row& r) { return r.u; });
    t.p_nodes = collect([](const Row& r) { return r.p; });
    t.values.assign(t.x_nodes.size() * t.u_nodes.size() * t.p_nodes.size(),
                    std::numeric_limits<double>::quiet_NaN());
    auto index_of = [](const std::vector<double>& nodes, double v) {
        return static_cast<std::size_t>(
            std::lower_bound(nodes.begin(), nodes.end(), v) - nodes.begin());
    };
    for (const Row& r : rows) {
        std::size_t ix = index_of(t.x_nodes, r.x);
        std::size_t iu = index_of(t.u_nodes, r.u);
        std::size_t ip = index_of(t.p_nodes, r.p);
        t.values[(ix * t.u_nodes.size() + iu) * t.p_nodes.size() + ip] = r.h;
    }
    for (double v : t.values)
        if (std::isnan(v)) throw Error(ErrorKind::Io, "CSV lattice has holes: " + path);
    // x spacing doubles as the period step; one period covers the samples
    double hx = t.x_nodes.size() > 1 ? t.x_nodes[1] - t.x_nodes[0] : 1.0;
    t.x_period = (t.x_nodes.back() - t.x_nodes.front()) + hx;
    return tabulated(std::move(t), lambda);
}

double HamiltonianModel::potential_at(const Vec2& x) const {
    if (family_ != HamiltonianFamily::QuadraticContact) return 0.0;
    double v = potential_.eval(x[0]);
    if (dimension_ == 2) v += potential_.eval(x[1]);
    return v;
}

double HamiltonianModel::eval(const Vec2& x, double u, const Vec2& p) const {
    if (family_ == HamiltonianFamily::QuadraticContact) {
        double p2 = p[0] * p[0];
        if (dimension_ == 2) p2 += p[1] * p[1];
        return g_.eval(u) + 0.5 * kinetic_coeff_ * p2 + potential_at(x);
    }
    // tabulated: trilinear with x periodic, u clamped, p range-checked
    const TabulatedHamiltonian& t = table_;
    if (std::fabs(p[0]) > p_max_ * (1.0 + 1e-12))
        throw Error(ErrorKind::Range, "tabulated Hamiltonian queried outside |p| <= p_max");
    double px = std::clamp(p[0], -p_max_, p_max_);
    double wx, wu, wp;
    // periodic x: shift the query into [front, front + period)
    double rel = std::fmod(x[0] - t.x_nodes.front(), t.x_period);
    if (rel < 0.0) rel += t.x_period;
    double q = t.x_nodes.front() + rel;
    int ix = clamped_cell(t.x_nodes, q, wx);
    int ix1 = ix;
    if (wx > 0.0) {
        ix1 = ix + 1;
    } else if (q > t.x_nodes.back()) {
        // inside the wrap cell between the last and (first + period) node
        ix1 = 0;
        double h = t.x_period - (t.x_nodes.back() - t.x_nodes.front());
        wx = (q - t.x_nodes.back()) / h;
        ix = static_cast<int>(t.x_nodes.size()) - 1;
    }
    int iu = clamped_cell(t.u_nodes, u, wu);
    int iu1 = wu > 0.0 ? iu + 1 : iu;
    int ip = clamped_cell(t.p_nodes, px, wp);
    int ip1 = wp > 0.0 ? ip + 1 : ip;
    auto corner = [&](int a, int b, int c) { return t.value(a, b, c); };
    auto lerp = [](double a, double b, double w) { return (1.0 - w) * a + w * b; };
    double c00 = lerp(corner(ix, iu, ip), corner(ix, iu, ip1), wp);
    double c01 = lerp(corner(ix, iu1, ip), corner(ix, iu1, ip1), wp);
    double c10 = lerp(corner(ix1, iu, ip), corner(ix1, iu, ip1), wp);
    double c11 = lerp(corner(ix1, iu1, ip), corner(ix1, iu1, ip1), wp);
    return lerp(lerp(c00, c01, wu), lerp(c10, c11, wu), wx);
}

LipschitzReport HamiltonianModel::validate_lipschitz(int sample_count, double u_range) const {
    if (sample_count < 2)
        throw Error(ErrorKind::InvalidInput, "validate_lipschitz needs sample_count >= 2");
    LipschitzReport report;
    report.declared = lambda_;
    std::vector<double> xs, us, ps;
    if (family_ == HamiltonianFamily::Tabulated) {
        xs = table_.x_nodes;
        us = table_.u_nodes;
        ps = table_.p_nodes;
    } else {
        for (int i = 0; i < sample_count; ++i) {
            double t = sample_count == 1 ? 0.0 : static_cast<double>(i) / (sample_count - 1);
            xs.push_back(-1.0 + 2.0 * t);
            us.push_back(-u_range + 2.0 * u_range * t);
            ps.push_back(-p_max_ + 2.0 * p_max_ * t);
        }
    }
    for (double x : xs) {
        for (double p : ps) {
            for (std::size_t a = 0; a < us.size(); ++a) {
                for (std::size_t b = a + 1; b < us.size(); ++b) {
                    double du = std::fabs(us[b] - us[a]);
                    if (du == 0.0) continue;
                    double slope = std::fabs(eval({x, 0.0}, us[b], {p, 0.0}) -
                                             eval({x, 0.0}, us[a], {p, 0.0})) /
                                   du;
                    if (slope > report.max_slope) {
                        report.max_slope = slope;
                        report.witness = LipschitzWitness{x, p, us[a], us[b], slope};
                    }
                }
            }
        }
    }
    report.pass = report.max_slope <= lambda_ * (1.0 + 1e-6);
    if (report.pass) report.witness.reset();
    return report;
}

ModelValidationReport HamiltonianModel::validate(int sample_count, double u_range,
                                                 double coercivity_margin) const {
    ModelValidationReport report;
    report.lipschitz = validate_lipschitz(sample_count, u_range);

    std::vector<double> xs, ps;
    if (family_ == HamiltonianFamily::Tabulated) {
        xs = table_.x_nodes;
        ps = table_.p_nodes;
    } else {
        for (int i = 0; i < std::max(sample_count, 9); ++i) {
            double t = static_cast<double>(i) / (std::max(sample_count, 9) - 1);
            xs.push_back(-1.0 + 2.0 * t);
            ps.push_back(-p_max_ + 2.0 * p_max_ * t);
        }
    }
    for (double x : xs) {
        for (std::size_t k = 0; k + 2 < ps.size(); ++k) {
            double h0 = eval({x, 0.0}, 0.0, {ps[k], 0.0});
            double h1 = eval({x, 0.0}, 0.0, {ps[k + 1], 0.0});
            double h2 = eval({x, 0.0}, 0.0, {ps[k + 2], 0.0});
            double tol = 1e-8 * (1.0 + std::fabs(h0) + std::fabs(h2));
            if (h1 > 0.5 * (h0 + h2) + tol) {
                report.convex = false;
                std::ostringstream os;
                os << "midpoint convexity violated at x=" << x << " p=(" << ps[k] << ","
                   << ps[k + 1] << "," << ps[k + 2] << ")";
                report.convexity_detail = os.str();
                break;
            }
        }
        if (!report.convex) break;
    }
    for (double x : xs) {
        double base = eval({x, 0.0}, 0.0, {0.0, 0.0});
        double lo = eval({x, 0.0}, 0.0, {-p_max_, 0.0});
        double hi = eval({x, 0.0}, 0.0, {p_max_, 0.0});
        if (std::min(lo, hi) < base + coercivity_margin) {
            report.coercive = false;
            std::ostringstream os;
            os << "coercivity proxy failed at x=" << x << ": H(x,0,+-p_max)=" << std::min(lo, hi)
               << " < H(x,0,0)+margin=" << base + coercivity_margin;
            report.coercivity_detail = os.str();
            break;
        }
    }
    return report;
}

bool HamiltonianModel::strictly_decreasing_in_u(int sample_count, double u_range) const {
    std::vector<double> xs = {0.0, 0.37, -0.61, 1.0};
    double p_probe = 0.5 * p_max_;
    for (double x : xs) {
        for (double p : {0.0, p_probe, -p_probe}) {
            double prev = eval({x, 0.0}, -u_range, {p, 0.0});
            for (int i = 1; i < sample_count; ++i) {
                double u = -u_range + 2.0 * u_range * i / (sample_count - 1);
                double cur = eval({x, 0.0}, u, {p, 0.0});
                if (!(cur < prev)) return false;
                prev = cur;
            }
        }
    }
    return true;
}

LegendreRow legendre_transform(const HamiltonianModel& model, double x, double u,
                               const std::vector<double>& v_grid,
                               const std::vector<double>& p_grid) {
    check_uniform_symmetric(p_grid, "p");
    // convexity of the sampled H along p_grid
    std::vector<double> h(p_grid.size());
    for (std::size_t i = 0; i < p_grid.size(); ++i)
        h[i] = model.eval({x, 0.0}, u, {p_grid[i], 0.0});
    for (std::size_t k = 0; k + 2 < p_grid.size(); ++k) {
        double tol = 1e-8 * (1.0 + std::fabs(h[k]) + std::fabs(h[k + 2]));
        if (h[k + 1] > 0.5 * (h[k] + h[k + 2]) + tol) {
            std::ostringstream os;
            os << "Hamiltonian samples not convex in p at x=" << x << " u=" << u << " p=("
               << p_grid[k] << "," << p_grid[k + 1] << "," << p_grid[k + 2] << ")";
            throw Error(ErrorKind::Model, os.str());
        }
    }
    LegendreRow row;
    row.v_grid = v_grid;
    row.values.resize(v_grid.size());
    row.edge_active.resize(v_grid.size());
    const std::size_t np = p_grid.size();
    for (std::size_t j = 0; j < v_grid.size(); ++j) {
        double v = v_grid[j];
        double best = -kInf;
        std::size_t best_i = 0;
        for (std::size_t i = 0; i < np; ++i) {
            double c = p_grid[i] * v - h[i];
            if (c > best || (c == best && std::fabs(p_grid[i]) < std::fabs(p_grid[best_i]))) {
                best = c;
                best_i = i;
            }
        }
        row.values[j] = best;
        row.edge_active[j] = (best_i == 0 || best_i == np - 1) ? 1 : 0;
    }
    return row;
}

LagrangianModel LagrangianModel::analytic(HamiltonianPtr model) {
    if (model->family() != HamiltonianFamily::QuadraticContact)
        throw Error(ErrorKind::InvalidInput, "analytic Lagrangian requires the quadratic family");
    LagrangianModel L;
    L.model_ = std::move(model);
    L.analytic_ = true;
    return L;
}

LagrangianModel LagrangianModel::tabulate(HamiltonianPtr model, double v_max, int v_count) {
    if (model->dimension() != 1)
        throw Error(ErrorKind::InvalidInput, "tabulated Lagrangians support dimension 1 only");
    if (v_count < 3 || v_count % 2 == 0)
        throw Error(ErrorKind::InvalidInput, "velocity grid count must be odd and >= 3");
    LagrangianModel L;
    L.model_ = model;
    L.analytic_ = false;
    L.v_grid_.resize(static_cast<std::size_t>(v_count));
    for (int j = 0; j < v_count; ++j)
        L.v_grid_[static_cast<std::size_t>(j)] = -v_max + 2.0 * v_max * j / (v_count - 1);

    std::vector<double> xs, us, ps;
    if (model->family() == HamiltonianFamily::Tabulated) {
        xs = model->table().x_nodes;
        us = model->table().u_nodes;
        ps = model->table().p_nodes;
    } else {
        // sample the closed form on a default lattice
        const int nx = 65, nu = 17, np = 257;
        for (int i = 0; i < nx; ++i) xs.push_back(-1.0 + 2.0 * i / (nx - 1));
        for (int i = 0; i < nu; ++i) us.push_back(-8.0 + 16.0 * i / (nu - 1));
        for (int i = 0; i < np; ++i)
            ps.push_back(-model->p_max() + 2.0 * model->p_max() * i / (np - 1));
    }
    const std::size_t nx = xs.size(), nu = us.size(), nv = L.v_grid_.size();
    L.values_.assign(nx * nu * nv, 0.0);
    L.infeasible_.assign(nx * nv, 0);
    for (std::size_t ix = 0; ix < nx; ++ix) {
        for (std::size_t iu = 0; iu < nu; ++iu) {
            LegendreRow row = legendre_transform(*model, xs[ix], us[iu], L.v_grid_, ps);
            for (std::size_t iv = 0; iv < nv; ++iv) {
                L.values_[(ix * nu + iu) * nv + iv] = row.values[iv];
                if (row.edge_active[iv]) L.infeasible_[ix * nv + iv] = 1;
            }
        }
    }
    // stash lattice axes for interpolation
    L.x_axis_ = std::move(xs);
    L.u_axis_ = std::move(us);
    return L;
}

LagrangianModel LagrangianModel::dual() const {
    LagrangianModel L = *this;
    L.dual_ = !dual_;
    return L;
}

double LagrangianModel::eval(const Vec2& x, double u, const Vec2& v) const {
    double uu = dual_ ? -u : u;
    Vec2 vv = dual_ ? Vec2{-v[0], -v[1]} : v;
    if (analytic_) {
        const HamiltonianModel& m = *model_;
        double v2 = vv[0] * vv[0];
        if (m.dimension() == 2) v2 += vv[1] * vv[1];
        return -m.contact_term().eval(uu) + 0.5 * v2 / m.kinetic_coeff() - m.potential_at(x);
    }
    return eval_tabulated(x[0], uu, vv[0]);
}

double LagrangianModel::eval_tabulated(double x, double u, double v) const {
    if (std::fabs(v) > v_grid_.back()) return kInf;
    const std::size_t nu = u_axis_.size(), nv = v_grid_.size();
    double wv;
    int iv = clamped_cell(v_grid_, v, wv);
    int iv1 = wv > 0.0 ? iv + 1 : iv;
    double wu;
    int iu = clamped_cell(u_axis_, u, wu);
    int iu1 = wu > 0.0 ? iu + 1 : iu;
    // periodic x cell
    const double period = model_->family() == HamiltonianFamily::Tabulated
                              ? model_->table().x_period
                              : 2.0;
    double rel = std::fmod(x - x_axis_.front(), period);
    if (rel < 0.0) rel += period;
    double q = x_axis_.front() + rel;
    double wx;
    int ix = clamped_cell(x_axis_, q, wx);
    int ix1 = ix;
    if (wx > 0.0) {
        ix1 = ix + 1;
    } else if (q > x_axis_.back()) {
        ix1 = 0;
        double h = period - (x_axis_.back() - x_axis_.front());
        wx = (q - x_axis_.back()) / h;
        ix = static_cast<int>(x_axis_.size()) - 1;
    }
    auto masked = [&](int a, int c) {
        return infeasible_[static_cast<std::size_t>(a) * nv + static_cast<std::size_t>(c)] != 0;
    };
    if (masked(ix, iv) || masked(ix, iv1) || masked(ix1, iv) || masked(ix1, iv1)) return kInf;
    auto at = [&](int a, int b, int c) {
        return values_[(static_cast<std::size_t>(a) * nu + static_cast<std::size_t>(b)) * nv +
                       static_cast<std::size_t>(c)];
    };
    auto lerp = [](double a, double b, double w) { return (1.0 - w) * a + w * b; };
    double c00 = lerp(at(ix, iu, iv), at(ix, iu, iv1), wv);
    double c01 = lerp(at(ix, iu1, iv), at(ix, iu1, iv1), wv);
    double c10 = lerp(at(ix1, iu, iv), at(ix1, iu, iv1), wv);
    double c11 = lerp(at(ix1, iu1, iv), at(ix1, iu1, iv1), wv);
    return lerp(lerp(c00, c01, wu), lerp(c10, c11, wu), wx);
}

}  // namespace chjb
