#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "chjb/expression.hpp"
#include "chjb/grid.hpp"

namespace chjb {

enum class HamiltonianFamily { QuadraticContact, Tabulated };

/// One row of a discrete Legendre transform: the conjugate values over a
/// uniform symmetric velocity grid at a fixed (x, u). Entries whose argmax sat
/// on a momentum-grid boundary are flagged edge_active and must not be used as
/// finite conjugate values.
struct LegendreRow {
    std::vector<double> v_grid;
    std::vector<double> values;
    std::vector<unsigned char> edge_active;
};

/// Sampled Hamiltonian on an (x, u, p) lattice, x periodic, p on
/// [-p_max, p_max]. Loaded from CSV with header x,u,p,H.
struct TabulatedHamiltonian {
    std::vector<double> x_nodes;  // strictly increasing, one period
    std::vector<double> u_nodes;  // strictly increasing
    std::vector<double> p_nodes;  // uniform, symmetric
    std::vector<double> values;   // index ((ix * nu) + iu) * np + ip
    double x_period = 0.0;

    double value(int ix, int iu, int ip) const {
        return values[(static_cast<std::size_t>(ix) * u_nodes.size() + static_cast<std::size_t>(iu)) *
                          p_nodes.size() +
                      static_cast<std::size_t>(ip)];
    }
};

struct LipschitzWitness {
    double x, p, u_a, u_b, slope;
};

struct LipschitzReport {
    bool pass = true;
    double declared = 0.0;
    double max_slope = 0.0;
    std::optional<LipschitzWitness> witness;
};

struct ModelValidationReport {
    LipschitzReport lipschitz;
    bool convex = true;
    std::string convexity_detail;
    bool coercive = true;
    std::string coercivity_detail;
    bool pass() const { return lipschitz.pass && convex && coercive; }
};

/// Hamiltonian H(x, u, p): continuous, convex and coercive in p, uniformly
/// Lipschitz in u with declared constant lambda.
class HamiltonianModel {
  public:
    /// H = g(u) + a*|p|^2/2 + V(x); V is summed over components on the torus.
    static std::shared_ptr<const HamiltonianModel> quadratic_contact(
        Expression g, Expression potential, double kinetic_coeff, double lambda, double p_max,
        int dimension = 1);

    static std::shared_ptr<const HamiltonianModel> tabulated(TabulatedHamiltonian table,
                                                             double lambda);

    /// Parses CSV rows x,u,p,H into a tabulated model.
    static std::shared_ptr<const HamiltonianModel> from_csv(const std::string& path, double lambda);

    HamiltonianFamily family() const { return family_; }
    int dimension() const { return dimension_; }
    double lambda() const { return lambda_; }
    double p_max() const { return p_max_; }
    double kinetic_coeff() const { return kinetic_coeff_; }
    const Expression& contact_term() const { return g_; }
    const Expression& potential() const { return potential_; }
    const TabulatedHamiltonian& table() const { return table_; }

    /// Exact evaluation for the quadratic family, multilinear interpolation
    /// for tabulated models (which must have |p| <= p_max and dimension 1).
    double eval(const Vec2& x, double u, const Vec2& p) const;

    /// Potential part V(x) (zero for tabulated models, which are not split).
    double potential_at(const Vec2& x) const;

    /// Max sampled |H(x,u,p) - H(x,u',p)| / |u - u'|; passes iff it does not
    /// exceed lambda * (1 + 1e-6). Samples a lattice with sample_count points
    /// per axis, u in [-u_range, u_range].
    LipschitzReport validate_lipschitz(int sample_count, double u_range = 10.0) const;

    /// Lipschitz + midpoint convexity in p + coercivity proxy
    /// H(x,0,+-p_max) >= H(x,0,0) + margin on sampled x.
    ModelValidationReport validate(int sample_count, double u_range = 10.0,
                                   double coercivity_margin = 0.1) const;

    /// Samples H in u and reports whether it decreases strictly.
    bool strictly_decreasing_in_u(int sample_count = 33, double u_range = 10.0) const;

  private:
    HamiltonianModel() : g_(Expression::constant(0.0)), potential_(Expression::constant(0.0)) {}

    HamiltonianFamily family_ = HamiltonianFamily::QuadraticContact;
    int dimension_ = 1;
    double lambda_ = 0.0;
    double p_max_ = 8.0;
    double kinetic_coeff_ = 1.0;
    Expression g_;
    Expression potential_;
    TabulatedHamiltonian table_;
};

using HamiltonianPtr = std::shared_ptr<const HamiltonianModel>;

/// Discrete Legendre transform at one (x, u): for each v on v_grid, the max
/// over p_grid of <p, v> - H(x, u, p), argmax ties broken toward smaller |p|.
/// Requires p_grid uniform and symmetric and H convex in p along it (checked
/// by a midpoint test; violations raise a model error naming the triple).
LegendreRow legendre_transform(const HamiltonianModel& model, double x, double u,
                               const std::vector<double>& v_grid,
                               const std::vector<double>& p_grid);

/// Lagrangian L(x, u, v) obtained from a Hamiltonian. Values may be +infinity
/// (outside the effective domain); finite values are Lipschitz in u with the
/// model's lambda. The dual view evaluates L(x, -u, -v), which drives the
/// forward semigroup.
class LagrangianModel {
  public:
    /// Closed form for the quadratic family:
    /// L = -g(u) + |v|^2/(2a) - V(x).
    static LagrangianModel analytic(HamiltonianPtr model);

    /// Tabulates rows at every (x_node, u_node) of the model's lattice over a
    /// uniform symmetric velocity grid with v_count points on [-v_max, v_max].
    /// The effective-domain mask is shared across u.
    static LagrangianModel tabulate(HamiltonianPtr model, double v_max, int v_count);

    double eval(const Vec2& x, double u, const Vec2& v) const;

    LagrangianModel dual() const;
    bool is_dual() const { return dual_; }
    bool analytic_form() const { return analytic_; }
    const HamiltonianPtr& hamiltonian() const { return model_; }
    double lambda() const { return model_->lambda(); }
    int dimension() const { return model_->dimension(); }

    const std::vector<double>& table_v_grid() const { return v_grid_; }

  private:
    LagrangianModel() = default;

    double eval_tabulated(double x, double u, double v) const;

    HamiltonianPtr model_;
    bool analytic_ = true;
    bool dual_ = false;

    // tabulated data: rows per (ix, iu); infeasible[ix*nv + iv] masks entries
    // whose argmax hit the p boundary for any sampled u
    std::vector<double> v_grid_;
    std::vector<double> x_axis_;
    std::vector<double> u_axis_;
    std::vector<double> values_;  // ((ix * nu) + iu) * nv + iv
    std::vector<unsigned char> infeasible_;
};

}  // namespace chjb
