#include "chjb/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "chjb/errors.hpp"

namespace chjb {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

}  // namespace

RunConfig RunConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open config " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

RunConfig RunConfig::parse(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line, section;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw Error(ErrorKind::Config,
                            "config line " + std::to_string(lineno) + ": unterminated section");
            section = trim(t.substr(1, t.size() - 2));
            if (section.empty())
                throw Error(ErrorKind::Config,
                            "config line " + std::to_string(lineno) + ": empty section name");
            cfg.sections_[section];
            continue;
        }
        std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorKind::Config,
                        "config line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (key.empty())
            throw Error(ErrorKind::Config,
                        "config line " + std::to_string(lineno) + ": empty key");
        if (section.empty())
            throw Error(ErrorKind::Config,
                        "config line " + std::to_string(lineno) + ": key outside any section");
        cfg.sections_[section][key] = value;
    }
    return cfg;
}

std::string RunConfig::serialize() const {
    std::ostringstream out;
    bool first = true;
    for (const auto& [section, entries] : sections_) {
        if (!first) out << '\n';
        first = false;
        out << '[' << section << "]\n";
        for (const auto& [key, value] : entries) out << key << " = " << value << '\n';
    }
    return out.str();
}

bool RunConfig::has(const std::string& section, const std::string& key) const {
    auto s = sections_.find(section);
    return s != sections_.end() && s->second.count(key) > 0;
}

std::string RunConfig::get_string(const std::string& section, const std::string& key) const {
    auto s = sections_.find(section);
    if (s != sections_.end()) {
        auto k = s->second.find(key);
        if (k != s->second.end()) return k->second;
    }
    throw Error(ErrorKind::Config, "missing config entry " + section + "." + key);
}

std::string RunConfig::get_string(const std::string& section, const std::string& key,
                                  const std::string& fallback) const {
    return has(section, key) ? get_string(section, key) : fallback;
}

double RunConfig::get_number(const std::string& section, const std::string& key) const {
    std::string v = get_string(section, key);
    try {
        std::size_t used = 0;
        double out = std::stod(v, &used);
        if (trim(v.substr(used)).empty()) return out;
    } catch (const std::exception&) {
    }
    throw Error(ErrorKind::Config, "config entry " + section + "." + key + " is not a number: " + v);
}

double RunConfig::get_number(const std::string& section, const std::string& key,
                             double fallback) const {
    return has(section, key) ? get_number(section, key) : fallback;
}

int RunConfig::get_int(const std::string& section, const std::string& key, int fallback) const {
    if (!has(section, key)) return fallback;
    double v = get_number(section, key);
    int i = static_cast<int>(v);
    if (static_cast<double>(i) != v)
        throw Error(ErrorKind::Config, "config entry " + section + "." + key + " must be integer");
    return i;
}

bool RunConfig::get_bool(const std::string& section, const std::string& key, bool fallback) const {
    if (!has(section, key)) return fallback;
    std::string v = get_string(section, key);
    if (v == "true") return true;
    if (v == "false") return false;
    throw Error(ErrorKind::Config, "config entry " + section + "." + key + " must be true/false");
}

void RunConfig::set(const std::string& section, const std::string& key, const std::string& value) {
    sections_[section][key] = value;
}

GridPtr RunConfig::build_grid() const {
    int dim = get_int("grid", "dimension", 1);
    if (dim == 1) {
        double length = get_number("grid", "length", 2.0);
        int n = get_int("grid", "n", 0);
        if (n == 0) throw Error(ErrorKind::Config, "grid.n is required");
        return PeriodicGrid::circle(length, n);
    }
    double lx = get_number("grid", "length_x", get_number("grid", "length", 2.0));
    double ly = get_number("grid", "length_y", get_number("grid", "length", 2.0));
    int nx = get_int("grid", "n_x", get_int("grid", "n", 0));
    int ny = get_int("grid", "n_y", get_int("grid", "n", 0));
    if (nx == 0 || ny == 0) throw Error(ErrorKind::Config, "grid.n (or n_x/n_y) is required");
    return PeriodicGrid::torus({lx, ly}, {nx, ny});
}

HamiltonianPtr RunConfig::build_model() const {
    std::string family = get_string("model", "family", "quadratic_contact");
    double lambda = get_number("model", "lambda");
    HamiltonianPtr model;
    if (family == "quadratic_contact") {
        Expression g = Expression::parse(get_string("model", "g", "0"), "u");
        Expression V = Expression::parse(get_string("model", "V", "0"), "x");
        double a = get_number("model", "a", 1.0);
        double p_max = get_number("model", "p_max", 8.0);
        int dim = get_int("grid", "dimension", 1);
        model = HamiltonianModel::quadratic_contact(std::move(g), std::move(V), a, lambda, p_max,
                                                    dim);
    } else if (family == "tabulated") {
        model = HamiltonianModel::from_csv(get_string("model", "csv"), lambda);
    } else {
        throw Error(ErrorKind::Config, "unknown model family " + family);
    }
    if (get_bool("model", "validate", true)) {
        auto report = model->validate(get_int("model", "validate_samples", 9));
        if (!report.pass()) {
            std::string what = "model validation failed:";
            if (!report.lipschitz.pass) {
                what += " u-slope " + std::to_string(report.lipschitz.max_slope) +
                        " exceeds lambda " + std::to_string(report.lipschitz.declared) + ";";
            }
            if (!report.convex) what += " " + report.convexity_detail + ";";
            if (!report.coercive) what += " " + report.coercivity_detail + ";";
            throw Error(ErrorKind::Model, what);
        }
    }
    return model;
}

LagrangianModel RunConfig::build_lagrangian(HamiltonianPtr model) const {
    if (model->family() == HamiltonianFamily::QuadraticContact)
        return LagrangianModel::analytic(std::move(model));
    SchemeParams sp = scheme_params();
    return LagrangianModel::tabulate(std::move(model), sp.v_max, sp.velocity_count);
}

SchemeParams RunConfig::scheme_params() const {
    SchemeParams sp;
    sp.dt = get_number("scheme", "dt");
    sp.v_max = get_number("scheme", "v_max");
    sp.velocity_count = get_int("scheme", "m_v", 161);
    sp.picard_tol = get_number("scheme", "eps_k", -1.0);
    sp.picard_max_iterations = get_int("scheme", "k_max", 64);
    sp.horizon_cap = get_number("scheme", "horizon_cap", 64.0);
    return sp;
}

LongTimeParams RunConfig::long_time_params(const std::string& section) const {
    LongTimeParams lt;
    lt.chunk = get_number(section, "chunk", 1.0);
    lt.max_horizon = get_number(section, "max_horizon", 64.0);
    lt.tol_limit = get_number(section, "tol_limit", 1e-6);
    lt.blowup_threshold = get_number(section, "blowup_threshold", 1e6);
    lt.tail_window = get_int(section, "tail_window", 4);
    return lt;
}

ConjugateParams RunConfig::conjugate_params(const std::string& section) const {
    ConjugateParams cp;
    cp.chunk = get_number(section, "chunk", 1.0);
    cp.max_horizon = get_number(section, "max_horizon", 32.0);
    cp.tol_limit = get_number(section, "tol_limit", 1e-6);
    cp.residual_tol = get_number(section, "fixpoint_residual_tol", 0.05);
    return cp;
}

}  // namespace chjb
