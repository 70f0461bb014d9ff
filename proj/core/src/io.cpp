#include "chjb/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "chjb/errors.hpp"

namespace chjb {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void ensure_directory(const std::string& path) {
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec) throw Error(ErrorKind::Io, "cannot create directory " + path + ": " + ec.message());
}

void write_grid_function_csv(const std::string& path, const GridFunction& f) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
    const PeriodicGrid& g = f.grid();
    out << (g.dimension() == 1 ? "x,value\n" : "x,y,value\n");
    for (int i = 0; i < g.node_count(); ++i) {
        const Vec2 p = g.node(i);
        out << format_double(p[0]);
        if (g.dimension() == 2) out << ',' << format_double(p[1]);
        out << ',' << format_double(f[i]) << '\n';
    }
    if (!out) throw Error(ErrorKind::Io, "write failed for " + path);
}

GridFunction read_grid_function_csv(const std::string& path, GridPtr grid) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorKind::Io, "empty CSV " + path);
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(grid->node_count()));
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::size_t pos = line.rfind(',');
        if (pos == std::string::npos) throw Error(ErrorKind::Io, "bad CSV row in " + path);
        values.push_back(std::stod(line.substr(pos + 1)));
    }
    return GridFunction(std::move(grid), std::move(values));
}

nlohmann::ordered_json grid_to_json(const PeriodicGrid& grid) {
    nlohmann::ordered_json j;
    j["dimension"] = grid.dimension();
    j["length"] = nlohmann::json::array();
    j["n"] = nlohmann::json::array();
    for (int a = 0; a < grid.dimension(); ++a) {
        j["length"].push_back(grid.length(a));
        j["n"].push_back(grid.axis_nodes(a));
    }
    return j;
}

void export_space_time_field(const std::string& directory, const SpaceTimeField& field,
                             const PicardDiagnostics& diagnostics) {
    ensure_directory(directory);
    for (int n = 0; n <= field.steps(); ++n) {
        char name[32];
        std::snprintf(name, sizeof name, "snapshot_%06d.csv", n);
        write_grid_function_csv(directory + "/" + name, field.snapshot(n));
    }
    nlohmann::ordered_json manifest;
    manifest["dt"] = field.dt();
    manifest["n_steps"] = field.steps();
    manifest["grid"] = grid_to_json(field.grid());
    manifest["picard_iterations"] = diagnostics.iterations;
    manifest["increments"] = diagnostics.increments;
    manifest["picard_converged"] = diagnostics.converged;
    manifest["argmin_at_bound"] = diagnostics.argmin_at_bound;
    write_json(directory + "/manifest.json", manifest);
}

void write_json(const std::string& path, const nlohmann::ordered_json& j) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
    out << j.dump(2) << '\n';
    if (!out) throw Error(ErrorKind::Io, "write failed for " + path);
}

}  // namespace chjb
