#pragma once

#include <string>

#include <json.hpp>

#include "chjb/grid.hpp"
#include "chjb/semigroup.hpp"

namespace chjb {

/// Formats a double with 17 significant digits (round-trip exact).
std::string format_double(double v);

/// CSV with header x[,y],value, one row per node, 17 significant digits.
void write_grid_function_csv(const std::string& path, const GridFunction& f);
GridFunction read_grid_function_csv(const std::string& path, GridPtr grid);

nlohmann::ordered_json grid_to_json(const PeriodicGrid& grid);

/// Writes snapshot_NNNNNN.csv files plus manifest.json
/// {dt, n_steps, grid, picard_iterations, increments[]} into a directory.
void export_space_time_field(const std::string& directory, const SpaceTimeField& field,
                             const PicardDiagnostics& diagnostics);

void write_json(const std::string& path, const nlohmann::ordered_json& j);

void ensure_directory(const std::string& path);

}  // namespace chjb
