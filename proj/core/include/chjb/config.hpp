#pragma once

#include <map>
#include <optional>
#include <string>

#include "chjb/grid.hpp"
#include "chjb/model.hpp"
#include "chjb/semigroup.hpp"
#include "chjb/weakkam.hpp"

namespace chjb {

/// Flat sectioned key-value configuration.
///
/// Grammar (one entry per line):
///   [section]          opens a section
///   key = value        value runs to end of line, trimmed; strings are bare
///   # comment          full-line comments; blank lines ignored
///
/// Numbers parse as decimal floating point, booleans as true/false.
class RunConfig {
  public:
    static RunConfig parse_file(const std::string& path);
    static RunConfig parse(const std::string& text);

    /// Canonical text form; parsing it again yields an equal config.
    std::string serialize() const;

    bool operator==(const RunConfig& other) const { return sections_ == other.sections_; }

    bool has(const std::string& section, const std::string& key) const;
    std::string get_string(const std::string& section, const std::string& key) const;
    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) const;
    double get_number(const std::string& section, const std::string& key) const;
    double get_number(const std::string& section, const std::string& key, double fallback) const;
    int get_int(const std::string& section, const std::string& key, int fallback) const;
    bool get_bool(const std::string& section, const std::string& key, bool fallback) const;

    void set(const std::string& section, const std::string& key, const std::string& value);

    // assembled objects
    GridPtr build_grid() const;
    HamiltonianPtr build_model() const;
    LagrangianModel build_lagrangian(HamiltonianPtr model) const;
    SchemeParams scheme_params() const;

    LongTimeParams long_time_params(const std::string& section) const;
    ConjugateParams conjugate_params(const std::string& section) const;

    const std::map<std::string, std::map<std::string, std::string>>& sections() const {
        return sections_;
    }

  private:
    std::map<std::string, std::map<std::string, std::string>> sections_;
};

}  // namespace chjb
