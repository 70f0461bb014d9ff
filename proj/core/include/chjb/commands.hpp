#pragma once

#include <string>

#include "chjb/config.hpp"

namespace chjb {

enum class Command {
    Evolve,
    Fixpoint,
    WeakKam,
    Compare,
    Legendre,
    OracleCheck,
    ExistenceScan,
};

Command parse_command(const std::string& name);

/// Runs one command against a parsed config, writing artifacts into out_dir.
/// Returns a process exit status (0 on success; oracle-check returns 1 on any
/// mismatch). Hard failures surface as chjb::Error.
int run_command(const RunConfig& config, Command command, const std::string& out_dir);

}  // namespace chjb
