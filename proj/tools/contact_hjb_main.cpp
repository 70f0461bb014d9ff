// contact-hjb: config-driven driver for the periodic Hamilton-Jacobi toolkit.
//
//   contact-hjb <command> --config <path> [--out <dir>]
//
// Commands: evolve, fixpoint, weakkam, compare, legendre, oracle-check,
// existence-scan. Outputs are CSV grid functions and JSON manifests;
// diagnostics go to stderr as JSON lines. CONTACT_HJB_THREADS caps kernel
// parallelism.

#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "chjb/commands.hpp"
#include "chjb/errors.hpp"

namespace {

void print_error_line(const std::string& type, const std::string& message) {
    nlohmann::ordered_json j;
    j["error"] = type;
    j["message"] = message;
    std::cerr << j.dump() << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical toolkit for contact Hamilton-Jacobi equations on periodic domains"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    const char* names[] = {"evolve",   "fixpoint",     "weakkam",       "compare",
                           "legendre", "oracle-check", "existence-scan"};
    for (const char* name : names) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "config file path")->required();
        sub->add_option("--out", out_dir, "output directory");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        const std::string name = app.get_subcommands().front()->get_name();
        chjb::RunConfig config = chjb::RunConfig::parse_file(config_path);
        return chjb::run_command(config, chjb::parse_command(name), out_dir);
    } catch (const chjb::Error& e) {
        print_error_line(e.kind_name(), e.what());
        return e.exit_code();
    } catch (const std::exception& e) {
        print_error_line("internal", e.what());
        return 1;
    }
}
