#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "chjb/errors.hpp"
#include "chjb/io.hpp"

using namespace chjb;

TEST_SUITE("io") {

TEST_CASE("grid function CSV round-trips exactly") {
    auto grid = PeriodicGrid::circle(2.0, 32);
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    std::vector<double> vals(32);
    for (double& v : vals) v = u(rng);
    GridFunction f(grid, vals);
    const char* path = "roundtrip.csv";
    write_grid_function_csv(path, f);
    GridFunction g = read_grid_function_csv(path, grid);
    CHECK(f.values() == g.values());  // 17 significant digits reproduce doubles
    std::remove(path);
    CHECK_THROWS_AS(read_grid_function_csv("no_such.csv", grid), Error);
}

TEST_CASE("format_double keeps 17 significant digits") {
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(1.0) == "1");
    double third = 1.0 / 3.0;
    CHECK(std::stod(format_double(third)) == third);
}

TEST_CASE("field export writes snapshots and a manifest") {
    auto grid = PeriodicGrid::circle(2.0, 8);
    SpaceTimeField field(grid, 0.1);
    field.push_snapshot(GridFunction(grid, 1.0));
    field.push_snapshot(GridFunction(grid, 2.0));
    PicardDiagnostics diag;
    diag.iterations = 3;
    diag.converged = true;
    diag.increments = {0.5, 0.01, 1e-12};
    export_space_time_field("export_test", field, diag);
    CHECK(std::filesystem::exists("export_test/snapshot_000000.csv"));
    CHECK(std::filesystem::exists("export_test/snapshot_000001.csv"));
    auto back = read_grid_function_csv("export_test/snapshot_000001.csv", grid);
    CHECK(back[0] == 2.0);
    std::ifstream in("export_test/manifest.json");
    nlohmann::json manifest = nlohmann::json::parse(in);
    CHECK(manifest["n_steps"] == 1);
    CHECK(manifest["picard_iterations"] == 3);
    CHECK(manifest["increments"].size() == 3);
    std::filesystem::remove_all("export_test");
}

}  // TEST_SUITE
