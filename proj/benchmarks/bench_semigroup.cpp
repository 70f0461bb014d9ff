#include <benchmark/benchmark.h>

#include "chjb/oracle.hpp"
#include "chjb/semigroup.hpp"

using namespace chjb;

namespace {

LagrangianModel contact_circle_lagrangian() {
    return LagrangianModel::analytic(HamiltonianModel::quadratic_contact(
        Expression::parse("-3*u", "u"), Expression::parse("0.5*x^2", "x"), 1.0, 3.0, 8.0));
}

SchemeParams params(int m_v) {
    SchemeParams sp;
    sp.dt = 0.0025;
    sp.v_max = 4.0;
    sp.velocity_count = m_v;
    return sp;
}

void SlStep(benchmark::State& state) {
    auto grid = PeriodicGrid::circle(2.0, state.range(0));
    auto L = contact_circle_lagrangian();
    auto sp = params(static_cast<int>(state.range(1)));
    auto [u1, u2] = oracle::stationary_branches(3.0, grid);
    for (auto _ : state) {
        auto step = sl_step(u2, u2, L, sp);
        benchmark::DoNotOptimize(step.value.values().data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(1));
}
BENCHMARK(SlStep)->Args({400, 161})->Args({400, 641})->Args({1600, 161});

void PicardUnitChunk(benchmark::State& state) {
    auto grid = PeriodicGrid::circle(2.0, 400);
    auto L = contact_circle_lagrangian();
    auto sp = params(static_cast<int>(state.range(0)));
    auto [u1, u2] = oracle::stationary_branches(3.0, grid);
    for (auto _ : state) {
        auto result = picard(u2, 0.25, L, sp);
        benchmark::DoNotOptimize(result.diagnostics.iterations);
    }
}
BENCHMARK(PicardUnitChunk)->Arg(161)->Arg(641)->Unit(benchmark::kMillisecond);

void LegendreTableRow(benchmark::State& state) {
    auto H = HamiltonianModel::quadratic_contact(Expression::parse("-3*u", "u"),
                                                 Expression::parse("0.5*x^2", "x"), 1.0, 3.0, 8.0);
    std::vector<double> p_grid(static_cast<std::size_t>(state.range(0)));
    for (std::size_t i = 0; i < p_grid.size(); ++i)
        p_grid[i] = -8.0 + 16.0 * static_cast<double>(i) / (static_cast<double>(p_grid.size()) - 1);
    std::vector<double> v_grid(161);
    for (std::size_t j = 0; j < v_grid.size(); ++j)
        v_grid[j] = -4.0 + 8.0 * static_cast<double>(j) / 160.0;
    for (auto _ : state) {
        auto row = legendre_transform(*H, 0.3, 0.5, v_grid, p_grid);
        benchmark::DoNotOptimize(row.values.data());
    }
}
BENCHMARK(LegendreTableRow)->Arg(257)->Arg(1025);

}  // namespace

BENCHMARK_MAIN();
