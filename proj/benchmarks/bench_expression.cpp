#include <benchmark/benchmark.h>

#include "chjb/expression.hpp"

using namespace chjb;

namespace {

void ExpressionEval(benchmark::State& state) {
    auto expr = Expression::parse("0.5*x^2 + 0.25*cos(3.14159*x) - abs(x)/3", "x");
    double x = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(expr.eval(x));
        x += 1e-6;
    }
}
BENCHMARK(ExpressionEval);

void ExpressionParse(benchmark::State& state) {
    for (auto _ : state) {
        auto expr = Expression::parse("min(0.5*x^2, 1 - abs(x)) + exp(-x^2)", "x");
        benchmark::DoNotOptimize(&expr);
    }
}
BENCHMARK(ExpressionParse);

}  // namespace
