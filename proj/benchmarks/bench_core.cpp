#include <benchmark/benchmark.h>

#include "dyadic/calculus.hpp"
#include "dyadic/families.hpp"
#include "dyadic/haar.hpp"
#include "dyadic/norms.hpp"
#include "dyadic/paraproducts.hpp"
#include "dyadic/shift.hpp"

using namespace dyadic;

// Arguments are (n, J).

static void BM_Analyze(benchmark::State& state) {
    const TreeParams p(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
    const StepFunction f = random_step_function(p, 1);
    for (auto _ : state) benchmark::DoNotOptimize(analyze(f));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(p.cells()));
}
BENCHMARK(BM_Analyze)->Args({1, 10})->Args({1, 16})->Args({2, 8})->Args({3, 5});

static void BM_Synthesize(benchmark::State& state) {
    const TreeParams p(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
    const HaarExpansion e = analyze(random_step_function(p, 2));
    for (auto _ : state) benchmark::DoNotOptimize(synthesize(e));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(p.cells()));
}
BENCHMARK(BM_Synthesize)->Args({1, 10})->Args({1, 16})->Args({2, 8});

static void BM_ShiftApply(benchmark::State& state) {
    const TreeParams p(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
    const LinearOperator S = shift(random_shift(p, 1, 2, 3));
    const StepFunction f = random_step_function(p, 4);
    for (auto _ : state) benchmark::DoNotOptimize(S(f));
}
BENCHMARK(BM_ShiftApply)->Args({1, 10})->Args({1, 16})->Args({2, 8});

static void BM_CommutatorApply(benchmark::State& state) {
    const TreeParams p(1, static_cast<int>(state.range(0)));
    const LinearOperator C = commutator_iter(log_symbol(p), shift(random_shift(p, 1, 2, 5)), 3);
    const StepFunction f = random_step_function(p, 6);
    for (auto _ : state) benchmark::DoNotOptimize(C(f));
}
BENCHMARK(BM_CommutatorApply)->Arg(10)->Arg(14);

static void BM_OpNormDense(benchmark::State& state) {
    const TreeParams p(1, static_cast<int>(state.range(0)));
    const LinearOperator T = pi(log_symbol(p));
    const Weight mu = power_weight(0.6, p), lambda = power_weight(-0.3, p);
    for (auto _ : state) benchmark::DoNotOptimize(opnorm_l2(T, mu, lambda).value);
}
BENCHMARK(BM_OpNormDense)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

static void BM_OpNormIterative(benchmark::State& state) {
    const TreeParams p(1, static_cast<int>(state.range(0)));
    const LinearOperator T = pi(log_symbol(p));
    const Weight mu = power_weight(0.6, p), lambda = power_weight(-0.3, p);
    L2Options opt;
    opt.force_iterative = true;
    opt.want_certificate = false;
    for (auto _ : state) benchmark::DoNotOptimize(opnorm_l2(T, mu, lambda, opt).value);
}
BENCHMARK(BM_OpNormIterative)->Arg(10)->Arg(14)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
