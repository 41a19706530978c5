#include <ewh/hgraph.hpp>
#include <ewh/ksum.hpp>
#include <ewh/solvers.hpp>

#include <benchmark/benchmark.h>

#include <string>

using namespace ewh;

namespace {

// Weights in [-20, 20] with an unreachable target, so every solver scans fully.
HPartiteInstance no_instance(const char *pattern, std::size_t n)
{
    auto p = parse_pattern_name(pattern);
    auto inst = random_instance(p, n, 20, 1);
    inst.set_target(Weight(p.size() + p.edge_count()) * 20 + 1);
    return inst;
}

template <class Solve>
void run(benchmark::State &state, const char *pattern, Solve solve)
{
    auto inst = no_instance(pattern, static_cast<std::size_t>(state.range(0)));
    std::uint64_t work = 0;
    for (auto _ : state) {
        auto r = solve(inst);
        work = r.stats.list_entries_built + r.stats.tuples_enumerated;
        benchmark::DoNotOptimize(r);
    }
    state.counters["work"] = static_cast<double>(work);
    state.SetComplexityN(state.range(0));
}

void bm_separator(benchmark::State &state, const char *pattern)
{
    run(state, pattern, [](const HPartiteInstance &inst) { return separator_solve(inst); });
}

void bm_dsep3(benchmark::State &state, const char *pattern)
{
    auto sep = best_d_separator(parse_pattern_name(pattern), 3);
    run(state, pattern, [&](const HPartiteInstance &inst) { return dsep_solve(inst, sep); });
}

void bm_brute(benchmark::State &state, const char *pattern)
{
    auto inst = no_instance(pattern, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(brute_force_ew(inst));
    state.SetComplexityN(state.range(0));
}

void bm_min_weight(benchmark::State &state, const char *pattern)
{
    auto inst = no_instance(pattern, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(min_weight_solve(inst));
    state.SetComplexityN(state.range(0));
}

void bm_ksum(benchmark::State &state, KSumSolver solver)
{
    auto inst = random_ksum(3, static_cast<std::size_t>(state.range(0)), 1'000'000, 3);
    inst.target = 3'000'001;
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_ksum(inst, solver));
    state.SetComplexityN(state.range(0));
}

} // namespace

BENCHMARK_CAPTURE(bm_separator, path_4, "path_4")->RangeMultiplier(2)->Range(4, 64)->Complexity();
BENCHMARK_CAPTURE(bm_separator, path_5, "path_5")->RangeMultiplier(2)->Range(4, 64)->Complexity();
BENCHMARK_CAPTURE(bm_separator, triangle, "triangle")->RangeMultiplier(2)->Range(4, 64)->Complexity();
BENCHMARK_CAPTURE(bm_separator, matching_3, "matching_3")->RangeMultiplier(2)->Range(4, 32)->Complexity();
BENCHMARK_CAPTURE(bm_dsep3, star_3, "star_3")->RangeMultiplier(2)->Range(4, 64)->Complexity();
BENCHMARK_CAPTURE(bm_dsep3, matching_3, "matching_3")->RangeMultiplier(2)->Range(4, 32)->Complexity();
BENCHMARK_CAPTURE(bm_brute, path_4, "path_4")->RangeMultiplier(2)->Range(4, 32)->Complexity();
BENCHMARK_CAPTURE(bm_min_weight, star_3, "star_3")->RangeMultiplier(2)->Range(4, 64)->Complexity();
BENCHMARK_CAPTURE(bm_ksum, mitm, KSumSolver::mitm)->RangeMultiplier(4)->Range(16, 1024)->Complexity();
BENCHMARK_CAPTURE(bm_ksum, brute, KSumSolver::bruteforce)->RangeMultiplier(2)->Range(16, 128)->Complexity();

BENCHMARK_MAIN();
