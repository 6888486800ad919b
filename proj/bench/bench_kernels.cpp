#include <benchmark/benchmark.h>

#include "infocoh/cohomology.hpp"

using namespace infocoh;

namespace {

std::shared_ptr<const GridContext> three_bits(int n) {
    std::vector<std::pair<std::string, std::size_t>> v = {{"X", 2}, {"Y", 2}, {"Z", 2}};
    auto s = build_simplicial_structure(v, {{"X"}, {"Y"}, {"Z"}, {"X", "Y"}, {"X", "Z"}, {"Y", "Z"}, {"X", "Y", "Z"}});
    return std::make_shared<const GridContext>(s, ProbabilityFunctor::full(s), n);
}

Exec mode(const benchmark::State& st) { return st.range(1) ? Exec::parallel : Exec::serial; }

void BM_Coboundary(benchmark::State& st) {
    auto ctx = three_bits(static_cast<int>(st.range(0)));
    auto f = random_cochain<double>(ctx, AlphaParam(2.0), 1, 3);
    for (auto _ : st) benchmark::DoNotOptimize(coboundary(f, mode(st)));
}

void BM_EntropyResidualExact(benchmark::State& st) {
    auto ctx = three_bits(static_cast<int>(st.range(0)));
    auto s = entropy_cochain<ExactReal>(ctx, AlphaParam(1.0));
    for (auto _ : st) benchmark::DoNotOptimize(cocycle_residual(s, mode(st)));
}

void BM_AssembleZ1(benchmark::State& st) {
    auto ctx = three_bits(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(assemble_z1_system(*ctx, AlphaParam(2.0), mode(st)));
}

void BM_LimitSections(benchmark::State& st) {
    auto ctx = three_bits(2);
    for (auto _ : st) benchmark::DoNotOptimize(limit_sections(ctx->structure(), mode(st)));
}

void BM_BareissRank(benchmark::State& st) {
    auto ctx = three_bits(static_cast<int>(st.range(0)));
    auto sys = assemble_z1_system(*ctx, AlphaParam(1.0));
    for (auto _ : st) benchmark::DoNotOptimize(bareiss_rank(sys.exact_rows, sys.unknowns.size()));
}

}  // namespace

BENCHMARK(BM_Coboundary)->ArgsProduct({{3, 5}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EntropyResidualExact)->ArgsProduct({{3, 4}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AssembleZ1)->ArgsProduct({{3, 5}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LimitSections)->ArgsProduct({{0}, {0, 1}});
BENCHMARK(BM_BareissRank)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
