// Serial reference loops vs OpenMP kernels.

#include "hsd/batch.hpp"
#include "hsd/extremal.hpp"
#include "hsd/triangle_area.hpp"

#include <benchmark/benchmark.h>

namespace {

std::vector<hsd::Triangle> sample(hsd::Index p, hsd::Index q, std::size_t n) {
    hsd::Rng rng(7);
    return hsd::random_triangles(rng, p, q, 0.9, n);
}

void BM_BatchVformula(benchmark::State& state, hsd::Execution exec) {
    const auto n = static_cast<hsd::Index>(state.range(0));
    const auto tris = sample(n, n, 256);
    for (auto _ : state) benchmark::DoNotOptimize(hsd::batch_areas(tris, hsd::AreaMethod::vformula, exec));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(tris.size()));
}

void BM_BoundCheck(benchmark::State& state, hsd::Execution exec) {
    const auto tris = sample(1, 1, 4096);
    for (auto _ : state) benchmark::DoNotOptimize(hsd::bound_check(tris, exec));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(tris.size()));
}

void BM_Quadrature(benchmark::State& state, hsd::Execution exec) {
    const auto n = static_cast<hsd::Index>(state.range(0));
    const auto tri = sample(n, n, 1).front();
    hsd::QuadratureOptions opts;
    opts.execution = exec;
    for (auto _ : state) benchmark::DoNotOptimize(hsd::area_quadrature(tri.p, tri.q, tri.r, opts));
}

}  // namespace

BENCHMARK_CAPTURE(BM_BatchVformula, serial, hsd::Execution::serial)->Arg(1)->Arg(2)->Arg(3);
BENCHMARK_CAPTURE(BM_BatchVformula, parallel, hsd::Execution::parallel)->Arg(1)->Arg(2)->Arg(3);
BENCHMARK_CAPTURE(BM_BoundCheck, serial, hsd::Execution::serial);
BENCHMARK_CAPTURE(BM_BoundCheck, parallel, hsd::Execution::parallel);
BENCHMARK_CAPTURE(BM_Quadrature, serial, hsd::Execution::serial)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Quadrature, parallel, hsd::Execution::parallel)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
