#include "derlab/stablemodel.hpp"
#include "derlab/verify.hpp"

#include <benchmark/benchmark.h>

using namespace derlab;

static void BM_rank(benchmark::State& state) {
    Rng rng(7);
    GenBounds b;
    int n = (int)state.range(0);
    QMatrix m(n, n, Field{});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m.at(i, j) = Scalar(rng.range(-3, 3));
    for (auto _ : state) benchmark::DoNotOptimize(m.rank());
}
BENCHMARK(BM_rank)->Arg(16)->Arg(64);

static void BM_kan_model_a(benchmark::State& state) {
    Rng rng(11);
    GenBounds b;
    PosetMap u = gen_monotone_map(rng, b);
    FunctorData uf = FunctorData::from_poset_map(u);
    VecDiagram x = gen_vec_diagram(rng, uf.src, b);
    for (auto _ : state) benchmark::DoNotOptimize(kan(uf, x, KanSide::left));
}
BENCHMARK(BM_kan_model_a);

static void BM_hocolim_octa(benchmark::State& state) {
    Rng rng(13);
    GenBounds b;
    b.max_dim = 2;
    NamedShape k = named_shape("octa_K");
    ChainDiagram x = gen_chain_diagram(rng, k.poset, b);
    for (auto _ : state) benchmark::DoNotOptimize(hocolim_point(x));
}
BENCHMARK(BM_hocolim_octa);

static void BM_triangle(benchmark::State& state) {
    Rng rng(17);
    GenBounds b;
    ChainMap f = gen_chain_map(rng, b);
    for (auto _ : state) benchmark::DoNotOptimize(triangle(f));
}
BENCHMARK(BM_triangle);

BENCHMARK_MAIN();
