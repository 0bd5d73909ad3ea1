#include <benchmark/benchmark.h>

#include <map>
#include "symport/em_operators.hpp"
#include "symport/mesh_gen.hpp"

using namespace symport;

namespace {

const EdgeBasisSet& rim_basis(int refine)
{
    static std::map<int, EdgeBasisSet> cache;
    auto it = cache.find(refine);
    if (it == cache.end()) it = cache.emplace(refine, build_edge_basis(make_rim_mesh(1.0, refine).mesh)).first;
    return it->second;
}

}  // namespace

static void BM_ReactanceAssembly(benchmark::State& state)
{
    const EdgeBasisSet& basis = rim_basis(static_cast<int>(state.range(0)));
    OperatorAssembler assembler(basis);
    for (auto _ : state) {
        OperatorMatrix x0 = assembler.reactance(10.19);
        benchmark::DoNotOptimize(x0.m.data());
    }
    state.counters["N_u"] = static_cast<double>(basis.n_unknowns());
}
BENCHMARK(BM_ReactanceAssembly)->Arg(1)->Arg(3)->Unit(benchmark::kMillisecond);

static void BM_RadiationAssembly(benchmark::State& state)
{
    const EdgeBasisSet& basis = rim_basis(static_cast<int>(state.range(0)));
    OperatorAssembler assembler(basis);
    for (auto _ : state) {
        OperatorMatrix r0 = assembler.radiation(10.19);
        benchmark::DoNotOptimize(r0.m.data());
    }
    state.counters["N_u"] = static_cast<double>(basis.n_unknowns());
}
BENCHMARK(BM_RadiationAssembly)->Arg(1)->Arg(3)->Unit(benchmark::kMillisecond);

static void BM_Factorization(benchmark::State& state)
{
    const EdgeBasisSet& basis = rim_basis(static_cast<int>(state.range(0)));
    OperatorAssembler assembler(basis);
    OperatorMatrix z = assembler.impedance(10.19);
    for (auto _ : state) {
        ImpedanceFactorization fac(z.m);
        benchmark::DoNotOptimize(fac.condition_estimate());
    }
    state.counters["N_u"] = static_cast<double>(basis.n_unknowns());
}
BENCHMARK(BM_Factorization)->Arg(1)->Arg(3)->Unit(benchmark::kMillisecond);
