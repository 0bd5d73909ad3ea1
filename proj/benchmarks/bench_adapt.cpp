#include <benchmark/benchmark.h>

#include "symport/mesh_gen.hpp"
#include "symport/symmetry_adapt.hpp"

using namespace symport;

static void BM_MappingMatrices(benchmark::State& state)
{
    EdgeBasisSet basis = build_edge_basis(make_rim_mesh(1.0, static_cast<int>(state.range(0))).mesh);
    PointGroup group = PointGroup::build("C2v");
    for (auto _ : state) {
        MappingMatrices maps = build_mapping_matrices(basis, group);
        benchmark::DoNotOptimize(maps.maps.data());
    }
    state.counters["N_u"] = static_cast<double>(basis.n_unknowns());
}
BENCHMARK(BM_MappingMatrices)->Arg(1)->Arg(3)->Unit(benchmark::kMillisecond);

static void BM_AdaptedBasis(benchmark::State& state)
{
    EdgeBasisSet basis = build_edge_basis(make_rim_mesh(1.0, static_cast<int>(state.range(0))).mesh);
    PointGroup group = PointGroup::build("C2v");
    MappingMatrices maps = build_mapping_matrices(basis, group);
    SymmetryAdapter adapter = SymmetryAdapter::make(basis, group, maps);
    for (auto _ : state) {
        AdaptedBasis gamma = adapter.build_adapted_basis();
        benchmark::DoNotOptimize(gamma.total_dim());
    }
    state.counters["N_u"] = static_cast<double>(basis.n_unknowns());
}
BENCHMARK(BM_AdaptedBasis)->Arg(1)->Arg(3)->Unit(benchmark::kMillisecond);
