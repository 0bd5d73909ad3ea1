#include <benchmark/benchmark.h>

#include "symport/mesh_gen.hpp"
#include "symport/optimizer.hpp"

using namespace symport;

namespace {

struct ScanBench {
    RimMesh rim = make_rim_mesh(1.0, 2);
    EdgeBasisSet basis = build_edge_basis(rim.mesh);
    PointGroup group = PointGroup::build("C2v");
    MappingMatrices maps = build_mapping_matrices(basis, group);
    SymmetryAdapter adapter = SymmetryAdapter::make(basis, group, maps);

    ScanSpec spec(int n_xi)
    {
        ScanSpec s;
        s.basis = &basis;
        s.adapter = &adapter;
        for (const PortAnchor& a : rim.ladder) s.candidates.push_back({a.label, resolve_port_edge(basis, a.point)});
        s.n_xi = n_xi;
        s.grid = FrequencyGrid::single(10.19, rim.mesh.circumsphere_radius());
        return s;
    }
};

}  // namespace

static void BM_SingleFrequencyScan(benchmark::State& state)
{
    ScanBench b;
    ScanSpec spec = b.spec(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        ScanResult r = scan(spec);
        benchmark::DoNotOptimize(r.best().t_rms);
    }
    state.counters["N_u"] = static_cast<double>(b.basis.n_unknowns());
    state.counters["combos"] = static_cast<double>(scan(spec).entries.size());
}
BENCHMARK(BM_SingleFrequencyScan)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
