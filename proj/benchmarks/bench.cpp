#include "qcat/classify.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace qcat;

Matrix reference_scattering() {
    const double r = 0.70710678118654752;
    Matrix s = Matrix::Zero(4, 4);
    s(0, 0) = 1.0;
    s(1, 1) = r;
    s(1, 2) = Complex(0.0, r);
    s(2, 1) = Complex(0.0, r);
    s(2, 2) = r;
    s(3, 3) = Complex(0.0, 1.0);
    return s;
}

Circuit reference_circuit(int n) {
    const Matrix s = reference_scattering();
    return Circuit{Lattice(n, CellStructure({2, 2})),
                   {AdvectionLayer{{0, -1}}, ScatteringLayer{s},
                    AdvectionLayer{{1, 0}}, ScatteringLayer{s}}};
}

void BM_apply_advection(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Lattice lat(n, CellStructure({2, 2}));
    StateVector sv = all_quiescent_state(lat);
    const AdvectionLayer layer{{1, -1}};
    for (auto _ : state) benchmark::DoNotOptimize(apply_advection(sv, layer));
}
BENCHMARK(BM_apply_advection)->Arg(6)->Arg(8);

void BM_apply_scattering(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Lattice lat(n, CellStructure({2, 2}));
    StateVector sv = all_quiescent_state(lat);
    const ScatteringLayer layer{reference_scattering()};
    for (auto _ : state) benchmark::DoNotOptimize(apply_scattering(sv, layer));
}
BENCHMARK(BM_apply_scattering)->Arg(6)->Arg(8);

void BM_dense_evolution(benchmark::State& state) {
    Circuit c = reference_circuit(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(build_dense_evolution(c));
}
BENCHMARK(BM_dense_evolution)->Arg(4)->Arg(5);

void BM_conjugate_unit(benchmark::State& state) {
    Circuit c = reference_circuit(static_cast<int>(state.range(0)));
    Matrix e = Matrix::Zero(4, 4);
    e(1, 2) = 1.0;
    const LocalOperator op{Window({Site{2, 1}, Site{2, 2}}), e};
    for (auto _ : state)
        benchmark::DoNotOptimize(conjugate_through(op, c, Direction::Forward));
}
BENCHMARK(BM_conjugate_unit)->Arg(8)->Arg(16);

void BM_minimal_neighborhood(benchmark::State& state) {
    Circuit c = reference_circuit(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(minimal_neighborhood(c));
}
BENCHMARK(BM_minimal_neighborhood)->Arg(8);

void BM_intersection_algebra(benchmark::State& state) {
    GroupedCircuit gc = regroup(reference_circuit(10), CellConstruction{{0, 0}, 2});
    for (auto _ : state) benchmark::DoNotOptimize(intersection_algebra(gc, 0));
}
BENCHMARK(BM_intersection_algebra);

void BM_qlga_criterion_pair_grouping(benchmark::State& state) {
    Circuit c = reference_circuit(10);
    const CellConstruction cons{{0, 0}, 2};
    for (auto _ : state) benchmark::DoNotOptimize(qlga_criterion(c, cons));
}
BENCHMARK(BM_qlga_criterion_pair_grouping);

}  // namespace

BENCHMARK_MAIN();
