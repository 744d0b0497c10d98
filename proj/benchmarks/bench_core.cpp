#include <benchmark/benchmark.h>

#include <bgx/obsgen.hpp>
#include <bgx/orbits.hpp>
#include <bgx/qseries.hpp>
#include <bgx/shortvec.hpp>
#include <bgx/solve.hpp>

using namespace bgx;

namespace {

Lattice l0_2u2a1() { return two_u_plus(direct_sum(root_a1(), root_a1())); }

void BM_short_vectors_rank3(benchmark::State& state) {
    Lattice k = Lattice::make(
        MatZ{{Int(2), Int(1), Int(0)}, {Int(1), Int(4), Int(1)}, {Int(0), Int(1), Int(6)}});
    Rat bound(state.range(0));
    for (auto _ : state) {
        auto v = short_vectors(k, bound);
        benchmark::DoNotOptimize(v.size());
    }
}
BENCHMARK(BM_short_vectors_rank3)->Arg(20)->Arg(60)->Arg(120);

void BM_theta_series(benchmark::State& state) {
    Lattice k = direct_sum(direct_sum(root_a1(), root_a1()), rank_one(Int(-4)));
    Rat trunc(state.range(0));
    for (auto _ : state) {
        GradedQSeries t = theta_series(k, trunc, 1);
        benchmark::DoNotOptimize(t.coeffs().size());
    }
}
BENCHMARK(BM_theta_series)->Arg(6)->Arg(12)->Arg(20);

void BM_theta_series_parallel(benchmark::State& state) {
    Lattice k = direct_sum(direct_sum(root_a1(), root_a1()), rank_one(Int(-4)));
    for (auto _ : state) {
        GradedQSeries t = theta_series(k, Rat(16), 2);
        benchmark::DoNotOptimize(t.coeffs().size());
    }
}
BENCHMARK(BM_theta_series_parallel);

void BM_quasi_pullback(benchmark::State& state) {
    Lattice l0 = l0_2u2a1();
    auto disc = std::make_shared<DiscriminantForm>(l0);
    AdmissibleCoords coords = admissible_coords(disc, Rat(state.range(0)));
    VecQ x(coords.dim(), Rat(1));
    ModularInput f = coords.to_input(x);
    VecZ delta{Int(1), Int(-1), Int(0), Int(0), Int(0), Int(0)};
    Sublattice lp = orth_complement(l0, delta);
    for (auto _ : state) {
        ModularInput out = quasi_pullback(f, lp.basis, Rat(state.range(0)) + 2);
        benchmark::DoNotOptimize(out.pp().size());
    }
}
BENCHMARK(BM_quasi_pullback)->Arg(1)->Arg(2)->Arg(4);

void BM_classify_corank1(benchmark::State& state) {
    Lattice l0 = l0_2u2a1();
    for (auto _ : state) {
        auto classes = classify_corank1(l0, GroupKind::Hat, Rat(state.range(0)));
        benchmark::DoNotOptimize(classes.size());
    }
}
BENCHMARK(BM_classify_corank1)->Arg(1)->Arg(2);

void BM_smith_form(benchmark::State& state) {
    Lattice l0 = two_u_plus(direct_sum(direct_sum(root_a1(), root_a1()), rank_one(Int(-6))));
    for (auto _ : state) {
        SmithForm s = smith_form(l0.gram());
        benchmark::DoNotOptimize(s.rank);
    }
}
BENCHMARK(BM_smith_form);

}  // namespace

BENCHMARK_MAIN();
