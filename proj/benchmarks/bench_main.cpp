#include <benchmark/benchmark.h>

#include "opkern/ainf.hpp"
#include "opkern/bm.hpp"
#include "opkern/moduli.hpp"
#include "opkern/operad.hpp"
#include "opkern/report.hpp"

namespace {

using namespace opk;

void BM_AinfDSquared(benchmark::State& state) {
    int arity = static_cast<int>(state.range(0));
    for (auto _ : state) {
        DSquaredReport r = certify_ainf_d_squared(arity, 1);
        benchmark::DoNotOptimize(r.ok);
    }
}
BENCHMARK(BM_AinfDSquared)->Arg(4)->Arg(6)->Arg(7)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_BmDSquared(benchmark::State& state) {
    int r_top = static_cast<int>(state.range(0));
    for (auto _ : state) {
        BmReport r = certify_bm_d_squared(-2, r_top, 1);
        benchmark::DoNotOptimize(r.ok);
    }
}
BENCHMARK(BM_BmDSquared)->Arg(6)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_Graft(benchmark::State& state) {
    AInfOperad a = build_ainf(7);
    const TreePoly& big = a.d_mu(7);
    const TreePoly& small = a.d_mu(4);
    for (auto _ : state) {
        TreePoly out = graft(big, 3, small);
        benchmark::DoNotOptimize(out.terms().size());
    }
}
BENCHMARK(BM_Graft);

void BM_EndOperadBuild(benchmark::State& state) {
    int dim = static_cast<int>(state.range(0));
    std::vector<BasisElement> basis;
    for (int i = 0; i < dim; ++i) basis.push_back({"e" + std::to_string(i), i % 2});
    ChainComplex m = ChainComplex::with_zero_d(make_space(Field::prime_field(5), basis));
    for (auto _ : state) {
        EndOperad e = end_operad(m, 4);
        benchmark::DoNotOptimize(e.table->component(4).dim());
    }
}
BENCHMARK(BM_EndOperadBuild)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_EndOperadAxioms(benchmark::State& state) {
    int dim = static_cast<int>(state.range(0));
    std::vector<BasisElement> basis;
    for (int i = 0; i < dim; ++i) basis.push_back({"e" + std::to_string(i), 0});
    ChainComplex m = ChainComplex::with_zero_d(make_space(Field::prime_field(5), basis));
    EndOperad e = end_operad(m, 4);
    for (auto _ : state) {
        OperadReport r = check_operad_axioms(*e.table, 4, 1);
        benchmark::DoNotOptimize(r.ok);
    }
}
BENCHMARK(BM_EndOperadAxioms)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_Enumerate(benchmark::State& state) {
    for (auto _ : state) {
        EnumerationResult e = enumerate_points(2, 2, false, 1ull << 24, 1);
        benchmark::DoNotOptimize(e.associative_count);
    }
}
BENCHMARK(BM_Enumerate)->Unit(benchmark::kMillisecond);

void BM_EnumerateParallel(benchmark::State& state) {
    int workers = static_cast<int>(state.range(0));
    for (auto _ : state) {
        EnumerationResult e = enumerate_points(2, 3, false, 1ull << 24, workers);
        benchmark::DoNotOptimize(e.associative_count);
    }
}
BENCHMARK(BM_EnumerateParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_StasheffCheck(benchmark::State& state) {
    // dg-algebra structure on a 3-dimensional split algebra
    Field q = Field::rationals();
    SpacePtr sp = make_space(q, {{"e1", 0}, {"e2", 0}, {"e3", 0}});
    ChainComplex m = ChainComplex::with_zero_d(sp);
    PowerCache powers(sp);
    HomogMap m2(powers.power(2), sp, 0);
    for (int i = 0; i < 3; ++i) m2.add(i, i * 3 + i, Scalar::of(q, 1));
    AInfStructure s{m, {}};
    s.ops.emplace(2, m2);
    for (int n = 3; n <= 5; ++n) s.ops.emplace(n, HomogMap::zero(powers.power(n), sp, n - 2));
    for (auto _ : state) {
        StasheffReport r = check_stasheff(s, 5, 1);
        benchmark::DoNotOptimize(r.ok);
    }
}
BENCHMARK(BM_StasheffCheck)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
