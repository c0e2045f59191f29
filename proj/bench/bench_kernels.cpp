// Kernel benchmarks: every data-parallel kernel against its serial
// reference. Run with --benchmark_filter=... to narrow.

#include <benchmark/benchmark.h>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "lvlsf/datagen.hpp"
#include "lvlsf/hamming_index.hpp"
#include "lvlsf/inner_code.hpp"
#include "lvlsf/oracle.hpp"
#include "lvlsf/similarity_index.hpp"
#include "lvlsf/turan.hpp"

using namespace lvlsf;

namespace {

std::vector<BitVector> scan_points() {
    static auto inst = gen_hamming_instance(1 << 15, 256, 16, 1, Seed(1));
    return inst.data.points;
}

void bm_linear_scan_serial(benchmark::State& state) {
    auto pts = scan_points();
    BitVector q = pts[17];
    for (auto _ : state) {
        auto ids = oracle::linear_scan_hamming_serial(pts, q, 32);
        benchmark::DoNotOptimize(ids);
    }
}
BENCHMARK(bm_linear_scan_serial)->Unit(benchmark::kMicrosecond);

void bm_linear_scan_omp(benchmark::State& state) {
    auto pts = scan_points();
    BitVector q = pts[17];
    for (auto _ : state) {
        auto ids = oracle::linear_scan_hamming(pts, q, 32);
        benchmark::DoNotOptimize(ids);
    }
}
BENCHMARK(bm_linear_scan_omp)->Unit(benchmark::kMicrosecond);

void bm_verify_inner_serial(benchmark::State& state) {
    auto code = build_inner_code_radius(14, 2, 3, Seed(3), InnerCodeMode::sampled);
    for (auto _ : state)
        benchmark::DoNotOptimize(verify_inner_code_serial(code, 14, 2, 3));
}
BENCHMARK(bm_verify_inner_serial)->Unit(benchmark::kMillisecond);

void bm_verify_inner_omp(benchmark::State& state) {
    auto code = build_inner_code_radius(14, 2, 3, Seed(3), InnerCodeMode::sampled);
    for (auto _ : state)
        benchmark::DoNotOptimize(verify_inner_code(code, 14, 2, 3));
}
BENCHMARK(bm_verify_inner_omp)->Unit(benchmark::kMillisecond);

void bm_verify_turan_serial(benchmark::State& state) {
    auto sys = build_turan(16, 8, 3, Seed(4));
    for (auto _ : state)
        benchmark::DoNotOptimize(verify_system_serial(sys, 16, 8));
}
BENCHMARK(bm_verify_turan_serial)->Unit(benchmark::kMillisecond);

void bm_verify_turan_omp(benchmark::State& state) {
    auto sys = build_turan(16, 8, 3, Seed(4));
    for (auto _ : state)
        benchmark::DoNotOptimize(verify_system(sys, 16, 8));
}
BENCHMARK(bm_verify_turan_omp)->Unit(benchmark::kMillisecond);

void bm_build_hamming(benchmark::State& state) {
#ifdef _OPENMP
    omp_set_num_threads(int(state.range(0)));
#endif
    auto inst = gen_hamming_instance(1 << 13, 256, 16, 1, Seed(5));
    auto params = plan_hamming_params(1 << 13, 256, 16, 2.0, HammingPlanMode::corollary);
    for (auto _ : state) {
        auto idx = build_hamming_index(inst.data.points, params, Seed(6));
        benchmark::DoNotOptimize(idx.bucket_entries());
    }
#ifdef _OPENMP
    omp_set_num_threads(omp_get_num_procs());
#endif
}
BENCHMARK(bm_build_hamming)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void bm_build_similarity(benchmark::State& state) {
#ifdef _OPENMP
    omp_set_num_threads(int(state.range(0)));
#endif
    auto inst = gen_sets_instance(1 << 11, 1024, 64, 0.5, 1, Seed(7));
    for (auto _ : state) {
        auto idx = build_similarity_index(inst.data.points, 0.5, 0.25, Seed(8));
        benchmark::DoNotOptimize(idx.bucket_entries());
    }
#ifdef _OPENMP
    omp_set_num_threads(omp_get_num_procs());
#endif
}
BENCHMARK(bm_build_similarity)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void bm_query_hamming(benchmark::State& state) {
    auto inst = gen_hamming_instance(1 << 13, 256, 16, 512, Seed(9));
    auto params = plan_hamming_params(1 << 13, 256, 16, 2.0, HammingPlanMode::corollary);
    auto idx = build_hamming_index(inst.data.points, params, Seed(10));
    size_t qi = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(idx.query(inst.queries.points[qi]));
        qi = (qi + 1) % inst.queries.points.size();
    }
}
BENCHMARK(bm_query_hamming)->Unit(benchmark::kMicrosecond);

} // namespace

BENCHMARK_MAIN();
