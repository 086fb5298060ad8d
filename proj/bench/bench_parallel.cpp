// Serial reference vs OpenMP kernels.
#include "kmd/deriv.hpp"
#include "kmd/liealg.hpp"
#include "kmd/qlinalg.hpp"

#include <benchmark/benchmark.h>

#include <omp.h>
#include <random>

using namespace kmd;

namespace {

QMatrix random_matrix(std::size_t n, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> d(-9, 9);
    QMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            m(i, j) = d(rng);
    return m;
}

void BM_Bareiss(benchmark::State& st, Exec ex)
{
    const QMatrix m = random_matrix(static_cast<std::size_t>(st.range(0)), 7);
    for (auto _ : st)
        benchmark::DoNotOptimize(bareiss(m, ex).rank());
    st.SetLabel(ex == Exec::Serial ? "serial" : "omp x" + std::to_string(omp_get_max_threads()));
}

const GradedAlgebra& moody_algebra()
{
    static const GradedAlgebra alg = build_nilradical(Gcm::validate({{2, -3}, {-3, 2}}), 13);
    return alg;
}

void BM_MoodySweep(benchmark::State& st)
{
    const GradedAlgebra& alg = moody_algebra();
    const int jobs = static_cast<int>(st.range(0));
    for (auto _ : st)
        benchmark::DoNotOptimize(verify_moody(alg, 8, jobs).pass);
}

}  // namespace

BENCHMARK_CAPTURE(BM_Bareiss, serial, Exec::Serial)->Arg(48)->Arg(96)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Bareiss, parallel, Exec::Parallel)->Arg(48)->Arg(96)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MoodySweep)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
