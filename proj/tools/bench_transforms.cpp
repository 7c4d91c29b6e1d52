// Benchmark of the data-parallel kernels: trig analysis/synthesis and the
// direct O(N^2) convolution, serial reference vs OpenMP path. Both paths
// compute each output entry with the same serial inner loop, so the results
// must agree bitwise; the benchmark verifies that while timing.

#include <chrono>
#include <functional>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "adlab/grid.hpp"
#include "adlab/kernels.hpp"

using namespace adlab;
using clock_type = std::chrono::steady_clock;

namespace {

double time_of(int reps, const std::function<void()>& fn) {
    fn();    // warm up
    const auto t0 = clock_type::now();
    for (int r = 0; r < reps; ++r) fn();
    return std::chrono::duration<double>(clock_type::now() - t0).count() / reps;
}

std::vector<double> random_field(const TorusGrid& g, std::mt19937& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> u(g.N);
    for (auto& v : u) v = dist(rng);
    return u;
}

bool identical(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return false;
    return true;
}

}    // namespace

int main(int argc, char** argv) {
    int nthreads = 0;
#ifdef _OPENMP
    nthreads = omp_get_max_threads();
#endif
    for (int i = 1; i < argc - 1; ++i)
        if (std::string(argv[i]) == "--threads") nthreads = std::atoi(argv[i + 1]);
    if (nthreads < 1) nthreads = 1;

    std::mt19937 rng(12345);
    std::printf("%-22s %8s %12s %12s %9s %8s\n", "kernel", "N", "serial [us]", "parallel [us]",
                "speedup", "match");

    for (int N : {256, 1024, 4096}) {
        const TorusGrid g(2.0 * M_PI, N);
        const int M = N / 2 - 1;
        const TrigTransform t(g, M);
        const std::vector<double> u = random_field(g, rng);
        const int reps = N <= 1024 ? 200 : 20;

        set_threads(1);
        TrigSpectrum s_serial = t.analyze(u);
        const double ta_serial = time_of(reps, [&] { s_serial = t.analyze(u); });
        std::vector<double> y_serial = t.synthesize(s_serial);
        const double ts_serial = time_of(reps, [&] { y_serial = t.synthesize(s_serial); });

        set_threads(nthreads);
        TrigSpectrum s_par = t.analyze(u);
        const double ta_par = time_of(reps, [&] { s_par = t.analyze(u); });
        std::vector<double> y_par = t.synthesize(s_par);
        const double ts_par = time_of(reps, [&] { y_par = t.synthesize(s_par); });

        const bool ok = identical(s_serial.a, s_par.a) && identical(s_serial.b, s_par.b) &&
                        identical(y_serial, y_par);
        std::printf("%-22s %8d %12.2f %12.2f %8.2fx %8s\n", "trig analyze", N, ta_serial * 1e6,
                    ta_par * 1e6, ta_serial / ta_par, ok ? "yes" : "NO");
        std::printf("%-22s %8d %12.2f %12.2f %8.2fx %8s\n", "trig synthesize", N, ts_serial * 1e6,
                    ts_par * 1e6, ts_serial / ts_par, ok ? "yes" : "NO");

        if (N <= 4096) {
            const SpectralKernel ker = cosine_transform(KernelSpec::tophat(0.2 * M_PI, +1),
                                                        g.L, std::min(128, N / 2));
            set_threads(1);
            std::vector<double> c_serial = convolve_direct(g, ker, u);
            const double tc_serial = time_of(std::max(2, reps / 10), [&] {
                c_serial = convolve_direct(g, ker, u);
            });
            set_threads(nthreads);
            std::vector<double> c_par = convolve_direct(g, ker, u);
            const double tc_par = time_of(std::max(2, reps / 10), [&] {
                c_par = convolve_direct(g, ker, u);
            });
            std::printf("%-22s %8d %12.2f %12.2f %8.2fx %8s\n", "direct convolution", N,
                        tc_serial * 1e6, tc_par * 1e6, tc_serial / tc_par,
                        identical(c_serial, c_par) ? "yes" : "NO");
        }
    }
    std::printf("threads used for the parallel path: %d\n", nthreads);
    return 0;
}
