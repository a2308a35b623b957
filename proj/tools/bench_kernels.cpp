// Timing comparison between the OpenMP kernels and the serial reference
// implementations, over representative desk-scale grids.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "llf/field.hpp"
#include "llf/kernels.hpp"
#include "llf/rng.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double time_of(const std::function<void()>& fn, int reps) {
    fn();  // warm up
    const auto t0 = Clock::now();
    for (int r = 0; r < reps; ++r) fn();
    const auto t1 = Clock::now();
    return std::chrono::duration<double>(t1 - t0).count() / reps;
}

void bench_grid(const llf::Grid& g, const char* label, int reps) {
    llf::Rng rng(42);
    llf::Vec3Field f = rng.field(g);
    llf::Vec3Field out(g);
    llf::ScalarField s(g);
    volatile double sink = 0.0;

    struct Row {
        const char* name;
        std::function<void()> omp;
        std::function<void()> serial;
    };
    std::vector<Row> rows = {
        {"laplacian",
         [&] { llf::kernels::laplacian3(g, f.raw(), out.raw()); },
         [&] { llf::kernels::laplacian3_serial(g, f.raw(), out.raw()); }},
        {"gradient_sq",
         [&] { llf::kernels::gradient_sq3(g, f.raw(), s.data().data()); },
         [&] { llf::kernels::gradient_sq3_serial(g, f.raw(), s.data().data()); }},
        {"trapz_dot",
         [&] { sink = llf::kernels::trapz_dot3(g, f.raw(), f.raw()); },
         [&] { sink = llf::kernels::trapz_dot3_serial(g, f.raw(), f.raw()); }},
    };

    for (const Row& row : rows) {
        const double t_omp = time_of(row.omp, reps);
        const double t_ser = time_of(row.serial, reps);
        std::printf("%-10s %-12s %10.2f us  %10.2f us  speedup %5.2fx\n", label, row.name,
                    1e6 * t_omp, 1e6 * t_ser, t_ser / t_omp);
    }
    (void)sink;
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (OpenMP off)\n");
#endif
    std::printf("%-10s %-12s %13s  %13s\n", "grid", "kernel", "openmp", "serial");
    bench_grid(llf::make_grid(1, 1.0, 512, llf::BoundaryMode::neumann_mirror), "1d-512", 2000);
    bench_grid(llf::make_grid(2, 1.0, 128, llf::BoundaryMode::neumann_mirror), "2d-128^2", 400);
    bench_grid(llf::make_grid(3, 1.0, 48, llf::BoundaryMode::neumann_mirror), "3d-48^3", 100);
    return 0;
}
