#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "llf/grid.hpp"

// Low-level node-parallel kernels. Every kernel has an OpenMP implementation
// (the default path) and a serial reference implementation used by the tests
// and the benchmark. Reductions are blocked with a fixed block size and the
// block partials are combined in index order, so results are bit-identical
// for any thread count, including the serial path.

namespace llf::kernels {

inline constexpr std::int64_t kReductionBlock = 4096;

// Below this many iterations the parallel region costs more than it saves;
// the block structure keeps results bit-identical either way.
inline constexpr std::int64_t kParallelCutoff = 8192;

template <class F>
double blocked_sum_serial(std::int64_t n, F&& per_index) {
    const std::int64_t nblocks = (n + kReductionBlock - 1) / kReductionBlock;
    double total = 0.0;
    for (std::int64_t b = 0; b < nblocks; ++b) {
        const std::int64_t lo = b * kReductionBlock;
        const std::int64_t hi = std::min(n, lo + kReductionBlock);
        double s = 0.0;
        for (std::int64_t i = lo; i < hi; ++i) s += per_index(i);
        total += s;
    }
    return total;
}

template <class F>
double blocked_sum(std::int64_t n, F&& per_index) {
    const std::int64_t nblocks = (n + kReductionBlock - 1) / kReductionBlock;
    if (nblocks <= 1) return blocked_sum_serial(n, per_index);
    std::vector<double> partial(static_cast<std::size_t>(nblocks), 0.0);
#pragma omp parallel for schedule(static) if (n >= kParallelCutoff)
    for (std::int64_t b = 0; b < nblocks; ++b) {
        const std::int64_t lo = b * kReductionBlock;
        const std::int64_t hi = std::min(n, lo + kReductionBlock);
        double s = 0.0;
        for (std::int64_t i = lo; i < hi; ++i) s += per_index(i);
        partial[static_cast<std::size_t>(b)] = s;
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

template <class F>
double blocked_max(std::int64_t n, F&& per_index) {
    const std::int64_t nblocks = (n + kReductionBlock - 1) / kReductionBlock;
    constexpr double kLowest = -std::numeric_limits<double>::infinity();
    std::vector<double> partial(static_cast<std::size_t>(nblocks), kLowest);
#pragma omp parallel for schedule(static) if (n >= kParallelCutoff)
    for (std::int64_t b = 0; b < nblocks; ++b) {
        const std::int64_t lo = b * kReductionBlock;
        const std::int64_t hi = std::min(n, lo + kReductionBlock);
        double m = kLowest;
        for (std::int64_t i = lo; i < hi; ++i) m = std::max(m, per_index(i));
        partial[static_cast<std::size_t>(b)] = m;
    }
    double m = kLowest;
    for (double p : partial) m = std::max(m, p);
    return m;
}

template <class F>
double blocked_min(std::int64_t n, F&& per_index) {
    return -blocked_max(n, [&](std::int64_t i) { return -per_index(i); });
}

template <class F>
void for_each_node(std::int64_t n, F&& body) {
#pragma omp parallel for schedule(static) if (n >= kParallelCutoff)
    for (std::int64_t i = 0; i < n; ++i) body(i);
}

template <class F>
void for_each_node_serial(std::int64_t n, F&& body) {
    for (std::int64_t i = 0; i < n; ++i) body(i);
}

// Mirror/wrap neighbor index along one axis.
inline int neighbor_down(int i, int np, BoundaryMode mode) {
    if (i > 0) return i - 1;
    return mode == BoundaryMode::neumann_mirror ? 1 : np - 2;
}
inline int neighbor_up(int i, int np, BoundaryMode mode) {
    if (i < np - 1) return i + 1;
    return mode == BoundaryMode::neumann_mirror ? np - 2 : 1;
}

// 2d+1-point Laplacian of an interleaved 3-component field (ghosts per grid mode).
void laplacian3(const Grid& g, const double* in, double* out);
void laplacian3_serial(const Grid& g, const double* in, double* out);

// First derivative along one axis, centered in the interior. Neumann grids use
// 3-point one-sided stencils at the axis ends, periodic grids wrap.
void gradient_axis3(const Grid& g, int axis, const double* in, double* out);
void gradient_axis3_serial(const Grid& g, int axis, const double* in, double* out);

// Nodal |grad f|^2 summed over axes and components.
void gradient_sq3(const Grid& g, const double* in, double* out_scalar);
void gradient_sq3_serial(const Grid& g, const double* in, double* out_scalar);

// Trapezoidal integral of a nodal scalar.
double trapz(const Grid& g, const double* scalar);
double trapz_serial(const Grid& g, const double* scalar);

// Trapezoidal inner product of two interleaved 3-component fields.
double trapz_dot3(const Grid& g, const double* a, const double* b);
double trapz_dot3_serial(const Grid& g, const double* a, const double* b);

// Edge-based Dirichlet form: sum over axis edges of <df, dg>/h^2 with
// trapezoidal weights transverse to the edge axis. Equals -<laplacian3 f, g>
// exactly on neumann_mirror grids.
double dirichlet_form3(const Grid& g, const double* a, const double* b);

inline void cross3(const double* a, const double* b, double* out) {
    out[0] = a[1] * b[2] - a[2] * b[1];
    out[1] = a[2] * b[0] - a[0] * b[2];
    out[2] = a[0] * b[1] - a[1] * b[0];
}
inline double dot3(const double* a, const double* b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline double norm3(const double* a) { return std::sqrt(dot3(a, a)); }

}  // namespace llf::kernels
