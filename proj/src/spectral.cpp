#include "llf/spectral.hpp"

#include <cmath>
#include <numbers>

namespace llf {

using kernels::blocked_sum;

namespace {

constexpr double kPi = std::numbers::pi;

// Normalization factor of mode k on an axis with N nodes and extent L:
// ||cos(k pi x/L)||^2 under the trapezoidal product is L for k in {0, N-1}
// and L/2 otherwise.
double norm_factor(int k, int np, double L) {
    const bool full = (k == 0 || k == np - 1);
    return 1.0 / std::sqrt(full ? L : 0.5 * L);
}

// Apply a per-axis transform matrix M (rows = output index, cols = input
// index) to every line of interleaved 3-component data along `axis`.
std::vector<double> apply_axis_matrix(const Grid& g, int axis, const std::vector<double>& M,
                                      const std::vector<double>& in) {
    const int np = g.points(axis);
    const std::int64_t stride = g.stride(axis);
    const std::int64_t lines = g.node_count() / np;
    std::vector<double> out(in.size(), 0.0);
#pragma omp parallel for schedule(static)
    for (std::int64_t line = 0; line < lines; ++line) {
        // Base node of the line: distribute `line` over the other axes.
        std::int64_t base = 0;
        std::int64_t rem = line;
        for (int a = 0; a < g.dim(); ++a) {
            if (a == axis) continue;
            const std::int64_t p = g.points(a);
            base += (rem % p) * g.stride(a);
            rem /= p;
        }
        for (int k = 0; k < np; ++k) {
            double acc[3] = {0.0, 0.0, 0.0};
            const double* row = M.data() + static_cast<std::int64_t>(k) * np;
            for (int i = 0; i < np; ++i) {
                const double* v = in.data() + 3 * (base + i * stride);
                acc[0] += row[i] * v[0];
                acc[1] += row[i] * v[1];
                acc[2] += row[i] * v[2];
            }
            double* o = out.data() + 3 * (base + static_cast<std::int64_t>(k) * stride);
            o[0] = acc[0];
            o[1] = acc[1];
            o[2] = acc[2];
        }
    }
    return out;
}

std::vector<double> analysis_matrix(const Grid& g, int axis) {
    const int np = g.points(axis);
    const double L = g.extent(axis);
    const double h = g.spacing(axis);
    std::vector<double> M(static_cast<std::size_t>(np) * np);
    for (int k = 0; k < np; ++k) {
        const double nf = norm_factor(k, np, L);
        for (int i = 0; i < np; ++i) {
            const double w = (i == 0 || i == np - 1) ? 0.5 : 1.0;
            M[static_cast<std::size_t>(k) * np + i] =
                h * w * nf * std::cos(kPi * k * i / (np - 1));
        }
    }
    return M;
}

std::vector<double> synthesis_matrix(const Grid& g, int axis) {
    const int np = g.points(axis);
    const double L = g.extent(axis);
    std::vector<double> M(static_cast<std::size_t>(np) * np);
    for (int i = 0; i < np; ++i) {
        for (int k = 0; k < np; ++k) {
            M[static_cast<std::size_t>(i) * np + k] =
                norm_factor(k, np, L) * std::cos(kPi * k * i / (np - 1));
        }
    }
    return M;
}

}  // namespace

double SpectralRep::coeff_norm() const {
    const double s = blocked_sum(3 * grid_.node_count(),
                                 [&](std::int64_t i) { return coeffs_[i] * coeffs_[i]; });
    return std::sqrt(s);
}

SpectralRep cosine_forward(const Vec3Field& f) {
    const Grid& g = f.grid();
    if (!g.neumann())
        throw std::invalid_argument("cosine_forward: periodic grids use a different basis");
    std::vector<double> work = f.data();
    for (int a = 0; a < g.dim(); ++a) work = apply_axis_matrix(g, a, analysis_matrix(g, a), work);
    SpectralRep rep(g);
    rep.coeffs() = std::move(work);
    return rep;
}

Vec3Field cosine_inverse(const SpectralRep& rep) {
    const Grid& g = rep.grid();
    std::vector<double> work = rep.coeffs();
    for (int a = 0; a < g.dim(); ++a) work = apply_axis_matrix(g, a, synthesis_matrix(g, a), work);
    return Vec3Field(g, std::move(work));
}

double mode_kappa_sq(const Grid& g, std::int64_t mode) {
    int idx[3];
    g.decompose(mode, idx);
    double k2 = 0.0;
    for (int a = 0; a < g.dim(); ++a) {
        const double ka = idx[a] * kPi / g.extent(a);
        k2 += ka * ka;
    }
    return k2;
}

Vec3Field spectral_laplacian(const Vec3Field& f) {
    SpectralRep rep = cosine_forward(f);
    const Grid& g = rep.grid();
    kernels::for_each_node(g.node_count(), [&](std::int64_t m) {
        const double k2 = mode_kappa_sq(g, m);
        for (int c = 0; c < 3; ++c) rep.at(m, c) *= -k2;
    });
    return cosine_inverse(rep);
}

Vec3Field periodic_second_derivative(const Vec3Field& f) {
    const Grid& g = f.grid();
    if (g.neumann() || g.dim() != 1)
        throw std::invalid_argument("periodic_second_derivative: needs a 1D periodic grid");
    const int np = g.points(0);
    const int m = np - 1;  // unique nodes
    const double period = g.extent(0);
    // Direct real DFT per component; O(m^2) is fine at desk scale.
    Vec3Field out(g);
    std::vector<double> re(static_cast<std::size_t>(m) * 3), im(static_cast<std::size_t>(m) * 3);
    for (int q = 0; q < m; ++q) {
        double accr[3] = {0, 0, 0}, acci[3] = {0, 0, 0};
        for (int j = 0; j < m; ++j) {
            const double ang = -2.0 * kPi * q * j / m;
            const double cr = std::cos(ang), ci = std::sin(ang);
            const double* v = f.node(j);
            for (int c = 0; c < 3; ++c) {
                accr[c] += cr * v[c];
                acci[c] += ci * v[c];
            }
        }
        for (int c = 0; c < 3; ++c) {
            re[static_cast<std::size_t>(q) * 3 + c] = accr[c];
            im[static_cast<std::size_t>(q) * 3 + c] = acci[c];
        }
    }
#pragma omp parallel for schedule(static)
    for (int j = 0; j < m; ++j) {
        double acc[3] = {0, 0, 0};
        for (int q = 0; q < m; ++q) {
            const int qs = (q <= m / 2) ? q : q - m;
            const double kappa = 2.0 * kPi * qs / period;
            const double mult = -kappa * kappa / m;
            const double ang = 2.0 * kPi * q * j / m;
            const double cr = std::cos(ang), ci = std::sin(ang);
            for (int c = 0; c < 3; ++c)
                acc[c] += mult * (re[static_cast<std::size_t>(q) * 3 + c] * cr -
                                  im[static_cast<std::size_t>(q) * 3 + c] * ci);
        }
        for (int c = 0; c < 3; ++c) out.at(j, c) = acc[c];
    }
    for (int c = 0; c < 3; ++c) out.at(np - 1, c) = out.at(0, c);  // duplicated endpoint
    return out;
}

}  // namespace llf
