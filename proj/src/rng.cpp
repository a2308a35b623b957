#include "llf/rng.hpp"

#include <cmath>
#include <numbers>

namespace llf {

Vec3Field Rng::band_limited_field(const Grid& g, int band, double amplitude) {
    const int d = g.dim();
    // Draw coefficients for every mode tuple with indices <= band.
    int nmodes = 1;
    for (int a = 0; a < d; ++a) nmodes *= band + 1;
    std::vector<double> coef(static_cast<std::size_t>(nmodes) * 3);
    for (double& c : coef) c = uniform(-1.0, 1.0) * amplitude;

    Vec3Field f(g);
    kernels::for_each_node(g.node_count(), [&](std::int64_t n) {
        int idx[3];
        g.decompose(n, idx);
        double* v = f.node(n);
        for (int m = 0; m < nmodes; ++m) {
            int rem = m;
            double basis = 1.0;
            for (int a = 0; a < d; ++a) {
                const int k = rem % (band + 1);
                rem /= band + 1;
                basis *= std::cos(std::numbers::pi * k * g.coord(a, idx[a]) / g.extent(a));
            }
            for (int c = 0; c < 3; ++c) v[c] += coef[static_cast<std::size_t>(m) * 3 + c] * basis;
        }
    });
    return f;
}

}  // namespace llf
