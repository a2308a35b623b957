#include "llf/jet.hpp"

namespace llf::jet {

using kernels::for_each_node;

namespace {

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

SeriesVec time_derivative(const SeriesVec& s) {
    if (s.order() < 1) throw std::invalid_argument("jet: cannot differentiate order-0 series");
    std::vector<Vec3Field> out;
    out.reserve(s.order());
    for (int m = 1; m <= s.order(); ++m) out.push_back(s.coef(m));
    return SeriesVec(std::move(out));
}

SeriesVec add(const SeriesVec& a, const SeriesVec& b) {
    const int k = std::min(a.order(), b.order());
    std::vector<Vec3Field> out;
    out.reserve(k + 1);
    for (int m = 0; m <= k; ++m) out.push_back(a.coef(m) + b.coef(m));
    return SeriesVec(std::move(out));
}

SeriesScalar dot(const SeriesVec& a, const SeriesVec& b) {
    const int k = std::min(a.order(), b.order());
    const Grid& g = a.coef(0).grid();
    std::vector<ScalarField> out;
    out.reserve(k + 1);
    for (int m = 0; m <= k; ++m) {
        ScalarField s(g);
        for (int i = 0; i <= m; ++i) {
            const double c = binom(m, i);
            const Vec3Field& ai = a.coef(i);
            const Vec3Field& bj = b.coef(m - i);
            for_each_node(g.node_count(), [&](std::int64_t n) {
                s[n] += c * kernels::dot3(ai.node(n), bj.node(n));
            });
        }
        out.push_back(std::move(s));
    }
    return SeriesScalar(std::move(out));
}

SeriesVec cross(const SeriesVec& a, const SeriesVec& b) {
    const int k = std::min(a.order(), b.order());
    const Grid& g = a.coef(0).grid();
    std::vector<Vec3Field> out;
    out.reserve(k + 1);
    for (int m = 0; m <= k; ++m) {
        Vec3Field v(g);
        for (int i = 0; i <= m; ++i) {
            const double c = binom(m, i);
            const Vec3Field& ai = a.coef(i);
            const Vec3Field& bj = b.coef(m - i);
            for_each_node(g.node_count(), [&](std::int64_t n) {
                double t[3];
                kernels::cross3(ai.node(n), bj.node(n), t);
                double* vv = v.node(n);
                for (int c2 = 0; c2 < 3; ++c2) vv[c2] += c * t[c2];
            });
        }
        out.push_back(std::move(v));
    }
    return SeriesVec(std::move(out));
}

SeriesVec scale(const SeriesScalar& s, const SeriesVec& a) {
    const int k = std::min(s.order(), a.order());
    const Grid& g = a.coef(0).grid();
    std::vector<Vec3Field> out;
    out.reserve(k + 1);
    for (int m = 0; m <= k; ++m) {
        Vec3Field v(g);
        for (int i = 0; i <= m; ++i) {
            const double c = binom(m, i);
            const ScalarField& si = s.coef(i);
            const Vec3Field& aj = a.coef(m - i);
            for_each_node(g.node_count(), [&](std::int64_t n) {
                double* vv = v.node(n);
                const double* av = aj.node(n);
                for (int c2 = 0; c2 < 3; ++c2) vv[c2] += c * si[n] * av[c2];
            });
        }
        out.push_back(std::move(v));
    }
    return SeriesVec(std::move(out));
}

SeriesVec apply_laplacian(const SeriesVec& a) {
    std::vector<Vec3Field> out;
    out.reserve(a.order() + 1);
    for (int m = 0; m <= a.order(); ++m) out.push_back(laplacian(a.coef(m)));
    return SeriesVec(std::move(out));
}

SeriesScalar gradsq_series(const SeriesVec& u) {
    const Grid& g = u.coef(0).grid();
    std::vector<SeriesVec> grads;
    for (int a = 0; a < g.dim(); ++a) {
        std::vector<Vec3Field> coef;
        coef.reserve(u.order() + 1);
        for (int m = 0; m <= u.order(); ++m) coef.push_back(gradient_axis(u.coef(m), a));
        grads.emplace_back(std::move(coef));
    }
    std::vector<ScalarField> out(static_cast<std::size_t>(u.order()) + 1, ScalarField(g));
    for (int a = 0; a < g.dim(); ++a) {
        SeriesScalar d = dot(grads[a], grads[a]);
        for (int m = 0; m <= u.order(); ++m) {
            for_each_node(g.node_count(),
                          [&](std::int64_t n) { out[m][n] += d.coef(m)[n]; });
        }
    }
    return SeriesScalar(std::move(out));
}

SeriesVec tau_series(const SeriesVec& u) {
    return add(apply_laplacian(u), scale(gradsq_series(u), u));
}

SeriesVec covariant_derivative(const SeriesVec& w, const SeriesVec& u) {
    SeriesVec dw = time_derivative(w);
    SeriesVec du = time_derivative(u);
    SeriesVec corr = scale(dot(du, w), u);
    return add(dw, corr);
}

SeriesVec extrinsic_series(const SphereField& u0, int k) {
    std::vector<Vec3Field> U;
    U.reserve(k + 1);
    U.push_back(u0.field());
    std::vector<Vec3Field> lapU;
    for (int m = 1; m <= k; ++m) {
        lapU.push_back(laplacian(U[m - 1]));
        const Grid& g = u0.grid();
        Vec3Field vm(g);
        for (int i = 0; i + 1 <= m; ++i) {
            const int j = m - 1 - i;
            const double c = binom(m - 1, i);
            const Vec3Field& vi = U[i];
            const Vec3Field& lj = lapU[j];
            for_each_node(g.node_count(), [&](std::int64_t n) {
                double t[3];
                kernels::cross3(vi.node(n), lj.node(n), t);
                double* out = vm.node(n);
                for (int c2 = 0; c2 < 3; ++c2) out[c2] += c * t[c2];
            });
        }
        U.push_back(std::move(vm));
    }
    return SeriesVec(std::move(U));
}

std::vector<Vec3Field> intrinsic_coefficients(const SeriesVec& u) {
    const int k = u.order();
    std::vector<Vec3Field> v;
    v.reserve(k + 1);
    v.push_back(u.coef(0));
    if (k == 0) return v;
    SeriesVec current = time_derivative(u);  // v_1 series, order k-1
    v.push_back(current.coef(0));
    for (int j = 2; j <= k; ++j) {
        current = covariant_derivative(current, u);
        v.push_back(current.coef(0));
    }
    return v;
}

Vec3Field principal_part(const SphereField& u, const Vec3Field& w) {
    const Grid& g = u.grid();
    Vec3Field out = laplacian(w);
    Vec3Field lap_u = laplacian(u.field());
    ScalarField gsq = gradient_sq(u.field());
    // Cross-gradient term 2 sum_a <D_a u, D_a w>, same stencils as gradient_sq.
    ScalarField cross_grad(g);
    for (int a = 0; a < g.dim(); ++a) {
        Vec3Field du = gradient_axis(u.field(), a);
        Vec3Field dw = gradient_axis(w, a);
        for_each_node(g.node_count(), [&](std::int64_t n) {
            cross_grad[n] += 2.0 * kernels::dot3(du.node(n), dw.node(n));
        });
    }
    for_each_node(g.node_count(), [&](std::int64_t n) {
        const double* uv = u.node(n);
        const double* wv = w.node(n);
        double* ov = out.node(n);
        const double lu_w = kernels::dot3(lap_u.node(n), wv);
        for (int c = 0; c < 3; ++c)
            ov[c] += cross_grad[n] * uv[c] + lu_w * uv[c] + gsq[n] * wv[c];
    });
    return out;
}

Vec3Field remainder_rk(const SphereField& u0, int k) {
    if (k < 1) throw std::invalid_argument("remainder_rk: k must be >= 1");
    const Grid& g = u0.grid();
    if (k == 1) return Vec3Field(g);
    SeriesVec u = extrinsic_series(u0, k);
    std::vector<Vec3Field> v = intrinsic_coefficients(u);

    // grad_t^k tau(u) at t = 0.
    SeriesVec t = tau_series(u);
    for (int j = 0; j < k; ++j) t = covariant_derivative(t, u);
    Vec3Field rk = t.coef(0);
    rk -= principal_part(u0, v[k]);
    // The continuum remainder is a section of u*(T S^2); the discrete normal
    // component is pure stencil error, so project it away.
    for_each_node(g.node_count(), [&](std::int64_t n) {
        const double* uv = u0.node(n);
        double* rv = rk.node(n);
        const double d = kernels::dot3(rv, uv);
        for (int c = 0; c < 3; ++c) rv[c] -= d * uv[c];
    });
    return rk;
}

}  // namespace llf::jet
