#include "llf/operators.hpp"

#include <cmath>
#include <sstream>

namespace llf {

using kernels::blocked_max;
using kernels::for_each_node;

Vec3Field laplacian(const Vec3Field& f) {
    Vec3Field out(f.grid());
    kernels::laplacian3(f.grid(), f.raw(), out.raw());
    return out;
}

Vec3Field gradient_axis(const Vec3Field& f, int axis) {
    if (axis < 0 || axis >= f.grid().dim())
        throw std::invalid_argument("gradient_axis: axis out of range");
    Vec3Field out(f.grid());
    kernels::gradient_axis3(f.grid(), axis, f.raw(), out.raw());
    return out;
}

ScalarField gradient_sq(const Vec3Field& f) {
    ScalarField out(f.grid());
    kernels::gradient_sq3(f.grid(), f.raw(), out.data().data());
    return out;
}

TangentField tension(const SphereField& u) {
    const Grid& g = u.grid();
    Vec3Field tau(g);
    kernels::laplacian3(g, u.field().raw(), tau.raw());
    ScalarField gsq = gradient_sq(u.field());
    for_each_node(g.node_count(), [&](std::int64_t n) {
        const double* uv = u.node(n);
        double* tv = tau.node(n);
        for (int c = 0; c < 3; ++c) tv[c] += gsq[n] * uv[c];
    });
    return TangentField::reported(std::move(tau), u);
}

TangentField project_tangent(const Vec3Field& w, const SphereField& u) {
    Vec3Field out = w;
    for_each_node(w.grid().node_count(), [&](std::int64_t n) {
        const double* uv = u.node(n);
        double* wv = out.node(n);
        const double d = kernels::dot3(wv, uv);
        for (int c = 0; c < 3; ++c) wv[c] -= d * uv[c];
    });
    return TangentField::checked(std::move(out), u);
}

double triple_product_check(const double p[3], const double x1[3], const double x2[3],
                            const double x3[3]) {
    constexpr double tol = 1e-8;
    if (std::abs(kernels::norm3(p) - 1.0) > tol)
        throw std::invalid_argument("triple_product_check: base point not on the sphere");
    const double* xs[3] = {x1, x2, x3};
    for (const double* x : xs) {
        const double scale = std::max(1.0, kernels::norm3(x));
        if (std::abs(kernels::dot3(x, p)) > tol * scale)
            throw std::invalid_argument("triple_product_check: input not tangent at p");
    }
    double c[3];
    kernels::cross3(x1, x2, c);
    return kernels::dot3(c, x3);
}

double dirichlet_energy(const SphereField& u) {
    // Edge-based quadrature of 1/2 int |grad u|^2: the form under which the
    // mirror Laplacian is exactly self-adjoint, so the semidiscrete flow
    // conserves it exactly at eps = 0.
    return 0.5 * kernels::dirichlet_form3(u.grid(), u.field().raw(), u.field().raw());
}

double tension_sq_integral(const SphereField& u) {
    TangentField tau = tension(u);
    return kernels::trapz_dot3(u.grid(), tau.values().raw(), tau.values().raw());
}

double dirichlet_form(const Vec3Field& f, const Vec3Field& g) {
    return kernels::dirichlet_form3(f.grid(), f.raw(), g.raw());
}

double inner(const Vec3Field& f, const Vec3Field& g) {
    return kernels::trapz_dot3(f.grid(), f.raw(), g.raw());
}

double max_boundary_flux(const Vec3Field& f) {
    const Grid& g = f.grid();
    return blocked_max(g.node_count(), [&](std::int64_t n) {
        int idx[3];
        g.decompose(n, idx);
        double m = 0.0;
        for (int a = 0; a < g.dim(); ++a) {
            if (idx[a] != 0 && idx[a] != g.points(a) - 1) continue;
            const double h = g.spacing(a);
            const std::int64_t s = g.stride(a);
            const std::int64_t dir = (idx[a] == 0) ? s : -s;
            double d[3];
            for (int c = 0; c < 3; ++c) {
                const double f0 = f.at(n, c);
                const double f1 = f.at(n + dir, c);
                const double f2 = f.at(n + 2 * dir, c);
                d[c] = (-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * h);
            }
            m = std::max(m, kernels::norm3(d));
        }
        return m;
    });
}

namespace {

double l2_norm_of(const Vec3Field& f) { return f.l2_norm(); }

double grad_l2_norm_of(const Vec3Field& f) {
    ScalarField gsq = gradient_sq(f);
    return std::sqrt(kernels::trapz(f.grid(), gsq.data().data()));
}

}  // namespace

double neumann_check_scale(const Vec3Field& f) {
    const Grid& g = f.grid();
    double s = 1.0;
    Vec3Field lap = laplacian(f);
    for (int a = 0; a < g.dim(); ++a) {
        s = std::max(s, gradient_axis(f, a).max_norm());
        // Third-derivative proxy from interior rows only: the mirror rows of
        // the Laplacian are meaningless on non-Neumann data and must not
        // inflate the scale.
        Vec3Field dlap = gradient_axis(lap, a);
        const double interior = kernels::blocked_max(g.node_count(), [&](std::int64_t n) {
            int idx[3];
            g.decompose(n, idx);
            for (int b = 0; b < g.dim(); ++b)
                if (idx[b] < 2 || idx[b] > g.points(b) - 3) return 0.0;
            return kernels::norm3(dlap.node(n));
        });
        s = std::max(s, interior / 3.0);
    }
    return s;
}

double sobolev_norm(const Vec3Field& f, int order) {
    if (order < 0 || order > 5)
        throw std::invalid_argument("sobolev_norm: supported orders are 0..5");
    if (order >= 2 && f.grid().neumann()) {
        // The equivalent-norm convention needs the discrete Neumann condition.
        // The threshold is matched to the one-sided stencil truncation error,
        // which scales with the third derivative.
        const double h = f.grid().min_spacing();
        const double tol = std::max(10.0 * h * h, 1e-8);
        const double flux = max_boundary_flux(f);
        if (flux > tol * neumann_check_scale(f))
            throw std::domain_error("sobolev_norm: field violates the discrete Neumann "
                                    "condition (boundary flux " +
                                    std::to_string(flux) + ")");
    }
    double norm = l2_norm_of(f);
    if (order == 0) return norm;
    if (order == 1) return norm + grad_l2_norm_of(f);
    const int m = order / 2;
    Vec3Field top = f;
    for (int i = 0; i < m; ++i) top = laplacian(top);
    norm += l2_norm_of(top);
    if (order % 2 == 1) norm += grad_l2_norm_of(top);
    return norm;
}

void EnergyTrace::append(double t, double e, double tsq, double drift,
                         const std::map<int, double>& sob) {
    if (!times.empty() && !(t > times.back()))
        throw std::invalid_argument("energy trace: times must be strictly increasing");
    times.push_back(t);
    dirichlet.push_back(e);
    tension_sq.push_back(tsq);
    unit_drift.push_back(drift);
    for (const auto& [k, v] : sob) sobolev[k].push_back(v);
}

std::string EnergyTrace::to_csv() const {
    std::ostringstream os;
    os << "t,E,tension_sq,unit_drift";
    for (const auto& [k, v] : sobolev) os << ",W" << k;
    os << "\n";
    char buf[32];
    auto put = [&](double x) {
        std::snprintf(buf, sizeof buf, "%.17g", x);
        os << buf;
    };
    for (std::size_t i = 0; i < times.size(); ++i) {
        put(times[i]);
        os << ',';
        put(dirichlet[i]);
        os << ',';
        put(tension_sq[i]);
        os << ',';
        put(unit_drift[i]);
        for (const auto& [k, v] : sobolev) {
            os << ',';
            put(v[i]);
        }
        os << "\n";
    }
    return os.str();
}

}  // namespace llf
