#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "llf/operators.hpp"
#include "llf/rng.hpp"
#include "llf/spectral.hpp"

using namespace llf;

namespace {

constexpr double kPi = std::numbers::pi;

SphereField equatorial_profile(const Grid& g, const std::function<double(double)>& theta) {
    return SphereField(Vec3Field::from_function(g, [&](const double* x, double* out) {
        const double th = theta(x[0]);
        out[0] = std::sin(th);
        out[1] = 0.0;
        out[2] = std::cos(th);
    }));
}

// Max |f| over nodes away from the boundary faces. The mirror Laplacian rows
// at the faces realize the Neumann condition, so boundary values are only
// meaningful for Neumann-compatible data.
double interior_max_norm(const Vec3Field& f) {
    const Grid& g = f.grid();
    return kernels::blocked_max(g.node_count(), [&](std::int64_t n) {
        int idx[3];
        g.decompose(n, idx);
        for (int a = 0; a < g.dim(); ++a)
            if (idx[a] == 0 || idx[a] == g.points(a) - 1) return 0.0;
        return kernels::norm3(f.node(n));
    });
}

}  // namespace

TEST_CASE("laplacian annihilates constants") {
    Grid g = make_grid(2, 1.0, 16, BoundaryMode::neumann_mirror);
    Vec3Field f = Vec3Field::from_function(g, [](const double*, double* out) {
        out[0] = 3.0;
        out[1] = -2.0;
        out[2] = 0.5;
    });
    CHECK(laplacian(f).max_norm() < 1e-13);
}

TEST_CASE("laplacian eigenfunction to second order") {
    const double L = 1.0;
    for (int n : {33, 65, 129}) {
        Grid g = make_grid(1, L, n, BoundaryMode::neumann_mirror);
        Vec3Field f = Vec3Field::from_function(g, [&](const double* x, double* out) {
            out[0] = std::cos(kPi * x[0] / L);
            out[1] = 0.0;
            out[2] = 0.0;
        });
        Vec3Field lap = laplacian(f);
        const double kap2 = kPi * kPi / (L * L);
        double max_err = 0.0;
        for (int i = 0; i < n; ++i)
            max_err = std::max(max_err, std::abs(lap.at(i, 0) + kap2 * f.at(i, 0)));
        const double h = g.spacing(0);
        CHECK(max_err < 2.0 * kap2 * kap2 * h * h);  // truncation ~ kap^4 h^2 / 12
    }
}

TEST_CASE("laplacian is self-adjoint under the trapezoidal product") {
    Rng rng(5);
    for (int dim : {1, 2, 3}) {
        Grid g = make_grid(dim, 1.1, dim == 3 ? 8 : 20, BoundaryMode::neumann_mirror);
        for (int t = 0; t < 25; ++t) {
            Vec3Field f = rng.field(g), w = rng.field(g);
            const double a = inner(laplacian(f), w);
            const double b = inner(f, laplacian(w));
            const double scale = std::max(std::abs(a), 1.0);
            CHECK(std::abs(a - b) / scale < 1e-12);
        }
    }
}

TEST_CASE("discrete integration by parts is exact") {
    // <Lap f, g> + dirichlet_form(f, g) = 0 for mirror fields.
    Rng rng(6);
    for (int dim : {1, 2, 3}) {
        Grid g = make_grid(dim, 0.9, dim == 3 ? 7 : 18, BoundaryMode::neumann_mirror);
        for (int t = 0; t < 1000 / dim; ++t) {
            Vec3Field f = rng.field(g), w = rng.field(g);
            const double lhs = inner(laplacian(f), w);
            const double rhs = -dirichlet_form(f, w);
            CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(lhs)));
        }
    }
}

TEST_CASE("gradient_sq on constants and linear profiles") {
    Grid g = make_grid(1, 1.0, 41, BoundaryMode::neumann_mirror);
    Vec3Field c = Vec3Field::from_function(g, [](const double*, double* out) {
        out[0] = 1.0;
        out[1] = 1.0;
        out[2] = 1.0;
    });
    CHECK(gradient_sq(c).max_abs() < 1e-14);

    Vec3Field lin = Vec3Field::from_function(g, [](const double* x, double* out) {
        out[0] = x[0];
        out[1] = 0.0;
        out[2] = 0.0;
    });
    ScalarField gs = gradient_sq(lin);
    for (std::int64_t n = 0; n < g.node_count(); ++n)
        CHECK(gs[n] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("gradient_sq of a great-circle map is a^2") {
    const double a = 1.7;
    for (int n : {33, 65}) {
        Grid g = make_grid(1, 1.0, n, BoundaryMode::neumann_mirror);
        SphereField u = equatorial_profile(g, [&](double x) { return a * x; });
        ScalarField gs = gradient_sq(u.field());
        const double h = g.spacing(0);
        for (std::int64_t i = 0; i < g.node_count(); ++i)
            CHECK(std::abs(gs[i] - a * a) < 2.0 * std::pow(a, 4) * h * h);
    }
}

TEST_CASE("tension vanishes on constants and geodesics") {
    Grid g = make_grid(1, 1.0, 65, BoundaryMode::neumann_mirror);
    SphereField north(Vec3Field::from_function(g, [](const double*, double* out) {
        out[0] = 0.0;
        out[1] = 0.0;
        out[2] = 1.0;
    }));
    CHECK(tension(north).values().max_norm() < 1e-13);

    const double a = 1.3;
    SphereField geo = equatorial_profile(g, [&](double x) { return a * x; });
    const double h = g.spacing(0);
    CHECK(interior_max_norm(tension(geo).values()) < 3.0 * std::pow(a, 4) * h * h);
}

TEST_CASE("tension of an equatorial profile is theta'' at second order") {
    const double amp = 0.6, L = 1.0;
    for (int n : {65, 129, 257}) {
        Grid g = make_grid(1, L, n, BoundaryMode::neumann_mirror);
        auto theta = [&](double x) { return amp * std::cos(kPi * x / L); };
        auto theta2 = [&](double x) { return -amp * kPi * kPi / (L * L) * std::cos(kPi * x / L); };
        SphereField u = equatorial_profile(g, theta);
        TangentField tau = tension(u);
        double max_err = 0.0;
        for (int i = 0; i < n; ++i) {
            const double x = g.coord(0, i);
            const double expect[3] = {theta2(x) * std::cos(theta(x)), 0.0,
                                      -theta2(x) * std::sin(theta(x))};
            double err = 0.0;
            for (int c = 0; c < 3; ++c)
                err = std::max(err, std::abs(tau.values().at(i, c) - expect[c]));
            max_err = std::max(max_err, err);
        }
        const double h = g.spacing(0);
        CHECK(max_err < 60.0 * h * h);
        // Tangency drift decays at second order too.
        CHECK(tau.tangency_drift() < 40.0 * h * h);
    }
}

TEST_CASE("project_tangent") {
    Grid g = make_grid(1, 1.0, 8, BoundaryMode::neumann_mirror);
    SphereField u(Vec3Field::from_function(g, [](const double*, double* out) {
        out[0] = 0.0;
        out[1] = 0.0;
        out[2] = 1.0;
    }));
    Vec3Field w = Vec3Field::from_function(g, [](const double*, double* out) {
        out[0] = 1.0;
        out[1] = 1.0;
        out[2] = 1.0;
    });
    TangentField p = project_tangent(w, u);
    CHECK(p.values().at(0, 0) == doctest::Approx(1.0));
    CHECK(p.values().at(0, 1) == doctest::Approx(1.0));
    CHECK(std::abs(p.values().at(0, 2)) < 1e-15);
    // w = u maps to zero; idempotence.
    CHECK(project_tangent(u.field(), u).values().max_norm() < 1e-15);
    TangentField pp = project_tangent(p.values(), u);
    CHECK((pp.values() - p.values()).max_norm() < 1e-15);
}

TEST_CASE("triple product of tangent vectors vanishes") {
    const double ez[3] = {0, 0, 1};
    const double e1[3] = {1, 0, 0}, e2[3] = {0, 1, 0};
    CHECK(triple_product_check(ez, e1, e2, e1) == 0.0);

    Rng rng(99);
    for (int t = 0; t < 1000; ++t) {
        double p[3];
        rng.unit_vector(p);
        double x[3][3];
        for (auto& xi : x) {
            double raw[3] = {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
            const double d = raw[0] * p[0] + raw[1] * p[1] + raw[2] * p[2];
            for (int c = 0; c < 3; ++c) xi[c] = raw[c] - d * p[c];
        }
        const double tp = triple_product_check(p, x[0], x[1], x[2]);
        double prod = 1.0;
        for (auto& xi : x) prod *= std::max(1e-30, kernels::norm3(xi));
        CHECK(std::abs(tp) <= 1e-12 * prod);
    }
    // Parallel inputs are exactly zero.
    double p[3] = {0, 0, 1}, a[3] = {0.3, 0.4, 0.0};
    CHECK(triple_product_check(p, a, a, a) == 0.0);
    // Non-tangent input rejected.
    double bad[3] = {0.0, 0.0, 0.9};
    CHECK_THROWS(triple_product_check(p, bad, a, a));
}

TEST_CASE("dirichlet energy of constants and cosine profiles") {
    Grid g = make_grid(1, 1.0, 129, BoundaryMode::neumann_mirror);
    SphereField north(Vec3Field::from_function(g, [](const double*, double* out) {
        out[0] = 0.0;
        out[1] = 0.0;
        out[2] = 1.0;
    }));
    CHECK(dirichlet_energy(north) == 0.0);

    // u = (sin(pi x/L), 0, cos(pi x/L)): |du|^2 = (pi/L)^2, E = L/2 (pi/L)^2.
    const double L = 1.0;
    std::vector<double> errs;
    for (int n : {65, 129, 257}) {
        Grid gn = make_grid(1, L, n, BoundaryMode::neumann_mirror);
        SphereField u = equatorial_profile(gn, [&](double x) { return kPi * x / L; });
        const double exact = 0.5 * L * kPi * kPi / (L * L);
        errs.push_back(std::abs(dirichlet_energy(u) - exact));
    }
    CHECK(errs[0] / errs[1] > 3.0);  // Richardson: O(h^2)
    CHECK(errs[1] / errs[2] > 3.0);
}

TEST_CASE("sobolev norm basics") {
    Grid g = make_grid(1, 1.0, 65, BoundaryMode::neumann_mirror);
    Vec3Field c = Vec3Field::from_function(g, [](const double*, double* out) {
        out[0] = -2.0;
        out[1] = 0.0;
        out[2] = 0.0;
    });
    CHECK(sobolev_norm(c, 0) == doctest::Approx(2.0).epsilon(1e-13));  // |c| sqrt(|O|)

    CHECK_THROWS(sobolev_norm(c, 6));

    // Non-Neumann field rejected at order 2.
    Vec3Field lin = Vec3Field::from_function(g, [](const double* x, double* out) {
        out[0] = x[0];
        out[1] = 0.0;
        out[2] = 0.0;
    });
    CHECK_THROWS(sobolev_norm(lin, 2));
    CHECK_NOTHROW(sobolev_norm(lin, 1));
}

TEST_CASE("sobolev norm eigenfunction ratio converges to 1 + kappa^2") {
    const double L = 1.0;
    std::vector<double> ratio_errs;
    for (int n : {65, 129, 257}) {
        Grid g = make_grid(1, L, n, BoundaryMode::neumann_mirror);
        Vec3Field f = Vec3Field::from_function(g, [&](const double* x, double* out) {
            out[0] = std::cos(kPi * x[0] / L);
            out[1] = 0.0;
            out[2] = 0.0;
        });
        const double ratio = sobolev_norm(f, 2) / sobolev_norm(f, 0);
        ratio_errs.push_back(std::abs(ratio - (1.0 + kPi * kPi / (L * L))));
    }
    CHECK(ratio_errs[0] / ratio_errs[1] > 3.0);
    CHECK(ratio_errs[1] / ratio_errs[2] > 3.0);
}

TEST_CASE("sobolev norm is a norm: homogeneity, triangle, order monotonicity") {
    Rng rng(17);
    Grid g = make_grid(1, 1.0, 48, BoundaryMode::neumann_mirror);
    for (int t = 0; t < 1000; ++t) {
        Vec3Field f = rng.band_limited_field(g, 3, 1.0);
        Vec3Field w = rng.band_limited_field(g, 3, 1.0);
        const int k = t % 6;
        // Homogeneity is exact for power-of-two scalings.
        Vec3Field f4 = f;
        f4 *= 4.0;
        CHECK(sobolev_norm(f4, k) == 4.0 * sobolev_norm(f, k));
        // Triangle inequality.
        CHECK(sobolev_norm(f + w, k) <= sobolev_norm(f, k) + sobolev_norm(w, k) + 1e-12);
        // Monotone in the order on a unit-extent grid (lowest nonconstant
        // Laplacian eigenvalue ~ pi^2 > 1).
        if (k < 5) CHECK(sobolev_norm(f, k) <= sobolev_norm(f, k + 1) * (1 + 1e-12));
    }
}

TEST_CASE("spectral laplacian is exact on band-limited fields") {
    Grid g = make_grid(1, 1.0, 33, BoundaryMode::neumann_mirror);
    Vec3Field f = Vec3Field::from_function(g, [&](const double* x, double* out) {
        out[0] = std::cos(2 * kPi * x[0]);
        out[1] = 0.0;
        out[2] = 0.0;
    });
    Vec3Field lap = spectral_laplacian(f);
    for (int i = 0; i < g.points(0); ++i)
        CHECK(lap.at(i, 0) ==
              doctest::Approx(-4 * kPi * kPi * f.at(i, 0)).epsilon(1e-10));
}

TEST_CASE("energy trace CSV") {
    EnergyTrace tr;
    tr.append(0.0, 1.0, 0.5, 1e-16);
    tr.append(0.1, 0.9, 0.4, 2e-16);
    CHECK_THROWS(tr.append(0.05, 1.0, 1.0, 0.0));
    const std::string csv = tr.to_csv();
    CHECK(csv.find("t,E,tension_sq,unit_drift") == 0);
    CHECK(csv.find("0.9") != std::string::npos);
}
