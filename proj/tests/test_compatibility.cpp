#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "llf/compatibility.hpp"
#include "llf/flow.hpp"
#include "llf/operators.hpp"

using namespace llf;

namespace {

constexpr double kPi = std::numbers::pi;

SphereField equatorial(const Grid& g, const std::function<double(double)>& theta) {
    return SphereField(Vec3Field::from_function(g, [&](const double* x, double* out) {
        const double th = theta(x[0]);
        out[0] = std::sin(th);
        out[1] = 0.0;
        out[2] = std::cos(th);
    }));
}

SphereField north(const Grid& g) {
    return SphereField(Vec3Field::from_function(g, [](const double*, double* out) {
        out[0] = 0.0;
        out[1] = 0.0;
        out[2] = 1.0;
    }));
}

}  // namespace

TEST_CASE("extrinsic jet of a constant map is trivial") {
    Grid g = make_grid(1, 1.0, 33, BoundaryMode::neumann_mirror);
    TimeJet jet = extrinsic_jet(north(g), 4);
    for (int j = 1; j <= 4; ++j) CHECK(jet[j].max_norm() < 1e-13);
    CHECK_THROWS(extrinsic_jet(north(g), 7));
}

TEST_CASE("extrinsic jet k=1,2 match the recursion by hand") {
    Grid g = make_grid(1, 1.0, 49, BoundaryMode::neumann_mirror);
    SphereField u0 = equatorial(g, [](double x) { return 0.4 * std::cos(kPi * x); });
    TimeJet jet = extrinsic_jet(u0, 2);

    // V_1 = u0 x Lap u0.
    Vec3Field lap = laplacian(u0.field());
    Vec3Field v1(g);
    for (std::int64_t n = 0; n < g.node_count(); ++n)
        kernels::cross3(u0.node(n), lap.node(n), v1.node(n));
    CHECK((jet[1] - v1).max_norm() < 1e-14);

    // V_2 = u0 x Lap V_1 + V_1 x Lap u0 (C_1^0 = C_1^1 = 1).
    Vec3Field lap_v1 = laplacian(v1);
    Vec3Field v2(g);
    for (std::int64_t n = 0; n < g.node_count(); ++n) {
        double t1[3], t2[3];
        kernels::cross3(u0.node(n), lap_v1.node(n), t1);
        kernels::cross3(v1.node(n), lap.node(n), t2);
        for (int c = 0; c < 3; ++c) v2.node(n)[c] = t1[c] + t2[c];
    }
    CHECK((jet[2] - v2).max_norm() < 1e-12);

    // TimeJet invariant: V_1 is tangent to V_0.
    CHECK(tangency_drift(jet[1], u0) < 1e-10);
}

TEST_CASE("intrinsic jet: v1 = V1 and v2 = V2 + <V1,V1> u0") {
    Grid g = make_grid(1, 1.0, 49, BoundaryMode::neumann_mirror);
    SphereField u0 = equatorial(g, [](double x) { return 0.5 * std::cos(kPi * x); });
    TimeJet ext = extrinsic_jet(u0, 3);
    TimeJet intr = intrinsic_jet(ext);

    CHECK((intr[1] - ext[1]).max_norm() == 0.0);

    Vec3Field v2 = ext[2];
    for (std::int64_t n = 0; n < g.node_count(); ++n) {
        const double d = kernels::dot3(ext[1].node(n), ext[1].node(n));
        for (int c = 0; c < 3; ++c) v2.node(n)[c] += d * u0.node(n)[c];
    }
    CHECK((intr[2] - v2).max_norm() < 1e-12);

    // Tangency cascade: every v_j(0), j >= 1, is a section of u0*(T S^2).
    for (int j = 1; j <= 3; ++j) {
        const double scale = std::max(1.0, intr[j].max_norm());
        CHECK(tangency_drift(intr[j], u0) / scale < 1e-10);
    }

    // Constant data: all intrinsic coefficients vanish.
    TimeJet cintr = intrinsic_jet(extrinsic_jet(north(g), 3));
    for (int j = 1; j <= 3; ++j) CHECK(cintr[j].max_norm() < 1e-13);
}

TEST_CASE("check_compat: constant map passes at every order") {
    Grid g = make_grid(1, 1.0, 33, BoundaryMode::neumann_mirror);
    CompatReport rep = check_compat(north(g), 3);
    CHECK(rep.all_pass());
    for (const auto& r : rep.per_order) {
        CHECK(r.extrinsic_residual < 1e-13);
        CHECK(r.intrinsic_residual < 1e-13);
    }
}

TEST_CASE("check_compat rejects periodic grids") {
    Grid g = make_grid(1, 1.0, 33, BoundaryMode::periodic);
    SphereField u = north(g);
    CHECK_THROWS(check_compat(u, 1));
}

TEST_CASE("compatible cosine profile: residuals decay at order >= 1.9") {
    std::vector<double> res0, res1, res2;
    for (int n : {65, 129, 257}) {
        Grid g = make_grid(1, 1.0, n, BoundaryMode::neumann_mirror);
        SphereField u0 = equatorial(g, [](double x) { return 0.5 * std::cos(kPi * x); });
        CompatReport rep = check_compat(u0, 2);
        CHECK(rep.all_pass());
        res0.push_back(rep.per_order[0].extrinsic_residual);
        res1.push_back(rep.per_order[1].extrinsic_residual);
        res2.push_back(rep.per_order[2].extrinsic_residual);
    }
    for (auto* res : {&res0, &res1, &res2}) {
        for (std::size_t i = 0; i + 1 < res->size(); ++i) {
            const double order = std::log2((*res)[i] / (*res)[i + 1]);
            CHECK(order >= 1.9);
        }
    }
}

TEST_CASE("incompatible linear profile: residual bounded below, fails") {
    const double a = 0.3;
    for (int n : {65, 129, 257}) {
        Grid g = make_grid(1, 1.0, n, BoundaryMode::neumann_mirror);
        SphereField u0 = equatorial(g, [&](double x) { return a * x; });
        CompatReport rep = check_compat(u0, 0);
        CHECK(rep.per_order[0].extrinsic_residual >= 0.5 * a);
        CHECK_FALSE(rep.per_order[0].pass);
    }
}

TEST_CASE("equivalence audit: extrinsic and intrinsic verdicts agree") {
    Grid g = make_grid(1, 1.0, 97, BoundaryMode::neumann_mirror);
    EquivalenceAudit good =
        equivalence_audit(equatorial(g, [](double x) { return 0.4 * std::cos(kPi * x); }), 2);
    CHECK(good.verdicts_agree);
    CHECK(good.report.all_pass());

    EquivalenceAudit bad =
        equivalence_audit(equatorial(g, [](double x) { return 0.4 * x; }), 2);
    CHECK(bad.verdicts_agree);
    CHECK_FALSE(bad.report.all_pass());
}

TEST_CASE("scale covariance: V_k shrinks by s^{-2k} under x -> x/s") {
    const int n = 129;
    Grid g1 = make_grid(1, 1.0, n, BoundaryMode::neumann_mirror);
    Grid g2 = make_grid(1, 2.0, n, BoundaryMode::neumann_mirror);
    auto theta = [](double x) { return 0.5 * std::cos(kPi * x); };
    SphereField u1 = equatorial(g1, theta);
    SphereField u2 = equatorial(g2, [&](double x) { return theta(x / 2.0); });
    TimeJet j1 = extrinsic_jet(u1, 2);
    TimeJet j2 = extrinsic_jet(u2, 2);
    // Same relative resolution, so the discrete fields rescale exactly.
    CHECK(j1[1].max_norm() / j2[1].max_norm() == doctest::Approx(4.0).epsilon(1e-10));
    CHECK(j1[2].max_norm() / j2[2].max_norm() == doctest::Approx(16.0).epsilon(1e-10));
    // Boundary residual of order k scales as s^{-(2k+1)}.
    const double r1 = boundary_covariant_flux(j1[1], nullptr);
    const double r2 = boundary_covariant_flux(j2[1], nullptr);
    CHECK(r1 / r2 == doctest::Approx(8.0).epsilon(1e-6));
}

TEST_CASE("recursion consistency: jets match time differences of the flow") {
    // V_j from the recursion vs finite-difference time derivatives of the
    // semidiscrete solve (same grid, so the difference is pure time error).
    Grid g = make_grid(1, 4.0, 65, BoundaryMode::neumann_mirror);
    SphereField u0 = equatorial(g, [](double x) { return 0.5 * std::cos(kPi * x / 4.0); });
    TimeJet jet = extrinsic_jet(u0, 3);

    const double dt = 2e-4;
    const int sub = 20;  // delta = sub * dt per FD sample
    const double delta = sub * dt;
    // u(+-delta), u(+-2 delta): the eps = 0 integrator runs both directions.
    auto at = [&](int steps_signed) {
        const double dir = steps_signed >= 0 ? 1.0 : -1.0;
        return integrate_flow(u0.field(), 0.0, dt, std::abs(steps_signed) * sub,
                              Scheme::rk4_project, true, dir);
    };
    Vec3Field up1 = at(1), um1 = at(-1), up2 = at(2), um2 = at(-2);

    Vec3Field v1_fd = up1 - um1;
    v1_fd *= 1.0 / (2.0 * delta);
    CHECK((v1_fd - jet[1]).max_norm() <
          10.0 * delta * delta * std::max(1.0, jet[3].max_norm()));

    Vec3Field v2_fd = up1 + um1 - u0.field() - u0.field();
    v2_fd *= 1.0 / (delta * delta);
    CHECK((v2_fd - jet[2]).max_norm() <
          10.0 * delta * delta * std::max(1.0, jet[3].max_norm()) * 10.0);

    Vec3Field v3_fd = up2 - um2;
    {
        Vec3Field inner = up1 - um1;
        inner *= 2.0;
        v3_fd -= inner;
        v3_fd *= 1.0 / (2.0 * delta * delta * delta);
    }
    const double scale3 = std::max(1.0, jet[3].max_norm());
    CHECK((v3_fd - jet[3]).max_norm() / scale3 < 0.05);  // O(delta^2) relative
}

TEST_CASE("compat report serializes") {
    Grid g = make_grid(1, 1.0, 33, BoundaryMode::neumann_mirror);
    CompatReport rep = check_compat(north(g), 1);
    const std::string js = rep.to_json();
    CHECK(js.find("\"per_order\"") != std::string::npos);
    CHECK(rep.to_table().find("pass") != std::string::npos);
}
