#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "llf/galerkin.hpp"
#include "llf/operators.hpp"
#include "llf/rng.hpp"
#include "llf/spectral.hpp"

using namespace llf;

namespace {

constexpr double kPi = std::numbers::pi;

SphereField north(const Grid& g) {
    return SphereField(Vec3Field::from_function(g, [](const double*, double* out) {
        out[0] = 0.0;
        out[1] = 0.0;
        out[2] = 1.0;
    }));
}

Vec3Field scalar_times_ex(const EigenBasis& basis, int mode) {
    GalerkinState st;
    st.n = mode + 1;
    st.coeffs.assign(3 * static_cast<std::size_t>(mode + 1), 0.0);
    st.at(mode, 0) = 1.0;
    return st.synthesize(basis);
}

}  // namespace

TEST_CASE("eigenbasis: eigenvalues on [0,pi] and [0,pi]^2") {
    Grid g1 = make_grid(1, kPi, 33, BoundaryMode::neumann_mirror);
    EigenBasis b1 = build_basis(g1, 6);
    // lambda_k = k^2 + 1 on [0,pi]; the first mode is the constant.
    for (int i = 0; i < 6; ++i)
        CHECK(b1.mode(i).lambda == doctest::Approx(i * i + 1.0).epsilon(1e-13));
    CHECK(b1.mode(0).lambda == 1.0);

    Grid g2 = make_grid(2, {kPi, kPi}, {17, 17}, BoundaryMode::neumann_mirror);
    EigenBasis b2 = build_basis(g2, 8);
    // Modes sorted by eigenvalue: (0,0)->1, (0,1)/(1,0)->2, (1,1)->3.
    CHECK(b2.mode(0).lambda == doctest::Approx(1.0));
    CHECK(b2.mode(1).lambda == doctest::Approx(2.0));
    CHECK(b2.mode(2).lambda == doctest::Approx(2.0));
    CHECK(b2.mode(3).lambda == doctest::Approx(3.0));

    CHECK_THROWS(build_basis(g1, 1000));
    Grid gp = make_grid(1, 1.0, 16, BoundaryMode::periodic);
    CHECK_THROWS(build_basis(gp, 4));
    Grid g3 = make_grid(3, 1.0, 8, BoundaryMode::neumann_mirror);
    CHECK_THROWS(build_basis(g3, 4));
}

TEST_CASE("eigenbasis: orthonormal to 1e-12 and spectrally exact eigenpairs") {
    Grid g = make_grid(1, 1.7, 49, BoundaryMode::neumann_mirror);
    const int n = 12;
    EigenBasis basis = build_basis(g, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double gram = kernels::blocked_sum(g.node_count(), [&](std::int64_t node) {
                return g.quad_weight(node) * basis.mode(i).g[node] * basis.mode(j).g[node];
            });
            CHECK(std::abs(gram - (i == j ? 1.0 : 0.0)) < 1e-12);
        }
    }
    // (Lap - I) g_i = -lambda_i g_i with spectral differentiation.
    for (int i = 0; i < n; ++i) {
        Vec3Field gi = scalar_times_ex(basis, i);
        Vec3Field lap = spectral_laplacian(gi);
        double resid = 0.0, scale = 0.0;
        for (std::int64_t node = 0; node < g.node_count(); ++node) {
            const double want = -basis.mode(i).lambda * gi.at(node, 0);
            resid = std::max(resid, std::abs(lap.at(node, 0) - gi.at(node, 0) - want));
            scale = std::max(scale, std::abs(want));
        }
        CHECK(resid <= 1e-10 * std::max(1.0, scale));
    }
    // Stencil Laplacian agrees at O(h^2) (cross-check, not the construction).
    Vec3Field g3 = scalar_times_ex(basis, 3);
    Vec3Field lap3 = laplacian(g3);
    double worst = 0.0;
    for (std::int64_t node = 0; node < g.node_count(); ++node)
        worst = std::max(worst,
                         std::abs(lap3.at(node, 0) + basis.mode(3).kappa_sq * g3.at(node, 0)));
    const double h = g.min_spacing();
    CHECK(worst < 2.0 * std::pow(basis.mode(3).kappa_sq, 2) * h * h);
}

TEST_CASE("project_Pn: fixes its range, kills the orthogonal complement") {
    Grid g = make_grid(1, 1.0, 65, BoundaryMode::neumann_mirror);
    EigenBasis basis = build_basis(g, 20);
    Rng rng(7);

    // f in H_n is reproduced to 1e-12.
    GalerkinState coef;
    coef.n = 8;
    coef.coeffs.assign(24, 0.0);
    for (int i = 0; i < 8; ++i)
        for (int c = 0; c < 3; ++c) coef.at(i, c) = rng.uniform(-1, 1);
    Vec3Field f = coef.synthesize(basis);
    GalerkinState back = project_Pn(f, basis, 8);
    double err = 0.0;
    for (std::size_t i = 0; i < back.coeffs.size(); ++i)
        err = std::max(err, std::abs(back.coeffs[i] - coef.coeffs[i]));
    CHECK(err < 1e-12);

    // f = g_{n+1} projects to zero.
    Vec3Field g9 = scalar_times_ex(basis, 8);
    GalerkinState z = project_Pn(g9, basis, 8);
    CHECK(z.l2_norm() < 1e-12);

    // Idempotence and self-adjointness on random pairs.
    for (int t = 0; t < 50; ++t) {
        Vec3Field a = rng.band_limited_field(g, 10, 1.0);
        Vec3Field b = rng.band_limited_field(g, 10, 1.0);
        Vec3Field pa = project_Pn(a, basis, 12).synthesize(basis);
        Vec3Field ppa = project_Pn(pa, basis, 12).synthesize(basis);
        CHECK(pa.l2_distance(ppa) < 1e-12 * std::max(1.0, pa.l2_norm()));
        const double x = inner(pa, b);
        const double y = inner(a, project_Pn(b, basis, 12).synthesize(basis));
        CHECK(std::abs(x - y) < 1e-12 * std::max(1.0, std::abs(x)));
    }
}

TEST_CASE("pn_bound_audit: W12 contraction exact, higher ratios finite and stable") {
    Grid g = make_grid(1, 1.0, 65, BoundaryMode::neumann_mirror);
    EigenBasis basis = build_basis(g, 24);
    PnAuditReport r16 = pn_bound_audit(basis, 16, 200, 99);
    CHECK(r16.max_ratio_w1 <= 1.0 + 1e-12);
    CHECK(r16.max_ratio_w2 < 10.0);
    CHECK(r16.max_ratio_w3 < 10.0);
    PnAuditReport r24 = pn_bound_audit(basis, 24, 200, 99);
    CHECK(r24.max_ratio_w2 < 10.0);  // n-stable constants

    // f in H_n: all ratios exactly 1 (projection is the identity there).
    Rng rng(3);
    GalerkinState coef;
    coef.n = 16;
    coef.coeffs.assign(48, 0.0);
    for (std::size_t i = 0; i < coef.coeffs.size(); ++i) coef.coeffs[i] = rng.uniform(-1, 1);
    Vec3Field f = coef.synthesize(basis);
    Vec3Field pf = project_Pn(f, basis, 16).synthesize(basis);
    for (int k : {1, 2, 3})
        CHECK(sobolev_norm(pf, k) ==
              doctest::Approx(sobolev_norm(f, k)).epsilon(1e-11));
}

TEST_CASE("solve_galerkin: single-mode closed form and the zero solution") {
    const double L = 1.0;
    Grid g = make_grid(1, L, 65, BoundaryMode::neumann_mirror);
    EigenBasis basis = build_basis(g, 8);
    const double eps = 0.3;

    // h0 = g_2 e_x, constant background u = e_z, no coefficients: each mode
    // obeys c' = -kappa^2 (eps c + e_z x c).
    Vec3Field h0 = scalar_times_ex(basis, 1);
    GalerkinConfig cfg{eps, 5e-5, 0.02, 40};
    GalerkinSolution sol = solve_galerkin(h0, basis, 8, galerkin_data_free(north(g)), cfg);
    const double k2 = basis.mode(1).kappa_sq;  // lambda_2 - 1
    for (std::size_t s = 0; s < sol.times.size(); ++s) {
        const double t = sol.times[s];
        const double decay = std::exp(-eps * k2 * t);
        const double cx = decay * std::cos(k2 * t);
        const double cy = -decay * std::sin(k2 * t);
        CHECK(std::abs(sol.states[s].at(1, 0) - cx) < 1e-8);
        CHECK(std::abs(sol.states[s].at(1, 1) - cy) < 1e-8);
        // Other modes stay dark.
        for (int i = 0; i < 8; ++i) {
            if (i == 1) continue;
            for (int c = 0; c < 3; ++c) CHECK(std::abs(sol.states[s].at(i, c)) < 1e-12);
        }
    }

    // Zero initial data with zero sources stays identically zero.
    Vec3Field zero(g);
    GalerkinSolution zsol = solve_galerkin(zero, basis, 8, galerkin_data_free(north(g)), cfg);
    for (const GalerkinState& st : zsol.states) CHECK(st.l2_norm() == 0.0);

    // Validation: epsilon range and the stiff CFL rail.
    GalerkinConfig bad = cfg;
    bad.epsilon = 0.0;
    CHECK_THROWS(solve_galerkin(h0, basis, 8, galerkin_data_free(north(g)), bad));
    GalerkinConfig stiff = cfg;
    stiff.dt = 1.0;
    CHECK_THROWS(solve_galerkin(h0, basis, 8, galerkin_data_free(north(g)), stiff));
}

TEST_CASE("2D galerkin: mode (1,1) precesses at its eigenvalue") {
    Grid g = make_grid(2, {kPi, kPi}, {17, 17}, BoundaryMode::neumann_mirror);
    EigenBasis basis = build_basis(g, 6);
    // Mode 3 is (1,1) with lambda = 3, kappa^2 = 2 on [0,pi]^2.
    REQUIRE(basis.mode(3).lambda == doctest::Approx(3.0));
    Vec3Field h0 = scalar_times_ex(basis, 3);
    const double eps = 0.25;
    GalerkinConfig cfg{eps, 1e-4, 0.01, 20};
    GalerkinSolution sol = solve_galerkin(h0, basis, 6, galerkin_data_free(north(g)), cfg);
    const double k2 = basis.mode(3).kappa_sq;
    for (std::size_t s = 0; s < sol.times.size(); ++s) {
        const double t = sol.times[s];
        const double decay = std::exp(-eps * k2 * t);
        CHECK(std::abs(sol.states[s].at(3, 0) - decay * std::cos(k2 * t)) < 1e-8);
        CHECK(std::abs(sol.states[s].at(3, 1) + decay * std::sin(k2 * t)) < 1e-8);
    }
}

TEST_CASE("galerkin energy monitor is finite on a forced run") {
    Grid g = make_grid(1, 4.0, 65, BoundaryMode::neumann_mirror);
    SphereField u0(Vec3Field::from_function(g, [&](const double* x, double* out) {
        const double th = 0.5 * std::cos(kPi * x[0] / 4.0);
        out[0] = std::sin(th);
        out[1] = 0.0;
        out[2] = std::cos(th);
    }));
    FlowConfig fcfg{0.0, 2e-4, 0.01, Scheme::rk4_project, true, 1};
    Background bg = assemble_background(evolve(u0, fcfg));
    EigenBasis basis = build_basis(g, 16);
    GalerkinDataFn data = galerkin_data_from_background(bg, 1, 0.1);
    Vec3Field h0 = background_slice(bg.state(0)).v1;
    GalerkinConfig cfg{0.1, 2e-4, 0.01, 5};
    GalerkinSolution sol = solve_galerkin(h0, basis, 16, data, cfg);
    const double c = galerkin_energy_monitor(sol, basis, 0.1, data);
    CHECK(std::isfinite(c));
}

TEST_CASE("k = 2: galerkin run with the jet-assembled source tracks omega") {
    // Same data on both solvers: the coefficient system with
    // f3 = (eps I + u x) R_2 should agree with the stencil solve of omega ~ v_2
    // up to O(h^2) and basis truncation.
    Grid g = make_grid(1, 4.0, 65, BoundaryMode::neumann_mirror);
    SphereField u0(Vec3Field::from_function(g, [&](const double* x, double* out) {
        const double th = 0.5 * std::cos(kPi * x[0] / 4.0);
        out[0] = std::sin(th);
        out[1] = 0.0;
        out[2] = std::cos(th);
    }));
    FlowConfig fcfg{0.0, 1e-4, 0.01, Scheme::rk4_project, true, 1, {}};
    Background bg = assemble_background(evolve(u0, fcfg));
    TimeJet ij = intrinsic_jet(extrinsic_jet(u0, 2));

    VkConfig vcfg{0.1, 1e-4, 100, nullptr};
    VkSolution omega = solve_vk(ij, bg, 2, vcfg);

    EigenBasis basis = build_basis(g, 24);
    GalerkinDataFn data = galerkin_data_from_background(bg, 2, 0.1);
    GalerkinConfig gcfg{0.1, 1e-4, 0.01, 100};
    GalerkinSolution hsol = solve_galerkin(ij.coeffs[2], basis, 24, data, gcfg);

    double scale = 0.0;
    for (const Vec3Field& w : omega.omega) scale = std::max(scale, w.l2_norm());
    double dist = 0.0;
    for (std::size_t s = 0; s < omega.times.size() && s < hsol.times.size(); ++s)
        dist = std::max(dist, omega.omega[s].l2_distance(hsol.states[s].synthesize(basis)));
    CHECK(dist / scale < 1e-4);  // measured ~6e-6 at N = 65, O(h^2) trend
}

TEST_CASE("galerkin CSV export") {
    Grid g = make_grid(1, 1.0, 33, BoundaryMode::neumann_mirror);
    EigenBasis basis = build_basis(g, 4);
    Vec3Field h0 = scalar_times_ex(basis, 1);
    GalerkinConfig cfg{0.2, 1e-4, 1e-3, 2};
    GalerkinSolution sol = solve_galerkin(h0, basis, 4, galerkin_data_free(north(g)), cfg);
    const std::string csv = sol.to_csv(basis);
    CHECK(csv.find("t,c0x") == 0);
    CHECK(csv.find("\n") != std::string::npos);
}
