#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "llf/field.hpp"

namespace llf {

/// Second-order centered Laplacian with mirror ghosts (neumann grids) or wrap
/// ghosts (periodic grids). Self-adjoint and negative-semidefinite w.r.t. the
/// trapezoidal inner product; annihilates constants.
Vec3Field laplacian(const Vec3Field& f);

/// First derivative along one axis (centered interior, one-sided second-order
/// stencils at neumann boundaries, wrap on periodic grids).
Vec3Field gradient_axis(const Vec3Field& f, int axis);

/// Nodal |grad f|^2.
ScalarField gradient_sq(const Vec3Field& f);

/// Tension field tau(u) = Lap u + |grad u|^2 u. Analytically tangent to u;
/// the discrete tangency drift is reported, not repaired.
TangentField tension(const SphereField& u);

/// Tangential projection w - <w,u> u. Idempotent, exactly tangent to rounding.
TangentField project_tangent(const Vec3Field& w, const SphereField& u);

/// <X1 x X2, X3> for vectors tangent to the sphere at p; vanishes identically.
/// Rejects |p| != 1 or non-tangent X_i beyond tolerance 1e-8.
double triple_product_check(const double p[3], const double x1[3], const double x2[3],
                            const double x3[3]);

/// Dirichlet energy E = 1/2 * trapz |grad u|^2.
double dirichlet_energy(const SphereField& u);

/// trapz |tau(u)|^2.
double tension_sq_integral(const SphereField& u);

/// Edge-based bilinear gradient form; equals -<laplacian f, g> exactly.
double dirichlet_form(const Vec3Field& f, const Vec3Field& g);

/// Trapezoidal inner product of two fields.
double inner(const Vec3Field& f, const Vec3Field& g);

/// max over boundary nodes and faces of |one-sided normal derivative|.
double max_boundary_flux(const Vec3Field& f);

/// Derivative magnitude the discrete Neumann checks normalize against: the
/// one-sided stencil truncation error on compatible data scales with the
/// third derivative.
double neumann_check_scale(const Vec3Field& f);

/// Discrete Sobolev norm of order k <= 5 in the equivalent-norm convention:
///   k = 2m:   ||f||_L2 + ||Lap^m f||_L2            (m >= 1)
///   k = 2m+1: ||f||_L2 + [m>=1] ||Lap^m f||_L2 + ||grad(Lap^m f)||_L2
/// reducing to the trapezoidal L2 norm at k = 0. Orders >= 2 require the
/// discrete Neumann mirror condition on neumann grids (the equivalence fails
/// without it); violations are rejected.
double sobolev_norm(const Vec3Field& f, int order);

/// Time series of the monitored quantities along a run.
struct EnergyTrace {
    std::vector<double> times;
    std::vector<double> dirichlet;
    std::vector<double> tension_sq;
    std::vector<double> unit_drift;
    std::map<int, std::vector<double>> sobolev;  // order -> values

    void append(double t, double e, double tsq, double drift,
                const std::map<int, double>& sob = {});
    std::string to_csv() const;
};

}  // namespace llf
