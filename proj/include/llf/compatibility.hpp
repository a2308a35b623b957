#pragma once

#include <string>
#include <vector>

#include "llf/field.hpp"
#include "llf/jet.hpp"

namespace llf {

/// Truncated time-Taylor coefficients of the flow at t = 0, computed from the
/// initial data alone. Extrinsic flavor holds V_j = d_t^j u|_0; intrinsic
/// flavor holds v_j(0) = grad_t^j u|_0.
struct TimeJet {
    int order = 0;
    bool intrinsic = false;
    std::vector<Vec3Field> coeffs;

    const Vec3Field& operator[](int j) const { return coeffs[j]; }
};

inline constexpr int kMaxJetOrder = 6;

/// V_0 = u0, V_m = sum_{i+j=m-1} C(m-1,i) (V_i x Lap V_j). Rejects k > 6
/// (iterated stencils outgrow desk-scale resolution beyond that).
TimeJet extrinsic_jet(const SphereField& u0, int k);

/// Converts an extrinsic jet to the covariant coefficients v_j(0) by jet
/// differentiation with grad_t = d_t + <d_t u, .> u. Every v_j(0), j >= 1, is
/// tangent to u0.
TimeJet intrinsic_jet(const TimeJet& ext);

struct CompatOrderResult {
    double extrinsic_residual = 0.0;  // max over boundary nodes of |d_nu V_j|
    double intrinsic_residual = 0.0;  // max over boundary nodes of |grad_nu v_j(0)|
    double extrinsic_scale = 1.0;     // derivative magnitude used for pass/fail
    double intrinsic_scale = 1.0;
    double tolerance = 0.0;  // effective threshold: base tolerance * scale
    bool extrinsic_pass = false;
    bool intrinsic_pass = false;
    bool pass = false;  // both families
};

struct CompatReport {
    int order = 0;
    double tolerance = 0.0;  // base (resolution-matched) tolerance
    double grid_spacing = 0.0;
    std::vector<CompatOrderResult> per_order;  // j = 0..order

    bool all_pass() const;
    std::string to_json() const;
    std::string to_table() const;
};

/// Resolution-matched default: max(10 h^2, 1e-8).
double default_compat_tolerance(const Grid& g);

/// Audits the k-th order Neumann compatibility conditions of u0: the
/// extrinsic conditions d_nu V_j = 0 and the intrinsic conditions
/// grad_nu v_j(0) = d_nu v_j + <d_nu u0, v_j> u0 = 0, with one-sided boundary
/// stencils. Pass/fail compares residuals against tol scaled by the field's
/// own derivative magnitude. Rejects periodic grids.
CompatReport check_compat(const SphereField& u0, int k, double tol);
CompatReport check_compat(const SphereField& u0, int k);

struct EquivalenceAudit {
    CompatReport report;
    bool verdicts_agree = false;  // per-order extrinsic/intrinsic verdicts match
    double max_ratio = 0.0;       // largest residual ratio between the families
};

/// Tests that the extrinsic and intrinsic compatibility verdicts coincide.
EquivalenceAudit equivalence_audit(const SphereField& u0, int k);

/// max over boundary nodes and faces of the covariant normal derivative
/// |d_nu f + <d_nu u, f> u|; pass u = nullptr for the plain derivative.
double boundary_covariant_flux(const Vec3Field& f, const SphereField* u);

}  // namespace llf
