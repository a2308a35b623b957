#pragma once

#include <vector>

#include "llf/field.hpp"
#include "llf/operators.hpp"

// Truncated time-Taylor algebra along the flow du/dt = u x Lap u. A series
// stores derivative coefficients (m-th entry = m-th time derivative, no
// factorial scaling), so pointwise products combine with binomial weights and
// d/dt is an index shift. The covariant time derivative on sections of
// u*(T S^2) is grad_t w = d_t w + <d_t u, w> u.

namespace llf::jet {

class SeriesScalar {
public:
    explicit SeriesScalar(std::vector<ScalarField> coef) : coef_(std::move(coef)) {}
    int order() const { return static_cast<int>(coef_.size()) - 1; }
    const ScalarField& coef(int m) const { return coef_[m]; }
    ScalarField& coef(int m) { return coef_[m]; }

private:
    std::vector<ScalarField> coef_;
};

class SeriesVec {
public:
    explicit SeriesVec(std::vector<Vec3Field> coef) : coef_(std::move(coef)) {}
    int order() const { return static_cast<int>(coef_.size()) - 1; }
    const Vec3Field& coef(int m) const { return coef_[m]; }
    Vec3Field& coef(int m) { return coef_[m]; }
    std::vector<Vec3Field> take() && { return std::move(coef_); }

private:
    std::vector<Vec3Field> coef_;
};

SeriesVec time_derivative(const SeriesVec& s);
SeriesVec add(const SeriesVec& a, const SeriesVec& b);
SeriesScalar dot(const SeriesVec& a, const SeriesVec& b);
SeriesVec cross(const SeriesVec& a, const SeriesVec& b);
SeriesVec scale(const SeriesScalar& s, const SeriesVec& a);
SeriesVec apply_laplacian(const SeriesVec& a);

/// Series of |grad u|^2 built from the same per-axis stencils as gradient_sq.
SeriesScalar gradsq_series(const SeriesVec& u);

/// Series of the tension field tau(u) = Lap u + |grad u|^2 u.
SeriesVec tau_series(const SeriesVec& u);

/// grad_t w along the base series u.
SeriesVec covariant_derivative(const SeriesVec& w, const SeriesVec& u);

/// Extrinsic Taylor coefficients U_m = d_t^m u|_0 of the flow starting at u0,
/// via the recursion U_m = sum_{i+j=m-1} C(m-1,i) U_i x Lap U_j.
SeriesVec extrinsic_series(const SphereField& u0, int k);

/// Intrinsic coefficients v_j(0) = grad_t^j u|_0 for j = 0..k, computed by
/// repeated covariant differentiation of the extrinsic series.
std::vector<Vec3Field> intrinsic_coefficients(const SeriesVec& u);

/// Remainder R_k of the evolution equation for v_k: the difference between
/// grad_t^k tau(u)|_0 and the principal part
///   Lap v_k + 2<grad u, grad v_k> u + <Lap u, v_k> u + |grad u|^2 v_k
/// evaluated at t = 0. Identically zero for k = 1.
Vec3Field remainder_rk(const SphereField& u0, int k);

/// Principal part above for a given pair (u, w); shared with the linearized
/// solver.
Vec3Field principal_part(const SphereField& u, const Vec3Field& w);

}  // namespace llf::jet
