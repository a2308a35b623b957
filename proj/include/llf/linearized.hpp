#pragma once

#include <optional>
#include <string>
#include <vector>

#include "llf/compatibility.hpp"
#include "llf/field.hpp"
#include "llf/flow.hpp"

namespace llf {

/// Uniformly sampled background trajectory for the linear evolution of
/// omega ~ v_k: the states u(t) and the first covariant derivative
/// v_1(t) = u x tau(u) at each sample. Coefficients at substep times are
/// derived from the cubically interpolated state.
class Background {
public:
    static Background from_trajectory(const Trajectory& traj);

    double dt_sample() const { return dt_; }
    double t_final() const { return times_.back(); }
    std::size_t samples() const { return times_.size(); }
    double time(std::size_t i) const { return times_[i]; }
    const SphereField& state(std::size_t i) const { return states_[i]; }
    const TangentField& v1(std::size_t i) const { return v1_[i]; }

    /// Second covariant coefficient v_2 at a sample, by jet differentiation.
    Vec3Field v2(std::size_t i) const;

    /// State interpolated to an arbitrary time (cubic Lagrange over the four
    /// nearest samples, renormalized pointwise).
    SphereField state_at(double t) const;

private:
    std::vector<double> times_;
    std::vector<SphereField> states_;
    std::vector<TangentField> v1_;
    double dt_ = 0.0;
};

Background assemble_background(const Trajectory& traj);

/// Remainder source of the omega-equation; identically zero for k = 1 and a
/// tangent section of u*(T S^2) in general.
struct SourceRk {
    int k = 1;
    std::vector<double> times;
    std::vector<Vec3Field> values;

    double max_tangency_drift(const Background& bg) const;
};

/// Evaluates R_k along the background by jet expansion of the defining
/// identity (k <= 3).
SourceRk assemble_Rk(const Background& bg, int k);

/// Frozen-time coefficients of the linear equation at one background slice.
struct BackgroundSlice {
    SphereField u;
    Vec3Field lap_u;
    ScalarField gsq;
    Vec3Field v1;
    std::vector<Vec3Field> du;  // per axis
};

BackgroundSlice background_slice(const SphereField& u);

/// Right-hand side of the linearized evolution
///   d_t w = -<w,v1> u + eps(Lap w + 2<du,dw>u + <Lap u,w>u + |du|^2 w)
///           + u x (Lap w + |du|^2 w) + (eps I + u x) r
/// for a tangent source r (pass nullptr for r = 0).
Vec3Field linearized_rhs(const Vec3Field& omega, const BackgroundSlice& s, double epsilon,
                         const Vec3Field* r);

/// One explicit RK4 step from time t with background and source interpolated
/// to the substep times. No renormalization: tangency is measured, never
/// enforced.
Vec3Field step_linearized(const Vec3Field& omega, const Background& bg, const SourceRk* rk,
                          double t, double epsilon, double dt);

struct VkConfig {
    double epsilon = 0.0;
    double dt = 1e-4;
    int record_every = 1;
    /// Evaluate R_k by jets at substep times (default) or by cubic
    /// interpolation of a supplied series.
    const SourceRk* source_override = nullptr;
};

struct VkDiagnostics {
    std::vector<double> times;
    std::vector<double> tangency;       // max |<omega, u>| per sample
    std::vector<double> boundary_flux;  // max |d_nu omega| per sample
    std::vector<double> vk_defect;      // L2 distance to the oracle, k <= 2
    std::string compat_warning;

    double max_tangency() const;
    double max_defect() const;
};

struct VkSolution {
    std::vector<double> times;
    std::vector<Vec3Field> omega;
    VkDiagnostics diagnostics;
};

/// Solves the initial-Neumann problem for omega ~ v_k along the background,
/// starting from omega(0) = v_k(0) of the intrinsic jet. Diagnostics compare
/// against u x tau(u) (k = 1) or the finite-difference covariant derivative
/// of the v_1 series (k = 2).
VkSolution solve_vk(const TimeJet& intrinsic, const Background& bg, int k, const VkConfig& cfg);

/// Same solver from an arbitrary initial section (superposition tests).
VkSolution solve_linearized(const Vec3Field& omega0, const Background& bg, int k,
                            const VkConfig& cfg);

/// Per-sample max |<omega, u>| along a solution.
std::vector<double> tangency_series(const std::vector<double>& times,
                                    const std::vector<Vec3Field>& omega, const Background& bg);

}  // namespace llf
