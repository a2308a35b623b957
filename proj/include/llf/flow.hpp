#pragma once

#include <optional>
#include <string>
#include <vector>

#include "llf/field.hpp"
#include "llf/operators.hpp"

namespace llf {

enum class Scheme { rk4_project, heun_project };

struct FlowConfig {
    double epsilon = 0.0;  // in [0,1)
    double dt = 1e-4;
    double t_end = 0.1;
    Scheme scheme = Scheme::rk4_project;
    bool renormalize = true;
    int record_every = 1;
    std::vector<int> sobolev_orders;  // extra monitored norms per sample

    void validate(const Grid& g) const;
};

/// Explicit-scheme step-size rail: dt <= 0.2 h^2 / (1 + 4 eps).
double stability_bound(const Grid& g, double epsilon);

struct Trajectory {
    std::vector<double> times;
    std::vector<SphereField> states;
    EnergyTrace trace;
    std::string compat_warning;             // order-0 compatibility, warn only
    std::optional<std::string> halt_reason; // blow-up detector
    double halt_time = 0.0;

    const SphereField& final_state() const { return states.back(); }
};

/// (eps I + u x) tau(u) with the tension projected onto the tangent plane, so
/// the motion is pointwise orthogonal to u up to rounding.
Vec3Field flow_rhs(const SphereField& u, double epsilon);

/// Low-level driver: nsteps explicit steps of the flow, direction +1/-1,
/// optional pointwise renormalization after each full step.
Vec3Field integrate_flow(const Vec3Field& u0, double epsilon, double dt, std::int64_t nsteps,
                         Scheme scheme, bool renormalize, double direction);

/// Time integration with trace recording and a blow-up halt when max|grad u|
/// exceeds 1000x its initial magnitude.
Trajectory evolve(const SphereField& u0, const FlowConfig& cfg);

/// max over interior samples of |dE/dt + eps * tension_sq| (centered time
/// differences of the recorded trace), normalized by the initial tension_sq.
double dissipation_residual(const Trajectory& traj, double epsilon);

struct EpsSweepEntry {
    double epsilon = 0.0;
    bool ok = false;
    std::string error;
};

struct EpsSweepReport {
    std::vector<EpsSweepEntry> entries;
    /// distances[i] = max over shared sample times of the nodal L2 distance
    /// between the runs at eps_list[i] and eps_list[i+1].
    std::vector<double> distances;

    bool strictly_decreasing() const;
};

/// Solves the flow for each epsilon on a shared grid/dt and reports pairwise
/// trajectory distances; per-entry failures are recorded and the sweep goes on.
EpsSweepReport eps_sweep(const SphereField& u0, const std::vector<double>& eps_list,
                         const FlowConfig& cfg);

/// Traveling helical wave u = (sin a cos phi, sin a sin phi, cos a),
/// phi = kappa x + omega t, kappa = 2 pi k/L, omega = -kappa^2 cos a.
/// Exact solution of the eps = 0 flow in periodic mode (1D only).
SphereField helical_exact(const Grid& g, int k_mode, double alpha, double t);

/// Same wave with the dispersion of the second-order stencil,
/// omega_h = -kappa_h^2 cos a, kappa_h^2 = 4 sin^2(kappa h/2)/h^2. This is an
/// exact solution of the semidiscrete system, which isolates time error.
SphereField helical_discrete(const Grid& g, int k_mode, double alpha, double t);

/// Pointwise d_t u of the helical wave (for PDE-residual checks).
Vec3Field helical_time_derivative(const Grid& g, int k_mode, double alpha, double t);

}  // namespace llf
