#include "llf/flow.hpp"

#include <cmath>
#include <map>
#include <numbers>

#include "llf/compatibility.hpp"

namespace llf {

using kernels::for_each_node;

namespace {

constexpr double kPi = std::numbers::pi;

// Tension of a not-necessarily-unit field (used at RK stages), with the
// component along v removed so the motion stays orthogonal to v.
void rhs_raw(const Vec3Field& v, double epsilon, Vec3Field& out) {
    const Grid& g = v.grid();
    Vec3Field tau(g);
    kernels::laplacian3(g, v.raw(), tau.raw());
    ScalarField gsq(g);
    kernels::gradient_sq3(g, v.raw(), gsq.data().data());
    for_each_node(g.node_count(), [&](std::int64_t n) {
        const double* vv = v.node(n);
        double* tv = tau.node(n);
        double* ov = out.node(n);
        for (int c = 0; c < 3; ++c) tv[c] += gsq[n] * vv[c];
        double cr[3];
        kernels::cross3(vv, tau.node(n), cr);
        if (epsilon != 0.0) {
            const double v2 = kernels::dot3(vv, vv);
            const double proj = kernels::dot3(tv, vv) / v2;
            for (int c = 0; c < 3; ++c) ov[c] = epsilon * (tv[c] - proj * vv[c]) + cr[c];
        } else {
            for (int c = 0; c < 3; ++c) ov[c] = cr[c];
        }
    });
}

void renormalize_nodes(Vec3Field& v) {
    for_each_node(v.grid().node_count(), [&](std::int64_t n) {
        double* vv = v.node(n);
        const double inv = 1.0 / kernels::norm3(vv);
        for (int c = 0; c < 3; ++c) vv[c] *= inv;
    });
}

double max_gradient(const SphereField& u) {
    ScalarField gsq = gradient_sq(u.field());
    return std::sqrt(gsq.max_abs());
}

}  // namespace

double stability_bound(const Grid& g, double epsilon) {
    const double h = g.min_spacing();
    return 0.2 * h * h / (1.0 + 4.0 * epsilon);
}

void FlowConfig::validate(const Grid& g) const {
    if (!(epsilon >= 0.0 && epsilon < 1.0))
        throw std::invalid_argument("flow: epsilon must lie in [0,1)");
    if (!(dt > 0.0) || !(t_end > 0.0))
        throw std::invalid_argument("flow: dt and t_end must be positive");
    if (record_every < 1) throw std::invalid_argument("flow: record_every must be >= 1");
    const double bound = stability_bound(g, epsilon);
    if (dt > bound)
        throw std::invalid_argument("flow: CFL violation, dt = " + std::to_string(dt) +
                                    " exceeds stability bound " + std::to_string(bound));
}

Vec3Field flow_rhs(const SphereField& u, double epsilon) {
    Vec3Field out(u.grid());
    rhs_raw(u.field(), epsilon, out);
    return out;
}

Vec3Field integrate_flow(const Vec3Field& u0, double epsilon, double dt, std::int64_t nsteps,
                         Scheme scheme, bool renormalize, double direction) {
    const Grid& g = u0.grid();
    Vec3Field u = u0;
    Vec3Field k1(g), k2(g), k3(g), k4(g), stage(g);
    const double sdt = direction * dt;
    for (std::int64_t s = 0; s < nsteps; ++s) {
        if (scheme == Scheme::rk4_project) {
            rhs_raw(u, epsilon, k1);
            stage = u;
            stage.axpy(0.5 * sdt, k1);
            rhs_raw(stage, epsilon, k2);
            stage = u;
            stage.axpy(0.5 * sdt, k2);
            rhs_raw(stage, epsilon, k3);
            stage = u;
            stage.axpy(sdt, k3);
            rhs_raw(stage, epsilon, k4);
            for_each_node(3 * g.node_count(), [&](std::int64_t i) {
                u.data()[i] += sdt / 6.0 *
                               (k1.data()[i] + 2.0 * k2.data()[i] + 2.0 * k3.data()[i] +
                                k4.data()[i]);
            });
        } else {
            rhs_raw(u, epsilon, k1);
            stage = u;
            stage.axpy(sdt, k1);
            rhs_raw(stage, epsilon, k2);
            for_each_node(3 * g.node_count(), [&](std::int64_t i) {
                u.data()[i] += 0.5 * sdt * (k1.data()[i] + k2.data()[i]);
            });
        }
        if (renormalize) renormalize_nodes(u);
    }
    return u;
}

Trajectory evolve(const SphereField& u0, const FlowConfig& cfg) {
    const Grid& g = u0.grid();
    cfg.validate(g);

    Trajectory traj;
    if (g.neumann()) {
        const double flux = max_boundary_flux(u0.field());
        const double tol = default_compat_tolerance(g);
        if (flux > tol)
            traj.compat_warning = "initial data violates order-0 compatibility (boundary flux " +
                                  std::to_string(flux) + ")";
    }

    const std::int64_t nsteps = std::max<std::int64_t>(1, std::llround(cfg.t_end / cfg.dt));
    const double grad_scale = std::max(max_gradient(u0), 1e-6);

    auto record = [&](double t, const SphereField& u) {
        traj.times.push_back(t);
        std::map<int, double> sob;
        for (int k : cfg.sobolev_orders) sob[k] = sobolev_norm(u.field(), k);
        traj.trace.append(t, dirichlet_energy(u), tension_sq_integral(u), u.unit_drift(), sob);
        traj.states.push_back(u);
    };

    record(0.0, u0);
    Vec3Field u = u0.field();
    for (std::int64_t s = 1; s <= nsteps; ++s) {
        u = integrate_flow(u, cfg.epsilon, cfg.dt, 1, cfg.scheme, cfg.renormalize, +1.0);
        const bool sample = (s % cfg.record_every == 0) || s == nsteps;
        if (!sample) continue;
        const double t = s * cfg.dt;
        if (!cfg.renormalize) {
            // Check the raw field before wrapping it, so an unstable run ends
            // in a diagnostic instead of a constructor failure.
            const double drift = kernels::blocked_max(g.node_count(), [&](std::int64_t n) {
                return std::abs(kernels::norm3(u.node(n)) - 1.0);
            });
            if (drift > 0.4) {
                traj.halt_reason = "blow-up detector: unit-norm drift exceeded 0.4 "
                                   "without renormalization";
                traj.halt_time = t;
                break;
            }
        }
        // Renormalized states satisfy the unit invariant to rounding; without
        // renormalization use a loose bound so drift can be observed.
        SphereField us(u, cfg.renormalize ? SphereField::kDefaultUnitTol : 0.5);
        record(t, us);
        if (max_gradient(us) > 1e3 * grad_scale) {
            traj.halt_reason = "blow-up detector: max|grad u| exceeded 1000x its initial value";
            traj.halt_time = t;
            break;
        }
    }
    return traj;
}

double dissipation_residual(const Trajectory& traj, double epsilon) {
    const auto& tr = traj.trace;
    if (tr.times.size() < 3)
        throw std::invalid_argument("dissipation_residual: need at least 3 samples");
    const double scale = std::max(tr.tension_sq.front(), 1e-30);
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < tr.times.size(); ++i) {
        const double de = (tr.dirichlet[i + 1] - tr.dirichlet[i - 1]) /
                          (tr.times[i + 1] - tr.times[i - 1]);
        worst = std::max(worst, std::abs(de + epsilon * tr.tension_sq[i]));
    }
    return worst / scale;
}

bool EpsSweepReport::strictly_decreasing() const {
    for (std::size_t i = 0; i + 1 < distances.size(); ++i)
        if (!(distances[i] > distances[i + 1])) return false;
    return true;
}

EpsSweepReport eps_sweep(const SphereField& u0, const std::vector<double>& eps_list,
                         const FlowConfig& cfg) {
    for (std::size_t i = 0; i + 1 < eps_list.size(); ++i)
        if (!(eps_list[i] > eps_list[i + 1]))
            throw std::invalid_argument("eps_sweep: eps_list must be strictly decreasing");

    EpsSweepReport report;
    std::vector<std::optional<Trajectory>> runs;
    for (double eps : eps_list) {
        EpsSweepEntry entry;
        entry.epsilon = eps;
        try {
            FlowConfig c = cfg;
            c.epsilon = eps;
            Trajectory t = evolve(u0, c);
            if (t.halt_reason) {
                entry.error = *t.halt_reason;
                runs.emplace_back(std::nullopt);
            } else {
                entry.ok = true;
                runs.emplace_back(std::move(t));
            }
        } catch (const std::exception& e) {
            entry.error = e.what();
            runs.emplace_back(std::nullopt);
        }
        report.entries.push_back(std::move(entry));
    }
    for (std::size_t i = 0; i + 1 < runs.size(); ++i) {
        if (!runs[i] || !runs[i + 1]) continue;
        const auto& a = *runs[i];
        const auto& b = *runs[i + 1];
        const std::size_t m = std::min(a.states.size(), b.states.size());
        double d = 0.0;
        for (std::size_t s = 0; s < m; ++s)
            d = std::max(d, a.states[s].field().l2_distance(b.states[s].field()));
        report.distances.push_back(d);
    }
    return report;
}

namespace {

SphereField helical(const Grid& g, int k_mode, double alpha, double t, bool discrete) {
    if (g.neumann() || g.dim() != 1)
        throw std::invalid_argument("helical wave: needs a 1D periodic grid");
    const double L = g.extent(0);
    const double kappa = 2.0 * kPi * k_mode / L;
    double k2 = kappa * kappa;
    if (discrete) {
        const double h = g.spacing(0);
        const double s = std::sin(0.5 * kappa * h);
        k2 = 4.0 * s * s / (h * h);
    }
    const double omega = -k2 * std::cos(alpha);
    return SphereField(Vec3Field::from_function(g, [&](const double* x, double* out) {
        const double phi = kappa * x[0] + omega * t;
        out[0] = std::sin(alpha) * std::cos(phi);
        out[1] = std::sin(alpha) * std::sin(phi);
        out[2] = std::cos(alpha);
    }));
}

}  // namespace

SphereField helical_exact(const Grid& g, int k_mode, double alpha, double t) {
    return helical(g, k_mode, alpha, t, false);
}

SphereField helical_discrete(const Grid& g, int k_mode, double alpha, double t) {
    return helical(g, k_mode, alpha, t, true);
}

Vec3Field helical_time_derivative(const Grid& g, int k_mode, double alpha, double t) {
    if (g.neumann() || g.dim() != 1)
        throw std::invalid_argument("helical wave: needs a 1D periodic grid");
    const double L = g.extent(0);
    const double kappa = 2.0 * kPi * k_mode / L;
    const double omega = -kappa * kappa * std::cos(alpha);
    return Vec3Field::from_function(g, [&](const double* x, double* out) {
        const double phi = kappa * x[0] + omega * t;
        out[0] = -std::sin(alpha) * std::sin(phi) * omega;
        out[1] = std::sin(alpha) * std::cos(phi) * omega;
        out[2] = 0.0;
    });
}

}  // namespace llf
