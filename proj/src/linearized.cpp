#include "llf/linearized.hpp"

#include <cmath>

#include "llf/jet.hpp"
#include "llf/operators.hpp"

namespace llf {

using kernels::for_each_node;

namespace {

// Cubic Lagrange interpolation over the four samples nearest to t on a
// uniform time grid. Falls back to the available window near the ends.
struct CubicStencil {
    std::size_t base = 0;  // first of four samples
    double w[4] = {0, 0, 0, 0};
};

CubicStencil cubic_stencil(const std::vector<double>& times, double t) {
    const std::size_t n = times.size();
    if (n < 4) throw std::invalid_argument("background: need at least 4 samples");
    const double dt = times[1] - times[0];
    double pos = (t - times[0]) / dt;
    std::int64_t i = static_cast<std::int64_t>(std::floor(pos));
    std::int64_t base = i - 1;
    base = std::max<std::int64_t>(0, std::min<std::int64_t>(base, static_cast<std::int64_t>(n) - 4));
    CubicStencil st;
    st.base = static_cast<std::size_t>(base);
    const double s = pos - base;  // in node units relative to the window start
    for (int j = 0; j < 4; ++j) {
        double w = 1.0;
        for (int m = 0; m < 4; ++m) {
            if (m == j) continue;
            w *= (s - m) / (j - m);
        }
        st.w[j] = w;
    }
    return st;
}

Vec3Field interpolate(const std::vector<double>& times, const std::vector<SphereField>& states,
                      double t) {
    CubicStencil st = cubic_stencil(times, t);
    const Grid& g = states[0].grid();
    Vec3Field out(g);
    for (int j = 0; j < 4; ++j) {
        const Vec3Field& f = states[st.base + j].field();
        const double w = st.w[j];
        for_each_node(3 * g.node_count(),
                      [&](std::int64_t i) { out.data()[i] += w * f.data()[i]; });
    }
    return out;
}

Vec3Field interpolate_fields(const std::vector<double>& times, const std::vector<Vec3Field>& vals,
                             double t) {
    CubicStencil st = cubic_stencil(times, t);
    const Grid& g = vals[0].grid();
    Vec3Field out(g);
    for (int j = 0; j < 4; ++j) {
        const Vec3Field& f = vals[st.base + j];
        const double w = st.w[j];
        for_each_node(3 * g.node_count(),
                      [&](std::int64_t i) { out.data()[i] += w * f.data()[i]; });
    }
    return out;
}

TangentField v1_of(const SphereField& u) {
    TangentField tau = tension(u);
    const Grid& g = u.grid();
    Vec3Field v1(g);
    for_each_node(g.node_count(), [&](std::int64_t n) {
        kernels::cross3(u.node(n), tau.values().node(n), v1.node(n));
    });
    return TangentField::checked(std::move(v1), u);
}

}  // namespace

Background Background::from_trajectory(const Trajectory& traj) {
    if (traj.states.size() < 4)
        throw std::invalid_argument("background: trajectory needs at least 4 samples");
    Background bg;
    bg.times_ = traj.times;
    bg.dt_ = traj.times[1] - traj.times[0];
    for (std::size_t i = 1; i + 1 < traj.times.size(); ++i) {
        const double step = traj.times[i + 1] - traj.times[i];
        if (std::abs(step - bg.dt_) > 1e-12 * std::max(1.0, bg.dt_))
            throw std::invalid_argument("background: trajectory sampling must be uniform");
    }
    bg.states_ = traj.states;
    for (const SphereField& u : bg.states_) bg.v1_.push_back(v1_of(u));
    return bg;
}

Background assemble_background(const Trajectory& traj) {
    return Background::from_trajectory(traj);
}

Vec3Field Background::v2(std::size_t i) const {
    jet::SeriesVec series = jet::extrinsic_series(states_[i], 2);
    std::vector<Vec3Field> v = jet::intrinsic_coefficients(series);
    return v[2];
}

SphereField Background::state_at(double t) const {
    Vec3Field raw = interpolate(times_, states_, t);
    for_each_node(raw.grid().node_count(), [&](std::int64_t n) {
        double* v = raw.node(n);
        const double inv = 1.0 / kernels::norm3(v);
        for (int c = 0; c < 3; ++c) v[c] *= inv;
    });
    return SphereField(std::move(raw));
}

double SourceRk::max_tangency_drift(const Background& bg) const {
    double worst = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        // Samples of the source series align with background samples.
        const double scale = std::max(1.0, values[i].max_norm());
        worst = std::max(worst, tangency_drift(values[i], bg.state(i)) / scale);
    }
    return worst;
}

SourceRk assemble_Rk(const Background& bg, int k) {
    if (k < 1 || k > 3)
        throw std::invalid_argument("assemble_Rk: supported orders are 1..3 at desk scale");
    SourceRk rk;
    rk.k = k;
    for (std::size_t i = 0; i < bg.samples(); ++i) {
        rk.times.push_back(bg.time(i));
        rk.values.push_back(jet::remainder_rk(bg.state(i), k));
    }
    return rk;
}

BackgroundSlice background_slice(const SphereField& u) {
    BackgroundSlice s{u, laplacian(u.field()), gradient_sq(u.field()), Vec3Field(u.grid()), {}};
    const Grid& g = u.grid();
    // v1 = u x tau(u) = u x Lap u (the |du|^2 u part drops out of the cross).
    for_each_node(g.node_count(), [&](std::int64_t n) {
        kernels::cross3(u.node(n), s.lap_u.node(n), s.v1.node(n));
    });
    for (int a = 0; a < g.dim(); ++a) s.du.push_back(gradient_axis(u.field(), a));
    return s;
}

Vec3Field linearized_rhs(const Vec3Field& omega, const BackgroundSlice& s, double epsilon,
                         const Vec3Field* r) {
    const Grid& g = omega.grid();
    Vec3Field lap_w = laplacian(omega);
    std::vector<Vec3Field> dw;
    if (epsilon != 0.0)
        for (int a = 0; a < g.dim(); ++a) dw.push_back(gradient_axis(omega, a));

    Vec3Field out(g);
    for_each_node(g.node_count(), [&](std::int64_t n) {
        const double* uv = s.u.node(n);
        const double* wv = omega.node(n);
        const double* lw = lap_w.node(n);
        double* ov = out.node(n);

        // u x (Lap w + |du|^2 w)  [+ u x r]
        double tangent_part[3];
        for (int c = 0; c < 3; ++c) tangent_part[c] = lw[c] + s.gsq[n] * wv[c];
        if (r != nullptr)
            for (int c = 0; c < 3; ++c) tangent_part[c] += r->node(n)[c];
        double cr[3];
        kernels::cross3(uv, tangent_part, cr);
        for (int c = 0; c < 3; ++c) ov[c] = cr[c];

        // -<w, v1> u
        const double wv1 = kernels::dot3(wv, s.v1.node(n));
        for (int c = 0; c < 3; ++c) ov[c] -= wv1 * uv[c];

        if (epsilon != 0.0) {
            double cross_grad = 0.0;
            for (std::size_t a = 0; a < s.du.size(); ++a)
                cross_grad += kernels::dot3(s.du[a].node(n), dw[a].node(n));
            const double lu_w = kernels::dot3(s.lap_u.node(n), wv);
            for (int c = 0; c < 3; ++c) {
                double diff = lw[c] + 2.0 * cross_grad * uv[c] + lu_w * uv[c] + s.gsq[n] * wv[c];
                if (r != nullptr) diff += r->node(n)[c];
                ov[c] += epsilon * diff;
            }
        }
    });
    return out;
}

namespace {

struct SourceEval {
    const Background* bg;
    int k;
    const SourceRk* series;  // optional override

    std::optional<Vec3Field> at(const SphereField& u_slice, double t) const {
        if (series != nullptr) return interpolate_fields(series->times, series->values, t);
        if (k <= 1) return std::nullopt;  // R_1 = 0
        return jet::remainder_rk(u_slice, k);
    }
};

Vec3Field rk4_step(const Vec3Field& omega, const Background& bg, const SourceEval& src, double t,
                   double epsilon, double dt) {
    auto rhs_at = [&](const Vec3Field& w, double ts) {
        BackgroundSlice s = background_slice(bg.state_at(ts));
        std::optional<Vec3Field> r = src.at(s.u, ts);
        return linearized_rhs(w, s, epsilon, r ? &*r : nullptr);
    };
    Vec3Field k1 = rhs_at(omega, t);
    Vec3Field stage = omega;
    stage.axpy(0.5 * dt, k1);
    Vec3Field k2 = rhs_at(stage, t + 0.5 * dt);
    stage = omega;
    stage.axpy(0.5 * dt, k2);
    Vec3Field k3 = rhs_at(stage, t + 0.5 * dt);
    stage = omega;
    stage.axpy(dt, k3);
    Vec3Field k4 = rhs_at(stage, t + dt);
    Vec3Field out = omega;
    const Grid& g = omega.grid();
    for_each_node(3 * g.node_count(), [&](std::int64_t i) {
        out.data()[i] += dt / 6.0 *
                         (k1.data()[i] + 2.0 * k2.data()[i] + 2.0 * k3.data()[i] + k4.data()[i]);
    });
    return out;
}

}  // namespace

Vec3Field step_linearized(const Vec3Field& omega, const Background& bg, const SourceRk* rk,
                          double t, double epsilon, double dt) {
    const double bound = stability_bound(omega.grid(), epsilon);
    if (dt > bound)
        throw std::invalid_argument("step_linearized: CFL violation, dt exceeds " +
                                    std::to_string(bound));
    SourceEval src{&bg, rk ? rk->k : 1, rk};
    return rk4_step(omega, bg, src, t, epsilon, dt);
}

double VkDiagnostics::max_tangency() const {
    double m = 0.0;
    for (double v : tangency) m = std::max(m, v);
    return m;
}
double VkDiagnostics::max_defect() const {
    double m = 0.0;
    for (double v : vk_defect) m = std::max(m, v);
    return m;
}

VkSolution solve_linearized(const Vec3Field& omega0, const Background& bg, int k,
                            const VkConfig& cfg) {
    if (k < 1 || k > 3) throw std::invalid_argument("solve_vk: supported orders are 1..3");
    const Grid& g = omega0.grid();
    const double bound = stability_bound(g, cfg.epsilon);
    if (cfg.dt > bound)
        throw std::invalid_argument("solve_vk: CFL violation, dt exceeds " +
                                    std::to_string(bound));

    SourceEval src{&bg, k, cfg.source_override};
    VkSolution sol;

    const double t_end = bg.t_final();
    const std::int64_t nsteps = std::max<std::int64_t>(1, std::llround(t_end / cfg.dt));

    auto record = [&](double t, const Vec3Field& w) {
        sol.times.push_back(t);
        sol.omega.push_back(w);
        const SphereField u = bg.state_at(t);
        sol.diagnostics.times.push_back(t);
        sol.diagnostics.tangency.push_back(tangency_drift(w, u));
        sol.diagnostics.boundary_flux.push_back(
            g.neumann() ? max_boundary_flux(w) : 0.0);
        if (k == 1) {
            BackgroundSlice s = background_slice(u);
            sol.diagnostics.vk_defect.push_back(w.l2_distance(s.v1));
        }
    };

    Vec3Field w = omega0;
    record(0.0, w);
    for (std::int64_t s = 1; s <= nsteps; ++s) {
        const double t = (s - 1) * cfg.dt;
        w = rk4_step(w, bg, src, t, cfg.epsilon, cfg.dt);
        if (s % cfg.record_every == 0 || s == nsteps) record(s * cfg.dt, w);
    }

    // k = 2 oracle: finite-difference covariant derivative of the v1 series,
    // grad_t v1 = d_t v1 + <v1, v1> u, compared at matching sample times.
    if (k == 2) {
        for (std::size_t si = 0; si < sol.times.size(); ++si) {
            const double t = sol.times[si];
            const double dts = bg.dt_sample();
            std::size_t i = static_cast<std::size_t>(std::llround(t / dts));
            if (i == 0 || i + 1 >= bg.samples() ||
                std::abs(bg.time(i) - t) > 1e-9 * std::max(1.0, dts)) {
                sol.diagnostics.vk_defect.push_back(std::nan(""));
                continue;
            }
            const Grid& gg = g;
            Vec3Field fd(gg);
            const Vec3Field& p = bg.v1(i + 1).values();
            const Vec3Field& m = bg.v1(i - 1).values();
            const Vec3Field& c = bg.v1(i).values();
            const SphereField& u = bg.state(i);
            for_each_node(gg.node_count(), [&](std::int64_t n) {
                const double corr = kernels::dot3(c.node(n), c.node(n));
                for (int comp = 0; comp < 3; ++comp)
                    fd.node(n)[comp] = (p.node(n)[comp] - m.node(n)[comp]) / (2.0 * dts) +
                                       corr * u.node(n)[comp];
            });
            sol.diagnostics.vk_defect.push_back(sol.omega[si].l2_distance(fd));
        }
    }
    return sol;
}

VkSolution solve_vk(const TimeJet& intrinsic, const Background& bg, int k, const VkConfig& cfg) {
    if (!intrinsic.intrinsic)
        throw std::invalid_argument("solve_vk: initial data must come from the intrinsic jet");
    if (intrinsic.order < k)
        throw std::invalid_argument("solve_vk: jet order is below k");
    VkSolution sol = solve_linearized(intrinsic.coeffs[k], bg, k, cfg);
    CompatReport rep = check_compat(bg.state(0), k);
    if (!rep.all_pass())
        sol.diagnostics.compat_warning =
            "initial data fails the order-" + std::to_string(k) + " compatibility audit";
    return sol;
}

std::vector<double> tangency_series(const std::vector<double>& times,
                                    const std::vector<Vec3Field>& omega, const Background& bg) {
    std::vector<double> out;
    for (std::size_t i = 0; i < times.size(); ++i)
        out.push_back(tangency_drift(omega[i], bg.state_at(times[i])));
    return out;
}

}  // namespace llf
