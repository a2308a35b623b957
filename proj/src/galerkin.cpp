#include "llf/galerkin.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "llf/jet.hpp"
#include "llf/operators.hpp"
#include "llf/rng.hpp"
#include "llf/spectral.hpp"

namespace llf {

using kernels::blocked_sum;
using kernels::for_each_node;

namespace {
constexpr double kPi = std::numbers::pi;
}

EigenBasis EigenBasis::build(const Grid& grid, int n) {
    if (!grid.neumann())
        throw std::invalid_argument("eigen basis: needs a neumann grid");
    if (grid.dim() > 2)
        throw std::invalid_argument("eigen basis: capped at 2D (mode-count growth)");
    // Resolvable pool: per-axis index up to points/2.
    std::vector<std::array<int, 3>> pool;
    const int k0 = grid.points(0) / 2;
    const int k1 = grid.dim() >= 2 ? grid.points(1) / 2 : 0;
    for (int a = 0; a <= k0; ++a)
        for (int b = 0; b <= k1; ++b) pool.push_back({a, b, 0});
    if (n < 1 || n > static_cast<int>(pool.size()))
        throw std::invalid_argument("eigen basis: n beyond resolvable modes (" +
                                    std::to_string(pool.size()) + " available)");

    auto kappa_sq_of = [&](const std::array<int, 3>& idx) {
        double k2 = 0.0;
        for (int a = 0; a < grid.dim(); ++a) {
            const double ka = idx[a] * kPi / grid.extent(a);
            k2 += ka * ka;
        }
        return k2;
    };
    std::sort(pool.begin(), pool.end(), [&](const auto& a, const auto& b) {
        const double ka = kappa_sq_of(a), kb = kappa_sq_of(b);
        if (ka != kb) return ka < kb;
        return a < b;
    });

    EigenBasis basis(grid);
    basis.modes_.reserve(n);
    for (int i = 0; i < n; ++i) {
        EigenMode mode{pool[i], 1.0 + kappa_sq_of(pool[i]), kappa_sq_of(pool[i]),
                       ScalarField(grid), {}};
        for (int a = 0; a < grid.dim(); ++a) mode.dg.emplace_back(grid);
        for_each_node(grid.node_count(), [&](std::int64_t node) {
            int idx[3];
            grid.decompose(node, idx);
            double val = 1.0;
            double dval[3] = {1.0, 1.0, 1.0};
            for (int a = 0; a < grid.dim(); ++a) {
                const int k = mode.index[a];
                const double L = grid.extent(a);
                const double nf = (k == 0) ? 1.0 / std::sqrt(L) : std::sqrt(2.0 / L);
                const double arg = k * kPi * grid.coord(a, idx[a]) / L;
                const double c = nf * std::cos(arg);
                const double s = -nf * (k * kPi / L) * std::sin(arg);
                val *= c;
                for (int b = 0; b < grid.dim(); ++b) dval[b] *= (b == a) ? s : c;
            }
            mode.g[node] = val;
            for (int a = 0; a < grid.dim(); ++a) mode.dg[a][node] = dval[a];
        });
        basis.modes_.push_back(std::move(mode));
    }
    return basis;
}

EigenBasis build_basis(const Grid& grid, int n) { return EigenBasis::build(grid, n); }

Vec3Field GalerkinState::synthesize(const EigenBasis& basis) const {
    const Grid& g = basis.grid();
    Vec3Field out(g);
    for (int i = 0; i < n; ++i) {
        const ScalarField& gi = basis.mode(i).g;
        const double* c = coeffs.data() + 3 * i;
        for_each_node(g.node_count(), [&](std::int64_t node) {
            double* v = out.node(node);
            for (int comp = 0; comp < 3; ++comp) v[comp] += c[comp] * gi[node];
        });
    }
    return out;
}

double GalerkinState::l2_norm() const {
    double s = 0.0;
    for (double c : coeffs) s += c * c;
    return std::sqrt(s);
}

double GalerkinState::grad_sq_spectral(const EigenBasis& basis) const {
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        const double k2 = basis.mode(i).kappa_sq;
        for (int comp = 0; comp < 3; ++comp) s += k2 * at(i, comp) * at(i, comp);
    }
    return s;
}

GalerkinState project_Pn(const Vec3Field& f, const EigenBasis& basis, int n) {
    if (n < 1 || n > basis.size())
        throw std::invalid_argument("project_Pn: n exceeds the basis size");
    if (!f.grid().same_layout(basis.grid()))
        throw std::invalid_argument("project_Pn: field grid does not match the basis grid");
    const Grid& g = basis.grid();
    GalerkinState st;
    st.n = n;
    st.coeffs.assign(3 * static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        const ScalarField& gi = basis.mode(i).g;
        for (int comp = 0; comp < 3; ++comp) {
            st.at(i, comp) = blocked_sum(g.node_count(), [&](std::int64_t node) {
                return g.quad_weight(node) * gi[node] * f.at(node, comp);
            });
        }
    }
    return st;
}

PnAuditReport pn_bound_audit(const EigenBasis& basis, int n, int trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("pn_bound_audit: trials must be >= 1");
    const Grid& g = basis.grid();
    Rng rng(seed);
    PnAuditReport rep;
    rep.n = n;
    rep.trials = trials;
    const int band = std::max(2, g.points(0) / 3);
    for (int t = 0; t < trials; ++t) {
        Vec3Field f = rng.band_limited_field(g, band, 1.0);
        // Spectral W12 ratio from the full cosine coefficients.
        SpectralRep rep_f = cosine_forward(f);
        double num = 0.0, den = 0.0;
        std::vector<char> selected(static_cast<std::size_t>(g.node_count()), 0);
        for (int i = 0; i < n; ++i) {
            int idx[3] = {basis.mode(i).index[0], basis.mode(i).index[1], basis.mode(i).index[2]};
            selected[static_cast<std::size_t>(g.flatten(idx))] = 1;
        }
        for (std::int64_t m = 0; m < g.node_count(); ++m) {
            const double mult = 1.0 + mode_kappa_sq(g, m);
            double c2 = 0.0;
            for (int comp = 0; comp < 3; ++comp) c2 += rep_f.at(m, comp) * rep_f.at(m, comp);
            den += mult * c2;
            if (selected[static_cast<std::size_t>(m)]) num += mult * c2;
        }
        rep.max_ratio_w1 = std::max(rep.max_ratio_w1, std::sqrt(num / den));

        // Stencil equivalent-norm ratios (finite constants, n-stable).
        Vec3Field pf = project_Pn(f, basis, n).synthesize(basis);
        for (int k = 2; k <= 3; ++k) {
            const double ratio = sobolev_norm(pf, k) / sobolev_norm(f, k);
            if (k == 2) rep.max_ratio_w2 = std::max(rep.max_ratio_w2, ratio);
            if (k == 3) rep.max_ratio_w3 = std::max(rep.max_ratio_w3, ratio);
        }
    }
    return rep;
}

GalerkinDataFn galerkin_data_free(const SphereField& u_const) {
    const Grid& g = u_const.grid();
    GalerkinRhsData data{u_const, Vec3Field(g), {}, Vec3Field(g), ScalarField(g), Vec3Field(g),
                         true};
    return [data](double) { return data; };
}

GalerkinDataFn galerkin_data_from_background(const Background& bg, int k, double epsilon) {
    return [&bg, k, epsilon](double t) {
        SphereField u = bg.state_at(t);
        const Grid& g = u.grid();
        BackgroundSlice s = background_slice(u);
        GalerkinRhsData data{u, s.v1, {}, s.lap_u, s.gsq, Vec3Field(g), false};
        for (int a = 0; a < g.dim(); ++a) {
            Vec3Field f1a = s.du[a];
            f1a *= 2.0;
            data.f1.push_back(std::move(f1a));
        }
        if (k >= 2) {
            Vec3Field rk = jet::remainder_rk(u, k);
            for_each_node(g.node_count(), [&](std::int64_t node) {
                double cr[3];
                kernels::cross3(u.node(node), rk.node(node), cr);
                for (int c = 0; c < 3; ++c)
                    data.f3.at(node, c) = epsilon * rk.at(node, c) + cr[c];
            });
        }
        return data;
    };
}

double galerkin_stability_bound(const EigenBasis& basis, int n, double epsilon) {
    if (n < 1 || n > basis.size())
        throw std::invalid_argument("galerkin_stability_bound: n exceeds the basis size");
    return 2.5 / ((1.0 + epsilon) * basis.mode(n - 1).lambda);
}

namespace {

// d/dt c = P_n{ (eps I + u x)(Lap h + f1#dh + f2#h) + f3 - <dtu, h> u }
// with Lap h synthesized from the diagonal action on coefficients and the
// mode derivatives synthesized analytically.
void galerkin_rhs(const GalerkinState& st, const EigenBasis& basis, const GalerkinRhsData& d,
                  double epsilon, GalerkinState& out) {
    const Grid& g = basis.grid();
    const int n = st.n;
    Vec3Field h(g), lap_h(g);
    std::vector<Vec3Field> dh;
    if (!d.homogeneous)
        for (int a = 0; a < g.dim(); ++a) dh.emplace_back(g);
    for (int i = 0; i < n; ++i) {
        const EigenMode& mode = basis.mode(i);
        const double* c = st.coeffs.data() + 3 * i;
        const double k2 = mode.kappa_sq;
        for_each_node(g.node_count(), [&](std::int64_t node) {
            const double gv = mode.g[node];
            double* hv = h.node(node);
            double* lv = lap_h.node(node);
            for (int comp = 0; comp < 3; ++comp) {
                hv[comp] += c[comp] * gv;
                lv[comp] += -k2 * c[comp] * gv;
            }
        });
        if (!d.homogeneous) {
            for (int a = 0; a < g.dim(); ++a) {
                const ScalarField& dg = mode.dg[a];
                Vec3Field& da = dh[a];
                for_each_node(g.node_count(), [&](std::int64_t node) {
                    double* dv = da.node(node);
                    for (int comp = 0; comp < 3; ++comp) dv[comp] += c[comp] * dg[node];
                });
            }
        }
    }

    Vec3Field w(g);
    for_each_node(g.node_count(), [&](std::int64_t node) {
        const double* uv = d.u.node(node);
        const double* hv = h.node(node);
        double inner[3];
        for (int c = 0; c < 3; ++c) inner[c] = lap_h.at(node, c);
        if (!d.homogeneous) {
            double f1_dh = 0.0;
            for (std::size_t a = 0; a < d.f1.size(); ++a)
                f1_dh += kernels::dot3(d.f1[a].node(node), dh[a].node(node));
            const double f2h = kernels::dot3(d.f2_vec.node(node), hv);
            for (int c = 0; c < 3; ++c)
                inner[c] += f1_dh * uv[c] + f2h * uv[c] + d.f2_scal[node] * hv[c];
        }
        double cr[3];
        kernels::cross3(uv, inner, cr);
        double* wv = w.node(node);
        const double coupling = kernels::dot3(d.dtu.node(node), hv);
        for (int c = 0; c < 3; ++c) {
            wv[c] = epsilon * inner[c] + cr[c] - coupling * uv[c];
            if (!d.homogeneous) wv[c] += d.f3.at(node, c);
        }
    });

    out.n = n;
    out.coeffs.assign(3 * static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        const ScalarField& gi = basis.mode(i).g;
        for (int comp = 0; comp < 3; ++comp) {
            out.at(i, comp) = blocked_sum(g.node_count(), [&](std::int64_t node) {
                return g.quad_weight(node) * gi[node] * w.at(node, comp);
            });
        }
    }
}

}  // namespace

GalerkinSolution solve_galerkin(const Vec3Field& h0, const EigenBasis& basis, int n,
                                const GalerkinDataFn& data, const GalerkinConfig& cfg) {
    if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0))
        throw std::invalid_argument("solve_galerkin: epsilon must lie in (0,1)");
    if (n < 1 || n > basis.size())
        throw std::invalid_argument("solve_galerkin: n exceeds the basis size");
    const double bound = galerkin_stability_bound(basis, n, cfg.epsilon);
    if (cfg.dt > bound)
        throw std::invalid_argument("solve_galerkin: stiff CFL violation, dt exceeds " +
                                    std::to_string(bound));
    if (basis.grid().neumann()) {
        const double flux = max_boundary_flux(h0);
        const double h = basis.grid().min_spacing();
        const double scale = std::max(1.0, h0.max_norm());
        if (flux > std::max(10.0 * h * h, 1e-8) * scale * 10.0)
            throw std::invalid_argument(
                "solve_galerkin: h0 violates the Neumann condition (flux " +
                std::to_string(flux) + ")");
    }

    GalerkinSolution sol;
    GalerkinState c = project_Pn(h0, basis, n);
    const std::int64_t nsteps = std::max<std::int64_t>(1, std::llround(cfg.t_end / cfg.dt));
    sol.times.push_back(0.0);
    sol.states.push_back(c);

    GalerkinState k1, k2, k3, k4, stage;
    auto axpy = [](GalerkinState& y, double a, const GalerkinState& x) {
        for (std::size_t i = 0; i < y.coeffs.size(); ++i) y.coeffs[i] += a * x.coeffs[i];
    };
    for (std::int64_t s = 1; s <= nsteps; ++s) {
        const double t = (s - 1) * cfg.dt;
        galerkin_rhs(c, basis, data(t), cfg.epsilon, k1);
        stage = c;
        axpy(stage, 0.5 * cfg.dt, k1);
        galerkin_rhs(stage, basis, data(t + 0.5 * cfg.dt), cfg.epsilon, k2);
        stage = c;
        axpy(stage, 0.5 * cfg.dt, k2);
        galerkin_rhs(stage, basis, data(t + 0.5 * cfg.dt), cfg.epsilon, k3);
        stage = c;
        axpy(stage, cfg.dt, k3);
        galerkin_rhs(stage, basis, data(t + cfg.dt), cfg.epsilon, k4);
        axpy(c, cfg.dt / 6.0, k1);
        axpy(c, 2.0 * cfg.dt / 6.0, k2);
        axpy(c, 2.0 * cfg.dt / 6.0, k3);
        axpy(c, cfg.dt / 6.0, k4);
        if (s % cfg.record_every == 0 || s == nsteps) {
            sol.times.push_back(s * cfg.dt);
            sol.states.push_back(c);
        }
    }
    return sol;
}

double galerkin_energy_monitor(const GalerkinSolution& sol, const EigenBasis& basis,
                               double epsilon, const GalerkinDataFn& data) {
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < sol.times.size(); ++i) {
        const double dt2 = sol.times[i + 1] - sol.times[i - 1];
        const double e_p = 0.5 * sol.states[i + 1].l2_norm() * sol.states[i + 1].l2_norm();
        const double e_m = 0.5 * sol.states[i - 1].l2_norm() * sol.states[i - 1].l2_norm();
        const double dedt = (e_p - e_m) / dt2;
        const double grad = sol.states[i].grad_sq_spectral(basis);
        const double h2 = sol.states[i].l2_norm() * sol.states[i].l2_norm();
        const double f3n = data(sol.times[i]).f3.l2_norm();
        const double denom = std::max(h2 + f3n * f3n, 1e-30);
        const double c_needed = (dedt + 0.5 * epsilon * grad) / denom;
        worst = std::max(worst, c_needed);
    }
    return worst;
}

std::string GalerkinSolution::to_csv(const EigenBasis& basis) const {
    std::ostringstream os;
    os << "t";
    for (int i = 0; i < states.front().n; ++i) {
        os << ",c" << i << "x,c" << i << "y,c" << i << "z";
        (void)basis;
    }
    os << "\n";
    char buf[32];
    auto put = [&](double x) {
        std::snprintf(buf, sizeof buf, "%.17g", x);
        os << buf;
    };
    for (std::size_t s = 0; s < times.size(); ++s) {
        put(times[s]);
        for (int i = 0; i < states[s].n; ++i)
            for (int c = 0; c < 3; ++c) {
                os << ',';
                put(states[s].at(i, c));
            }
        os << "\n";
    }
    return os.str();
}

}  // namespace llf
