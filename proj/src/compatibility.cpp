#include "llf/compatibility.hpp"

#include <cmath>
#include <sstream>

#include "llf/operators.hpp"

namespace llf {

using kernels::blocked_max;

TimeJet extrinsic_jet(const SphereField& u0, int k) {
    if (k < 0) throw std::invalid_argument("extrinsic_jet: order must be >= 0");
    if (k > kMaxJetOrder)
        throw std::invalid_argument("extrinsic_jet: orders beyond 6 exceed desk-scale "
                                    "resolution of iterated stencils");
    jet::SeriesVec u = jet::extrinsic_series(u0, k);
    TimeJet out;
    out.order = k;
    out.intrinsic = false;
    out.coeffs = std::move(u).take();
    return out;
}

TimeJet intrinsic_jet(const TimeJet& ext) {
    if (ext.intrinsic) throw std::invalid_argument("intrinsic_jet: jet is already intrinsic");
    if (ext.order < 1) throw std::invalid_argument("intrinsic_jet: order must be >= 1");
    jet::SeriesVec u(std::vector<Vec3Field>(ext.coeffs));
    TimeJet out;
    out.order = ext.order;
    out.intrinsic = true;
    out.coeffs = jet::intrinsic_coefficients(u);
    return out;
}

double boundary_covariant_flux(const Vec3Field& f, const SphereField* u) {
    const Grid& g = f.grid();
    return blocked_max(g.node_count(), [&](std::int64_t n) {
        int idx[3];
        g.decompose(n, idx);
        double m = 0.0;
        for (int a = 0; a < g.dim(); ++a) {
            const int np = g.points(a);
            if (idx[a] != 0 && idx[a] != np - 1) continue;
            const double h = g.spacing(a);
            const std::int64_t s = g.stride(a);
            const std::int64_t dir = (idx[a] == 0) ? s : -s;
            const double sign = (idx[a] == 0) ? -1.0 : 1.0;  // outward normal
            double df[3], du[3];
            for (int c = 0; c < 3; ++c) {
                df[c] = sign * (-3.0 * f.at(n, c) + 4.0 * f.at(n + dir, c) - f.at(n + 2 * dir, c)) /
                        (2.0 * h);
            }
            if (u != nullptr) {
                for (int c = 0; c < 3; ++c) {
                    du[c] = sign *
                            (-3.0 * u->field().at(n, c) + 4.0 * u->field().at(n + dir, c) -
                             u->field().at(n + 2 * dir, c)) /
                            (2.0 * h);
                }
                const double corr = kernels::dot3(du, f.node(n));
                for (int c = 0; c < 3; ++c) df[c] += corr * u->node(n)[c];
            }
            m = std::max(m, kernels::norm3(df));
        }
        return m;
    });
}

double default_compat_tolerance(const Grid& g) {
    const double h = g.min_spacing();
    return std::max(10.0 * h * h, 1e-8);
}

CompatReport check_compat(const SphereField& u0, int k, double tol) {
    if (!u0.grid().neumann())
        throw std::invalid_argument("check_compat: compatibility audits need a neumann grid");
    TimeJet ext = extrinsic_jet(u0, k);
    TimeJet intr = (k >= 1) ? intrinsic_jet(ext) : ext;

    CompatReport rep;
    rep.order = k;
    rep.tolerance = tol;
    rep.grid_spacing = u0.grid().min_spacing();
    rep.per_order.resize(k + 1);
    for (int j = 0; j <= k; ++j) {
        CompatOrderResult& r = rep.per_order[j];
        r.extrinsic_residual = boundary_covariant_flux(ext.coeffs[j], nullptr);
        r.intrinsic_residual = (j == 0)
                                   ? r.extrinsic_residual
                                   : boundary_covariant_flux(intr.coeffs[j], &u0);
        r.extrinsic_scale = neumann_check_scale(ext.coeffs[j]);
        r.intrinsic_scale = (j == 0) ? r.extrinsic_scale : neumann_check_scale(intr.coeffs[j]);
        r.tolerance = tol * std::max(r.extrinsic_scale, r.intrinsic_scale);
        r.extrinsic_pass = r.extrinsic_residual <= tol * r.extrinsic_scale;
        r.intrinsic_pass = r.intrinsic_residual <= tol * r.intrinsic_scale;
        r.pass = r.extrinsic_pass && r.intrinsic_pass;
    }
    return rep;
}

CompatReport check_compat(const SphereField& u0, int k) {
    return check_compat(u0, k, default_compat_tolerance(u0.grid()));
}

bool CompatReport::all_pass() const {
    for (const auto& r : per_order)
        if (!r.pass) return false;
    return true;
}

std::string CompatReport::to_json() const {
    std::ostringstream os;
    os.precision(17);
    os << "{\"order\":" << order << ",\"tolerance\":" << tolerance
       << ",\"grid_spacing\":" << grid_spacing << ",\"per_order\":[";
    for (std::size_t j = 0; j < per_order.size(); ++j) {
        const auto& r = per_order[j];
        if (j) os << ',';
        os << "{\"order\":" << j << ",\"extrinsic_residual\":" << r.extrinsic_residual
           << ",\"intrinsic_residual\":" << r.intrinsic_residual
           << ",\"extrinsic_scale\":" << r.extrinsic_scale
           << ",\"intrinsic_scale\":" << r.intrinsic_scale
           << ",\"effective_tolerance\":" << r.tolerance
           << ",\"extrinsic_pass\":" << (r.extrinsic_pass ? "true" : "false")
           << ",\"intrinsic_pass\":" << (r.intrinsic_pass ? "true" : "false")
           << ",\"pass\":" << (r.pass ? "true" : "false") << '}';
    }
    os << "]}";
    return os.str();
}

std::string CompatReport::to_table() const {
    std::ostringstream os;
    os << "order  extrinsic_resid  intrinsic_resid  tol_eff      verdict\n";
    char line[160];
    for (std::size_t j = 0; j < per_order.size(); ++j) {
        const auto& r = per_order[j];
        std::snprintf(line, sizeof line, "%-6zu %-16.6e %-16.6e %-12.3e %s\n", j,
                      r.extrinsic_residual, r.intrinsic_residual, r.tolerance,
                      r.pass ? "pass" : "FAIL");
        os << line;
    }
    return os.str();
}

EquivalenceAudit equivalence_audit(const SphereField& u0, int k) {
    EquivalenceAudit audit;
    audit.report = check_compat(u0, k);
    audit.verdicts_agree = true;
    audit.max_ratio = 0.0;
    for (const auto& r : audit.report.per_order) {
        if (r.extrinsic_pass != r.intrinsic_pass) audit.verdicts_agree = false;
        if (r.extrinsic_residual > 0.0 && r.intrinsic_residual > 0.0) {
            audit.max_ratio = std::max(
                audit.max_ratio, std::max(r.intrinsic_residual / r.extrinsic_residual,
                                          r.extrinsic_residual / r.intrinsic_residual));
        }
    }
    return audit;
}

}  // namespace llf
