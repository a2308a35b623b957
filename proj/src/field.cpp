#include "llf/field.hpp"

#include <cmath>

namespace llf {

using kernels::blocked_max;
using kernels::blocked_sum;
using kernels::for_each_node;

ScalarField::ScalarField(const Grid& g, std::vector<double> data)
    : grid_(g), data_(std::move(data)) {
    if (static_cast<std::int64_t>(data_.size()) != g.node_count())
        throw std::invalid_argument("scalar field: data size does not match grid");
}

double ScalarField::max_abs() const {
    return blocked_max(grid_.node_count(), [&](std::int64_t n) { return std::abs(data_[n]); });
}

Vec3Field::Vec3Field(const Grid& g, std::vector<double> data) : grid_(g), data_(std::move(data)) {
    if (static_cast<std::int64_t>(data_.size()) != 3 * g.node_count())
        throw std::invalid_argument("vec3 field: data size does not match grid");
}

Vec3Field Vec3Field::from_function(const Grid& g, const Fn& fn) {
    Vec3Field f(g);
    for_each_node(g.node_count(), [&](std::int64_t n) {
        int idx[3];
        g.decompose(n, idx);
        double xyz[3] = {0, 0, 0};
        for (int a = 0; a < g.dim(); ++a) xyz[a] = g.coord(a, idx[a]);
        fn(xyz, f.node(n));
    });
    return f;
}

Vec3Field& Vec3Field::operator+=(const Vec3Field& o) {
    for_each_node(3 * grid_.node_count(), [&](std::int64_t i) { data_[i] += o.data_[i]; });
    return *this;
}
Vec3Field& Vec3Field::operator-=(const Vec3Field& o) {
    for_each_node(3 * grid_.node_count(), [&](std::int64_t i) { data_[i] -= o.data_[i]; });
    return *this;
}
Vec3Field& Vec3Field::operator*=(double s) {
    for_each_node(3 * grid_.node_count(), [&](std::int64_t i) { data_[i] *= s; });
    return *this;
}
void Vec3Field::axpy(double s, const Vec3Field& b) {
    for_each_node(3 * grid_.node_count(), [&](std::int64_t i) { data_[i] += s * b.data_[i]; });
}

double Vec3Field::max_norm() const {
    return blocked_max(grid_.node_count(),
                       [&](std::int64_t n) { return kernels::norm3(node(n)); });
}

double Vec3Field::l2_norm() const {
    return std::sqrt(kernels::trapz_dot3(grid_, raw(), raw()));
}

double Vec3Field::l2_distance(const Vec3Field& o) const {
    const double d2 = blocked_sum(grid_.node_count(), [&](std::int64_t n) {
        const double* a = node(n);
        const double* b = o.node(n);
        double s = 0.0;
        for (int c = 0; c < 3; ++c) s += (a[c] - b[c]) * (a[c] - b[c]);
        return grid_.quad_weight(n) * s;
    });
    return std::sqrt(d2);
}

SphereField::SphereField(Vec3Field f, double unit_tol)
    : field_(std::move(f)), unit_tol_(unit_tol) {
    const double drift = unit_drift();
    if (!(drift <= unit_tol_))
        throw std::invalid_argument("sphere field: unit-norm drift " + std::to_string(drift) +
                                    " exceeds tolerance " + std::to_string(unit_tol_));
}

double SphereField::unit_drift() const {
    return blocked_max(grid().node_count(), [&](std::int64_t n) {
        return std::abs(kernels::norm3(field_.node(n)) - 1.0);
    });
}

SphereField normalize_to_sphere(const Vec3Field& f, double unit_tol) {
    const double min_norm = kernels::blocked_min(
        f.grid().node_count(), [&](std::int64_t n) { return kernels::norm3(f.node(n)); });
    if (!(min_norm > 1e-14))
        throw std::domain_error("normalize_to_sphere: degenerate node with |f| <= 1e-14");
    Vec3Field u = f;
    for_each_node(f.grid().node_count(), [&](std::int64_t n) {
        double* v = u.node(n);
        const double inv = 1.0 / kernels::norm3(v);
        v[0] *= inv;
        v[1] *= inv;
        v[2] *= inv;
    });
    return SphereField(std::move(u), unit_tol);
}

double tangency_drift(const Vec3Field& w, const SphereField& u) {
    return blocked_max(w.grid().node_count(), [&](std::int64_t n) {
        return std::abs(kernels::dot3(w.node(n), u.node(n)));
    });
}

TangentField TangentField::checked(Vec3Field w, const SphereField& base, double tol) {
    const double drift = llf::tangency_drift(w, base);
    if (!(drift <= tol))
        throw std::invalid_argument("tangent field: tangency drift " + std::to_string(drift) +
                                    " exceeds tolerance " + std::to_string(tol));
    return TangentField(std::move(w), drift);
}

TangentField TangentField::reported(Vec3Field w, const SphereField& base) {
    const double drift = llf::tangency_drift(w, base);
    return TangentField(std::move(w), drift);
}

}  // namespace llf
