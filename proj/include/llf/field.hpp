#pragma once

#include <functional>
#include <vector>

#include "llf/grid.hpp"
#include "llf/kernels.hpp"

namespace llf {

class ScalarField {
public:
    explicit ScalarField(const Grid& g) : grid_(g), data_(g.node_count(), 0.0) {}
    ScalarField(const Grid& g, std::vector<double> data);

    const Grid& grid() const { return grid_; }
    double& operator[](std::int64_t n) { return data_[n]; }
    double operator[](std::int64_t n) const { return data_[n]; }
    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    double max_abs() const;

private:
    Grid grid_;
    std::vector<double> data_;
};

/// R^3-valued nodal field, components interleaved per node.
class Vec3Field {
public:
    explicit Vec3Field(const Grid& g) : grid_(g), data_(3 * g.node_count(), 0.0) {}
    Vec3Field(const Grid& g, std::vector<double> data);

    using Fn = std::function<void(const double xyz[3], double out[3])>;
    static Vec3Field from_function(const Grid& g, const Fn& fn);

    const Grid& grid() const { return grid_; }
    std::int64_t nodes() const { return grid_.node_count(); }

    double& at(std::int64_t node, int comp) { return data_[3 * node + comp]; }
    double at(std::int64_t node, int comp) const { return data_[3 * node + comp]; }
    double* node(std::int64_t n) { return data_.data() + 3 * n; }
    const double* node(std::int64_t n) const { return data_.data() + 3 * n; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }
    const double* raw() const { return data_.data(); }
    double* raw() { return data_.data(); }

    Vec3Field& operator+=(const Vec3Field& o);
    Vec3Field& operator-=(const Vec3Field& o);
    Vec3Field& operator*=(double s);
    friend Vec3Field operator+(Vec3Field a, const Vec3Field& b) { return a += b; }
    friend Vec3Field operator-(Vec3Field a, const Vec3Field& b) { return a -= b; }
    friend Vec3Field operator*(double s, Vec3Field a) { return a *= s; }

    /// a += s*b without temporaries.
    void axpy(double s, const Vec3Field& b);

    double max_norm() const;                       // max over nodes of |v(x)|
    double l2_norm() const;                        // trapezoidal L2 norm
    double l2_distance(const Vec3Field& o) const;  // trapezoidal L2 of difference

private:
    Grid grid_;
    std::vector<double> data_;
};

/// Discretized map into the unit sphere. The unit-norm invariant is verified
/// on construction.
class SphereField {
public:
    static constexpr double kDefaultUnitTol = 1e-10;

    explicit SphereField(Vec3Field f, double unit_tol = kDefaultUnitTol);

    const Grid& grid() const { return field_.grid(); }
    const Vec3Field& field() const { return field_; }
    const double* node(std::int64_t n) const { return field_.node(n); }
    double unit_tol() const { return unit_tol_; }

    /// max over nodes of | |u(x)| - 1 |.
    double unit_drift() const;

private:
    Vec3Field field_;
    double unit_tol_;
};

/// Pointwise u(x) = f(x)/|f(x)|. Rejects nodes with |f| below 1e-14.
SphereField normalize_to_sphere(const Vec3Field& f, double unit_tol = SphereField::kDefaultUnitTol);

/// Discretized section of u*(T S^2). `checked` enforces the tangency bound,
/// `reported` records the drift without repairing or rejecting it.
class TangentField {
public:
    static constexpr double kDefaultTangencyTol = 1e-8;

    static TangentField checked(Vec3Field w, const SphereField& base,
                                double tol = kDefaultTangencyTol);
    static TangentField reported(Vec3Field w, const SphereField& base);

    const Grid& grid() const { return values_.grid(); }
    const Vec3Field& values() const { return values_; }
    double tangency_drift() const { return drift_; }

private:
    TangentField(Vec3Field w, double drift) : values_(std::move(w)), drift_(drift) {}
    Vec3Field values_;
    double drift_;
};

/// max over nodes of |<w(x), u(x)>|.
double tangency_drift(const Vec3Field& w, const SphereField& u);

}  // namespace llf
