#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace llf {

enum class BoundaryMode : std::uint32_t { neumann_mirror = 0, periodic = 1 };

inline const char* to_string(BoundaryMode m) {
    return m == BoundaryMode::neumann_mirror ? "neumann_mirror" : "periodic";
}

/// Rectilinear node-centered grid on an axis-aligned box, boundary nodes included.
/// spacing[a] = extents[a] / (points[a]-1) on every axis.
///
/// In periodic mode the first and last node on each axis are the same physical
/// point (data must agree there); the period equals the extent.
class Grid {
public:
    Grid(int dim, std::vector<double> extents, std::vector<int> points, BoundaryMode mode);

    int dim() const { return dim_; }
    BoundaryMode mode() const { return mode_; }
    bool neumann() const { return mode_ == BoundaryMode::neumann_mirror; }

    int points(int axis) const { return points_[axis]; }
    double extent(int axis) const { return extents_[axis]; }
    double spacing(int axis) const { return spacing_[axis]; }
    double min_spacing() const;
    double max_extent() const;

    std::int64_t node_count() const { return node_count_; }
    std::int64_t stride(int axis) const { return strides_[axis]; }

    /// Coordinate of node index i along an axis.
    double coord(int axis, int i) const { return spacing_[axis] * i; }

    void decompose(std::int64_t node, int idx[3]) const {
        std::int64_t r = node;
        for (int a = 0; a < dim_; ++a) {
            idx[a] = static_cast<int>(r % points_[a]);
            r /= points_[a];
        }
        for (int a = dim_; a < 3; ++a) idx[a] = 0;
    }

    std::int64_t flatten(const int idx[3]) const {
        std::int64_t n = 0;
        for (int a = dim_ - 1; a >= 0; --a) n = n * points_[a] + idx[a];
        return n;
    }

    /// Trapezoidal quadrature weight of a node (product of per-axis half-weights
    /// at axis endpoints). In periodic mode this counts the duplicated node once.
    double quad_weight(std::int64_t node) const {
        int idx[3];
        decompose(node, idx);
        double w = cell_volume_;
        for (int a = 0; a < dim_; ++a)
            if (idx[a] == 0 || idx[a] == points_[a] - 1) w *= 0.5;
        return w;
    }

    /// Measure of the box.
    double volume() const;

    bool same_layout(const Grid& o) const {
        if (dim_ != o.dim_ || mode_ != o.mode_) return false;
        for (int a = 0; a < dim_; ++a)
            if (points_[a] != o.points_[a] || extents_[a] != o.extents_[a]) return false;
        return true;
    }
    bool operator==(const Grid& o) const { return same_layout(o); }

private:
    int dim_;
    BoundaryMode mode_;
    std::array<int, 3> points_{1, 1, 1};
    std::array<double, 3> extents_{0, 0, 0};
    std::array<double, 3> spacing_{0, 0, 0};
    std::array<std::int64_t, 3> strides_{0, 0, 0};
    std::int64_t node_count_ = 0;
    double cell_volume_ = 1.0;
};

Grid make_grid(int dim, const std::vector<double>& extents, const std::vector<int>& points,
               BoundaryMode mode);

/// Convenience overload: same point count and extent on every axis.
Grid make_grid(int dim, double extent, int points, BoundaryMode mode);

}  // namespace llf
