#include "llf/grid.hpp"

#include <algorithm>

namespace llf {

Grid::Grid(int dim, std::vector<double> extents, std::vector<int> points, BoundaryMode mode)
    : dim_(dim), mode_(mode) {
    if (dim < 1 || dim > 3) throw std::invalid_argument("grid: dim must be 1, 2 or 3");
    if (static_cast<int>(extents.size()) != dim || static_cast<int>(points.size()) != dim)
        throw std::invalid_argument("grid: extents/points size must equal dim");
    node_count_ = 1;
    cell_volume_ = 1.0;
    for (int a = 0; a < dim; ++a) {
        if (points[a] < 4)
            throw std::invalid_argument("grid: need at least 4 points per axis, got " +
                                        std::to_string(points[a]));
        if (!(extents[a] > 0.0)) throw std::invalid_argument("grid: extents must be positive");
        points_[a] = points[a];
        extents_[a] = extents[a];
        spacing_[a] = extents[a] / (points[a] - 1);
        cell_volume_ *= spacing_[a];
        node_count_ *= points[a];
    }
    std::int64_t s = 1;
    for (int a = 0; a < dim; ++a) {
        strides_[a] = s;
        s *= points_[a];
    }
}

double Grid::min_spacing() const {
    double h = spacing_[0];
    for (int a = 1; a < dim_; ++a) h = std::min(h, spacing_[a]);
    return h;
}

double Grid::max_extent() const {
    double L = extents_[0];
    for (int a = 1; a < dim_; ++a) L = std::max(L, extents_[a]);
    return L;
}

double Grid::volume() const {
    double v = 1.0;
    for (int a = 0; a < dim_; ++a) v *= extents_[a];
    return v;
}

Grid make_grid(int dim, const std::vector<double>& extents, const std::vector<int>& points,
               BoundaryMode mode) {
    return Grid(dim, extents, points, mode);
}

Grid make_grid(int dim, double extent, int points, BoundaryMode mode) {
    return Grid(dim, std::vector<double>(dim, extent), std::vector<int>(dim, points), mode);
}

}  // namespace llf
