#include "llf/profiles.hpp"

#include <cmath>
#include <numbers>

#include "llf/flow.hpp"
#include "llf/rng.hpp"

namespace llf {

namespace {

constexpr double kPi = std::numbers::pi;

double get(const ProfileParams& p, const std::string& key, double fallback) {
    auto it = p.find(key);
    return it == p.end() ? fallback : it->second;
}

SphereField equatorial(const Grid& g, const std::function<double(const double*)>& theta) {
    return SphereField(Vec3Field::from_function(g, [&](const double* x, double* out) {
        const double th = theta(x);
        out[0] = std::sin(th);
        out[1] = 0.0;
        out[2] = std::cos(th);
    }));
}

// Fixed rotation used by tilted_cos (a quarter turn about (1,1,1)/sqrt(3)).
void rotate_fixed(double v[3]) {
    static const double axis[3] = {1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0),
                                   1.0 / std::sqrt(3.0)};
    const double c = 0.0, s = 1.0;  // cos/sin of pi/2
    double cr[3];
    kernels::cross3(axis, v, cr);
    const double d = kernels::dot3(axis, v);
    for (int i = 0; i < 3; ++i) v[i] = v[i] * c + cr[i] * s + axis[i] * d * (1.0 - c);
}

}  // namespace

SphereField named_profile(const std::string& name, const ProfileParams& params, const Grid& g) {
    if (name == "constant") {
        const int axis = static_cast<int>(get(params, "axis", 2));
        if (axis < 0 || axis > 2) throw std::invalid_argument("constant profile: bad axis");
        return SphereField(Vec3Field::from_function(g, [&](const double*, double* out) {
            out[0] = out[1] = out[2] = 0.0;
            out[axis] = 1.0;
        }));
    }
    if (name == "equatorial_cos") {
        const double a = get(params, "a", 0.5);
        const double m = get(params, "m", 1);
        return equatorial(
            g, [&](const double* x) { return a * std::cos(m * kPi * x[0] / g.extent(0)); });
    }
    if (name == "equatorial_linear") {
        const double a = get(params, "a", 0.3);
        return equatorial(g, [&](const double* x) { return a * x[0]; });
    }
    if (name == "tilted_cos") {
        const double a = get(params, "a", 0.4);
        const double m = get(params, "m", 1);
        return SphereField(Vec3Field::from_function(g, [&](const double* x, double* out) {
            const double th = a * std::cos(m * kPi * x[0] / g.extent(0));
            out[0] = std::sin(th);
            out[1] = 0.0;
            out[2] = std::cos(th);
            rotate_fixed(out);
        }));
    }
    if (name == "equatorial_cos_2d") {
        if (g.dim() < 2) throw std::invalid_argument("equatorial_cos_2d: needs a 2D grid");
        const double a = get(params, "a", 0.4);
        const double m = get(params, "m", 1);
        return equatorial(g, [&](const double* x) {
            return a * std::cos(m * kPi * x[0] / g.extent(0)) *
                   std::cos(m * kPi * x[1] / g.extent(1));
        });
    }
    if (name == "equatorial_linear_2d") {
        if (g.dim() < 2) throw std::invalid_argument("equatorial_linear_2d: needs a 2D grid");
        const double a = get(params, "a", 0.3);
        return equatorial(g, [&](const double* x) { return a * (x[0] + 0.5 * x[1]); });
    }
    if (name == "helical") {
        const double alpha = get(params, "alpha", kPi / 3);
        const int k_mode = static_cast<int>(get(params, "k_mode", 1));
        return helical_exact(g, k_mode, alpha, 0.0);
    }
    if (name == "random_smooth" || name == "random_tilted") {
        const int band = static_cast<int>(get(params, "band", 2));
        const double amplitude = get(params, "amplitude", 0.4);
        const auto seed = static_cast<std::uint64_t>(get(params, "seed", 1));
        Rng rng(seed);
        Vec3Field f = rng.band_limited_field(g, band, amplitude);
        for (std::int64_t n = 0; n < g.node_count(); ++n) f.node(n)[2] += 2.0;
        if (name == "random_tilted") {
            const double tilt = get(params, "tilt", 0.4);
            for (std::int64_t n = 0; n < g.node_count(); ++n) {
                int idx[3];
                g.decompose(n, idx);
                f.node(n)[0] += tilt * g.coord(0, idx[0]);
            }
        }
        return normalize_to_sphere(f);
    }
    throw std::invalid_argument("named_profile: unknown profile '" + name + "'");
}

const std::vector<CannedProfile>& canned_profiles() {
    static const std::vector<CannedProfile> profiles = {
        {"constant", {{"axis", 2}}, 1, true},
        {"constant", {{"axis", 0}}, 1, true},
        {"equatorial_cos", {{"a", 0.2}, {"m", 1}}, 1, true},
        {"equatorial_cos", {{"a", 0.5}, {"m", 1}}, 1, true},
        {"equatorial_cos", {{"a", 0.9}, {"m", 2}}, 1, true},
        {"tilted_cos", {{"a", 0.4}, {"m", 1}}, 1, true},
        {"random_smooth", {{"band", 2}, {"amplitude", 0.4}, {"seed", 7}}, 1, true},
        {"equatorial_cos_2d", {{"a", 0.4}, {"m", 1}}, 2, true},
        {"equatorial_linear", {{"a", 0.1}}, 1, false},
        {"equatorial_linear", {{"a", 0.3}}, 1, false},
        {"equatorial_linear_2d", {{"a", 0.4}}, 2, false},
        {"random_tilted", {{"band", 2}, {"amplitude", 0.3}, {"tilt", 0.4}, {"seed", 9}}, 1, false},
    };
    return profiles;
}

}  // namespace llf
