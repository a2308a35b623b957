#pragma once

#include <map>
#include <string>
#include <vector>

#include "llf/field.hpp"

namespace llf {

using ProfileParams = std::map<std::string, double>;

/// Deterministic initial-data factory. Known names:
///   constant          axis (0/1/2, default 2)
///   equatorial_cos    a, m          theta = a cos(m pi x / L), compatible
///   equatorial_linear a             theta = a x, incompatible
///   tilted_cos        a, m          rotated equatorial_cos, compatible
///   equatorial_cos_2d a, m          theta = a cos(m pi x/Lx) cos(m pi y/Ly)
///   equatorial_linear_2d a          incompatible 2D profile
///   helical           alpha, k_mode periodic grids only
///   random_smooth     band, amplitude, seed    compatible band-limited data
///   random_tilted     band, amplitude, tilt, seed   incompatible variant
SphereField named_profile(const std::string& name, const ProfileParams& params, const Grid& g);

struct CannedProfile {
    std::string name;
    ProfileParams params;
    int grid_dim;
    bool compatible;  // expected verdict
};

/// The twelve canned audit profiles (eight compatible, four not).
const std::vector<CannedProfile>& canned_profiles();

}  // namespace llf
