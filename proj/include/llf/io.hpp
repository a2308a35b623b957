#pragma once

#include <filesystem>
#include <string>

#include "llf/field.hpp"

namespace llf {

/// Self-describing binary field container ("LLFB"): header with dim, points,
/// extents, boundary mode and component count, then little-endian 64-bit
/// floats, node-major with components contiguous per node.
void write_field(const std::filesystem::path& path, const Vec3Field& f);
Vec3Field read_field(const std::filesystem::path& path);

/// CSV export: one row per node, coordinates then components.
std::string field_to_csv(const Vec3Field& f);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace llf
