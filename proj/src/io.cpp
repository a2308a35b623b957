#include "llf/io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

namespace llf {

static_assert(std::endian::native == std::endian::little,
              "field container I/O assumes a little-endian host");

namespace {
constexpr char kMagic[4] = {'L', 'L', 'F', 'B'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& os, std::uint32_t v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}
std::uint32_t get_u32(std::istream& is) {
    std::uint32_t v = 0;
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
}
void put_f64(std::ostream& os, double v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}
double get_f64(std::istream& is) {
    double v = 0;
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
}
}  // namespace

void write_field(const std::filesystem::path& path, const Vec3Field& f) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("write_field: cannot open " + path.string());
    const Grid& g = f.grid();
    os.write(kMagic, 4);
    put_u32(os, kVersion);
    put_u32(os, static_cast<std::uint32_t>(g.dim()));
    put_u32(os, static_cast<std::uint32_t>(g.mode()));
    put_u32(os, 3);
    for (int a = 0; a < g.dim(); ++a) put_u32(os, static_cast<std::uint32_t>(g.points(a)));
    for (int a = 0; a < g.dim(); ++a) put_f64(os, g.extent(a));
    os.write(reinterpret_cast<const char*>(f.raw()),
             static_cast<std::streamsize>(sizeof(double) * f.data().size()));
    if (!os) throw std::runtime_error("write_field: write failed for " + path.string());
}

Vec3Field read_field(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("read_field: cannot open " + path.string());
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("read_field: bad magic in " + path.string());
    if (get_u32(is) != kVersion) throw std::runtime_error("read_field: unsupported version");
    const int dim = static_cast<int>(get_u32(is));
    const auto mode = static_cast<BoundaryMode>(get_u32(is));
    const std::uint32_t comps = get_u32(is);
    if (comps != 3) throw std::runtime_error("read_field: expected 3 components");
    std::vector<int> points(dim);
    for (int a = 0; a < dim; ++a) points[a] = static_cast<int>(get_u32(is));
    std::vector<double> extents(dim);
    for (int a = 0; a < dim; ++a) extents[a] = get_f64(is);
    Grid g = make_grid(dim, extents, points, mode);
    Vec3Field f(g);
    is.read(reinterpret_cast<char*>(f.raw()),
            static_cast<std::streamsize>(sizeof(double) * f.data().size()));
    if (!is) throw std::runtime_error("read_field: truncated payload in " + path.string());
    return f;
}

std::string field_to_csv(const Vec3Field& f) {
    const Grid& g = f.grid();
    std::ostringstream os;
    const char* coords[3] = {"x", "y", "z"};
    for (int a = 0; a < g.dim(); ++a) os << coords[a] << ',';
    os << "c0,c1,c2\n";
    char buf[32];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        os << buf;
    };
    for (std::int64_t n = 0; n < g.node_count(); ++n) {
        int idx[3];
        g.decompose(n, idx);
        for (int a = 0; a < g.dim(); ++a) {
            put(g.coord(a, idx[a]));
            os << ',';
        }
        for (int c = 0; c < 3; ++c) {
            put(f.at(n, c));
            if (c < 2) os << ',';
        }
        os << "\n";
    }
    return os.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("write_text: cannot open " + path.string());
    os << text;
}

}  // namespace llf
