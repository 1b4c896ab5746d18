#include "cnls/snapshot_io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>

namespace cnls {

void write_field_csv(const Field& f, double t, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    const bool phys = f.space == Space::physical;
    out << "# t = ";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", t);
    out << buf << "\n" << (phys ? "x" : "xi") << ",re,im\n";
    const auto& nodes = phys ? f.grid->x : f.grid->xi;
    char line[128];
    for (std::size_t j = 0; j < f.size(); ++j) {
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", nodes[j], f.values[j].real(),
                      f.values[j].imag());
        out << line;
    }
}

void write_field_binary(const Field& f, double t, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    const std::uint64_t n = f.size();
    const double length = f.grid->length;
    const std::uint8_t tag = (f.space == Space::physical) ? 0 : 1;
    out.write(reinterpret_cast<const char*>(&n), sizeof n);
    out.write(reinterpret_cast<const char*>(&length), sizeof length);
    out.write(reinterpret_cast<const char*>(&t), sizeof t);
    out.write(reinterpret_cast<const char*>(&tag), sizeof tag);
    for (const auto& z : f.values) {
        const double re = z.real(), im = z.imag();
        out.write(reinterpret_cast<const char*>(&re), sizeof re);
        out.write(reinterpret_cast<const char*>(&im), sizeof im);
    }
    if (!out) throw IoError("short write to " + path);
}

BinarySnapshot read_field_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::uint64_t n = 0;
    double length = 0.0, t = 0.0;
    std::uint8_t tag = 0;
    in.read(reinterpret_cast<char*>(&n), sizeof n);
    in.read(reinterpret_cast<char*>(&length), sizeof length);
    in.read(reinterpret_cast<char*>(&t), sizeof t);
    in.read(reinterpret_cast<char*>(&tag), sizeof tag);
    if (!in) throw IoError("truncated snapshot header in " + path);

    BinarySnapshot snap;
    snap.t = t;
    auto grid = Grid::make(static_cast<std::size_t>(n), length);
    snap.field = Field(grid, tag == 0 ? Space::physical : Space::frequency);
    for (std::size_t j = 0; j < n; ++j) {
        double re = 0.0, im = 0.0;
        in.read(reinterpret_cast<char*>(&re), sizeof re);
        in.read(reinterpret_cast<char*>(&im), sizeof im);
        snap.field.values[j] = cplx{re, im};
    }
    if (!in) throw IoError("truncated snapshot payload in " + path);
    return snap;
}

} // namespace cnls
