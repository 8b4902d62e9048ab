#include "mhdlab/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

static_assert(std::endian::native == std::endian::little,
              "checkpoint format is little endian; byte swapping is not implemented");

namespace mhdlab {

namespace {
constexpr char magic[4] = {'M', 'H', 'D', 'T'};
constexpr std::uint32_t format_version = 1;

const SpectralField* field_by_index(const PerturbationState& s, int i) {
    switch (i) {
        case 0: return &s.a;
        case 1: return &s.u[0];
        case 2: return &s.u[1];
        case 3: return &s.u[2];
        case 4: return &s.h[0];
        case 5: return &s.h[1];
        default: return &s.h[2];
    }
}

SpectralField* field_by_index(PerturbationState& s, int i) {
    return const_cast<SpectralField*>(field_by_index(static_cast<const PerturbationState&>(s), i));
}
} // namespace

void write_checkpoint(const std::string& path, const PerturbationState& s) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("write_checkpoint: cannot open " + path);
    out.write(magic, 4);
    const std::uint32_t ver = format_version;
    const std::uint32_t n = static_cast<std::uint32_t>(s.grid().n);
    out.write(reinterpret_cast<const char*>(&ver), 4);
    out.write(reinterpret_cast<const char*>(&n), 4);
    out.write(reinterpret_cast<const char*>(&s.time), 8);
    for (int f = 0; f < 7; ++f) {
        const SpectralField* fld = field_by_index(s, f);
        out.write(reinterpret_cast<const char*>(fld->coeff.data()),
                  static_cast<std::streamsize>(fld->coeff.size() * sizeof(cplx)));
    }
    if (!out) throw std::runtime_error("write_checkpoint: short write to " + path);
}

PerturbationState read_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_checkpoint: cannot open " + path);
    char m[4];
    in.read(m, 4);
    if (!in || std::memcmp(m, magic, 4) != 0)
        throw std::runtime_error("read_checkpoint: bad magic in " + path);
    std::uint32_t ver = 0, n = 0;
    in.read(reinterpret_cast<char*>(&ver), 4);
    in.read(reinterpret_cast<char*>(&n), 4);
    if (!in || ver != format_version)
        throw std::runtime_error("read_checkpoint: unsupported format version in " + path);
    if (n < 4 || n % 2 != 0 || n > 4096)
        throw std::runtime_error("read_checkpoint: implausible grid size in " + path);
    PerturbationState s{Grid3(static_cast<int>(n))};
    in.read(reinterpret_cast<char*>(&s.time), 8);
    for (int f = 0; f < 7; ++f) {
        SpectralField* fld = field_by_index(s, f);
        in.read(reinterpret_cast<char*>(fld->coeff.data()),
                static_cast<std::streamsize>(fld->coeff.size() * sizeof(cplx)));
    }
    if (!in) throw std::runtime_error("read_checkpoint: truncated file " + path);
    return s;
}

} // namespace mhdlab
