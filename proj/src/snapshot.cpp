#include "nlpf/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

namespace nlpf {

namespace {

constexpr char kMagic[5] = {'N', 'L', 'P', 'F', '1'};

void put_u32(std::string& out, std::uint32_t v) {
    for (int b = 0; b < 4; ++b) out.push_back(char((v >> (8 * b)) & 0xff));
}

void put_f64(std::string& out, double x) {
    const auto v = std::bit_cast<std::uint64_t>(x);
    for (int b = 0; b < 8; ++b) out.push_back(char((v >> (8 * b)) & 0xff));
}

class Reader {
public:
    explicit Reader(const std::string& path) : in_(path, std::ios::binary) {
        if (!in_) throw FormatError("snapshot: cannot open " + path);
    }
    void bytes(char* dst, std::size_t count) {
        in_.read(dst, std::streamsize(count));
        if (std::size_t(in_.gcount()) != count)
            throw FormatError("snapshot: truncated file");
    }
    std::uint32_t u32() {
        unsigned char b[4];
        bytes(reinterpret_cast<char*>(b), 4);
        return std::uint32_t(b[0]) | std::uint32_t(b[1]) << 8 | std::uint32_t(b[2]) << 16 |
               std::uint32_t(b[3]) << 24;
    }
    double f64() {
        unsigned char b[8];
        bytes(reinterpret_cast<char*>(b), 8);
        std::uint64_t v = 0;
        for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
        return std::bit_cast<double>(v);
    }

private:
    std::ifstream in_;
};

}  // namespace

void write_snapshot(const std::string& path, const Field& field, double t) {
    const GridSpec& g = field.grid();
    std::string buf;
    buf.reserve(5 + 8 + 48 + field.size() * 8);
    buf.append(kMagic, 5);
    put_u32(buf, std::uint32_t(g.m));
    put_u32(buf, std::uint32_t(g.n));
    put_f64(buf, g.x0);
    put_f64(buf, g.y0);
    put_f64(buf, g.L1);
    put_f64(buf, g.L2);
    put_f64(buf, t);
    for (double x : field.values()) put_f64(buf, x);

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("snapshot: cannot open " + path + " for writing");
    out.write(buf.data(), std::streamsize(buf.size()));
    if (!out) throw FormatError("snapshot: short write to " + path);
}

Snapshot read_snapshot(const std::string& path) {
    Reader r(path);
    char magic[5];
    r.bytes(magic, 5);
    if (std::memcmp(magic, kMagic, 5) != 0)
        throw FormatError("snapshot: bad magic in " + path);
    const std::uint32_t m = r.u32();
    const std::uint32_t n = r.u32();
    if (m == 0 || n == 0 || std::uint64_t(m) * n > (std::uint64_t(1) << 30))
        throw FormatError("snapshot: implausible dimensions");
    const double x0 = r.f64();
    const double y0 = r.f64();
    const double L1 = r.f64();
    const double L2 = r.f64();
    const double t = r.f64();

    Snapshot snap{Field(GridSpec::make(L1, L2, int(m), int(n), x0, y0), 0.0, FieldRole::state),
                  t};
    for (double& x : snap.field.values()) x = r.f64();
    return snap;
}

}  // namespace nlpf
