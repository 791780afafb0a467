#include "cqnls/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "cqnls/error.hpp"

namespace cqnls {

namespace {

std::uint64_t to_little(std::uint64_t v) {
    if constexpr (std::endian::native == std::endian::big) {
        std::uint64_t r = 0;
        for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
        return r;
    }
    return v;
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void write_snapshot(std::ostream& out, const Field& field, double t) {
    const Grid2D& g = field.grid();
    out << snapshot_magic << snapshot_version << ' ' << g.J << ' ' << g.K << ' ' << fmt17(g.a) << ' ' << fmt17(g.b)
        << ' ' << fmt17(g.c) << ' ' << fmt17(g.d) << ' ' << fmt17(t) << '\n';
    std::vector<std::uint64_t> payload;
    payload.reserve(2 * field.size());
    for (const cplx& v : field.values()) {
        payload.push_back(to_little(std::bit_cast<std::uint64_t>(v.real())));
        payload.push_back(to_little(std::bit_cast<std::uint64_t>(v.imag())));
    }
    out.write(reinterpret_cast<const char*>(payload.data()), std::streamsize(payload.size() * sizeof(std::uint64_t)));
    if (!out) throw IoError("failed to write snapshot");
}

Snapshot read_snapshot(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) throw FormatError("snapshot: missing header");
    std::istringstream hs(header);
    std::string tag;
    hs >> tag;
    const std::string magic = snapshot_magic;
    if (tag.rfind(magic, 0) != 0) throw FormatError("snapshot: bad magic '" + tag + "'");
    if (tag != magic + std::to_string(snapshot_version))
        throw FormatError("snapshot: unsupported version '" + tag.substr(magic.size()) + "'");
    int J = 0, K = 0;
    double a, b, c, d, t;
    if (!(hs >> J >> K >> a >> b >> c >> d >> t)) throw FormatError("snapshot: malformed header");
    std::string extra;
    if (hs >> extra) throw FormatError("snapshot: trailing header fields");
    Grid2D g;
    try {
        g = make_grid(a, b, c, d, J, K);
    } catch (const InvalidGrid& e) {
        throw FormatError(std::string("snapshot: ") + e.what());
    }

    const std::size_t n = g.nodes();
    std::vector<std::uint64_t> payload(2 * n);
    in.read(reinterpret_cast<char*>(payload.data()), std::streamsize(payload.size() * sizeof(std::uint64_t)));
    const auto got = std::size_t(in.gcount());
    if (got != payload.size() * sizeof(std::uint64_t)) {
        std::ostringstream os;
        os << "snapshot: truncated payload (" << got / 16 << " of " << n << " complex values)";
        throw FormatError(os.str());
    }
    if (in.peek() != std::char_traits<char>::eof())
        throw FormatError("snapshot: payload longer than the header's dimensions");

    std::vector<cplx> values(n);
    for (std::size_t i = 0; i < n; ++i) {
        values[i] = {std::bit_cast<double>(to_little(payload[2 * i])), std::bit_cast<double>(to_little(payload[2 * i + 1]))};
    }
    return {Field(g, std::move(values)), t};
}

void write_snapshot(const std::string& path, const Field& field, double t) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    write_snapshot(f, field, t);
}

Snapshot read_snapshot(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "'");
    return read_snapshot(f);
}

}  // namespace cqnls
