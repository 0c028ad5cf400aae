// Deterministic on-disk formats: THPF binary snapshots and the
// diagnostics CSV.
#ifndef THPF_IO_HPP
#define THPF_IO_HPP

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "thpf/state.hpp"

namespace thpf {

struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void put_u32(std::ostream& os, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16),
                          static_cast<unsigned char>(v >> 24)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

inline std::uint32_t get_u32(std::istream& is, const char* what) {
    unsigned char b[4];
    if (!is.read(reinterpret_cast<char*>(b), 4))
        throw io_error(std::string("snapshot: truncated while reading ") + what);
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) |
           (static_cast<std::uint32_t>(b[3]) << 24);
}

inline void put_f64(std::ostream& os, double v) {
    std::uint64_t u;
    std::memcpy(&u, &v, 8);
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(u >> (8 * i));
    os.write(reinterpret_cast<const char*>(b), 8);
}

inline double get_f64(std::istream& is, const char* what) {
    unsigned char b[8];
    if (!is.read(reinterpret_cast<char*>(b), 8))
        throw io_error(std::string("snapshot: truncated while reading ") + what);
    std::uint64_t u = 0;
    for (int i = 0; i < 8; ++i) u |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    double v;
    std::memcpy(&v, &u, 8);
    return v;
}

inline void put_array(std::ostream& os, const std::vector<double>& a) {
    for (double v : a) put_f64(os, v);
}

inline void get_array(std::istream& is, std::vector<double>& a, size_t n, const char* what) {
    a.resize(n);
    for (size_t k = 0; k < n; ++k) a[k] = get_f64(is, what);
}

}  // namespace detail

struct Snapshot {
    std::uint32_t nx = 0, ny = 0;
    double lx = 0, ly = 0;
    State state;
};

inline void write_snapshot(const State& s, const Grid& g, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw io_error("write_snapshot: cannot open " + path);
    os.write("THPF", 4);
    detail::put_u32(os, 1);  // version
    detail::put_u32(os, static_cast<std::uint32_t>(g.nx));
    detail::put_u32(os, static_cast<std::uint32_t>(g.ny));
    detail::put_f64(os, g.lx);
    detail::put_f64(os, g.ly);
    detail::put_f64(os, s.t);
    detail::put_array(os, s.u.x.v);
    detail::put_array(os, s.u.y.v);
    detail::put_array(os, s.phi.v);
    detail::put_array(os, s.mu.v);
    detail::put_array(os, s.theta.v);
    detail::put_array(os, s.p.v);
    if (!os) throw io_error("write_snapshot: write failure on " + path);
}

inline Snapshot read_snapshot(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw io_error("read_snapshot: cannot open " + path);
    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, "THPF", 4) != 0)
        throw io_error("read_snapshot: bad magic in " + path);
    std::uint32_t version = detail::get_u32(is, "version");
    if (version != 1)
        throw io_error("read_snapshot: unsupported version " + std::to_string(version));
    Snapshot snap;
    snap.nx = detail::get_u32(is, "nx");
    snap.ny = detail::get_u32(is, "ny");
    snap.lx = detail::get_f64(is, "lx");
    snap.ly = detail::get_f64(is, "ly");
    snap.state.t = detail::get_f64(is, "t");
    size_t n = static_cast<size_t>(snap.nx) * snap.ny;
    if (snap.nx < 4 || snap.ny < 4 || n > (1u << 28))
        throw io_error("read_snapshot: implausible grid size in " + path);
    detail::get_array(is, snap.state.u.x.v, n, "u1");
    detail::get_array(is, snap.state.u.y.v, n, "u2");
    detail::get_array(is, snap.state.phi.v, n, "phi");
    detail::get_array(is, snap.state.mu.v, n, "mu");
    detail::get_array(is, snap.state.theta.v, n, "theta");
    detail::get_array(is, snap.state.p.v, n, "p");
    is.peek();
    if (!is.eof()) throw io_error("read_snapshot: trailing bytes in " + path);
    return snap;
}

inline constexpr const char* kDiagHeader =
    "t,dt,mean_phi,kinetic,grad_energy,potential,thermal,total_energy,entropy,"
    "entropy_production,theta_min,theta_max,umax,div_norm";

inline void write_diagnostics(const std::vector<DiagRecord>& records,
                              const std::string& path) {
    if (records.empty()) throw io_error("write_diagnostics: no records");
    std::ofstream os(path);
    if (!os) throw io_error("write_diagnostics: cannot open " + path);
    os << kDiagHeader << "\n";
    char buf[32];
    auto put = [&](double v, char sep) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        os << buf << sep;
    };
    for (const DiagRecord& r : records) {
        put(r.t, ',');
        put(r.dt, ',');
        put(r.mean_phi, ',');
        put(r.kinetic, ',');
        put(r.grad_energy, ',');
        put(r.potential, ',');
        put(r.thermal, ',');
        put(r.total_energy, ',');
        put(r.entropy, ',');
        put(r.entropy_production, ',');
        put(r.theta_min, ',');
        put(r.theta_max, ',');
        put(r.umax, ',');
        put(r.div_norm, '\n');
    }
    if (!os) throw io_error("write_diagnostics: write failure on " + path);
}

inline std::vector<DiagRecord> read_diagnostics(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw io_error("read_diagnostics: cannot open " + path);
    std::string line;
    if (!std::getline(is, line) || line != kDiagHeader)
        throw io_error("read_diagnostics: bad header in " + path);
    std::vector<DiagRecord> out;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        DiagRecord r;
        double* fields[14] = {&r.t, &r.dt, &r.mean_phi, &r.kinetic, &r.grad_energy,
                              &r.potential, &r.thermal, &r.total_energy, &r.entropy,
                              &r.entropy_production, &r.theta_min, &r.theta_max,
                              &r.umax, &r.div_norm};
        size_t pos = 0;
        for (int i = 0; i < 14; ++i) {
            size_t next = (i == 13) ? line.size() : line.find(',', pos);
            if (next == std::string::npos)
                throw io_error("read_diagnostics: short row in " + path);
            *fields[i] = std::stod(line.substr(pos, next - pos));
            pos = next + 1;
        }
        out.push_back(r);
    }
    if (out.empty()) throw io_error("read_diagnostics: no data rows in " + path);
    return out;
}

}  // namespace thpf

#endif
