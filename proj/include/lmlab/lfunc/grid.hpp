#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "../errors.hpp"
#include "line_eval.hpp"

namespace lmlab {

inline constexpr double default_clamp_floor = -40.0;
inline constexpr std::uint32_t grid_format_version = 1;

inline std::size_t grid_length(double t0, double t1, double delta) {
    if (!(delta > 0) || !std::isfinite(delta)) throw DomainError("grid step must be finite and > 0");
    if (!std::isfinite(t0) || !std::isfinite(t1)) throw DomainError("grid bounds must be finite");
    if (t1 < t0) throw DomainError("grid requires t1 >= t0");
    const double n = std::floor((t1 - t0) / delta * (1.0 + 1e-12));
    if (!(n <= 1e9)) throw DomainError("grid exceeds 1e9 points");
    return static_cast<std::size_t>(n) + 1;
}

struct CriticalLineGrid {
    std::string id;  // canonical selector
    double t0 = 1.0, t1 = 1.0, delta = 1.0;
    double clamp_floor = default_clamp_floor;
    double precision = 1e-8;
    std::vector<double> values;  // log|L(1/2 + i t_j)|, clamped below at clamp_floor
    std::size_t clamped_count = 0;

    std::size_t size() const { return values.size(); }
    double t(std::size_t j) const {
        return static_cast<double>(static_cast<long double>(t0) + static_cast<long double>(j) * delta);
    }
    bool clamped(std::size_t j) const { return values[j] <= clamp_floor; }
    double clamped_fraction() const { return values.empty() ? 0.0 : double(clamped_count) / double(values.size()); }
};

struct GridOptions {
    double precision = 1e-8;
    double clamp_floor = default_clamp_floor;
    Parallelism par{};
};

inline CriticalLineGrid log_abs_grid(const LFunctionId& id, double t0, double t1, double delta,
                                     const GridOptions& opt = {}) {
    if (!(t0 >= 1.0)) throw DomainError("log_abs_grid requires t0 >= 1");
    CriticalLineGrid g;
    g.id = id.canonical();
    g.t0 = t0;
    g.t1 = t1;
    g.delta = delta;
    g.clamp_floor = opt.clamp_floor;
    g.precision = opt.precision;
    const std::size_t n = grid_length(t0, t1, delta);
    g.values.resize(n);
    LineOptions lo;
    lo.precision = opt.precision;
    lo.par = opt.par;
    evaluate_line_chunks(id, 0.5, t0, delta, n, lo, [&](std::size_t i0, const cplx* v, std::size_t m) {
        for (std::size_t j = 0; j < m; ++j) {
            const double a = std::abs(v[j]);
            const double lv = a > 0.0 ? std::log(a) : -HUGE_VAL;
            g.values[i0 + j] = lv < opt.clamp_floor ? opt.clamp_floor : lv;
        }
    });
    for (double v : g.values) g.clamped_count += v <= opt.clamp_floor;
    return g;
}

// Sub-grid of the points with index in [first, first + count).
inline CriticalLineGrid slice(const CriticalLineGrid& g, std::size_t first, std::size_t count) {
    if (first + count > g.size()) throw DomainError("grid slice out of range");
    CriticalLineGrid s = g;
    s.values.assign(g.values.begin() + static_cast<std::ptrdiff_t>(first),
                    g.values.begin() + static_cast<std::ptrdiff_t>(first + count));
    s.t0 = g.t(first);
    s.t1 = g.t(first + count - 1);
    s.clamped_count = 0;
    for (double v : s.values) s.clamped_count += v <= s.clamp_floor;
    return s;
}

// Points with t in [a, b].
inline CriticalLineGrid restrict_to(const CriticalLineGrid& g, double a, double b) {
    if (g.size() == 0) throw DomainError("empty grid");
    const double fa = std::ceil((a - g.t0) / g.delta * (1 - 1e-12));
    const double fb = std::floor((b - g.t0) / g.delta * (1 + 1e-12));
    const auto ia = static_cast<std::size_t>(std::max(0.0, fa));
    const auto ib = static_cast<std::size_t>(std::min(double(g.size() - 1), fb));
    if (fb < 0 || ia > ib) throw DomainError("grid does not cover the requested range");
    return slice(g, ia, ib - ia + 1);
}

namespace detail {
inline constexpr char grid_magic[8] = {'L', 'M', 'G', 'R', 'I', 'D', '\0', '\1'};

template <class T>
void put(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <class T>
bool get(std::istream& is, T& v) {
    return static_cast<bool>(is.read(reinterpret_cast<char*>(&v), sizeof(T)));
}
} // namespace detail

struct GridHeader {
    std::string id;
    double t0 = 0, t1 = 0, delta = 0, clamp_floor = 0, precision = 0;
    std::uint32_t version = grid_format_version;
    std::uint64_t count = 0;
};

// Binary layout (little-endian host order): magic[8], u32 version, u32 id length,
// id bytes, f64 t0, t1, delta, clamp_floor, precision, u64 count, f64 values[count].
inline void write_grid(std::ostream& os, const CriticalLineGrid& g, std::uint32_t version = grid_format_version) {
    os.write(detail::grid_magic, sizeof(detail::grid_magic));
    detail::put(os, version);
    detail::put(os, static_cast<std::uint32_t>(g.id.size()));
    os.write(g.id.data(), static_cast<std::streamsize>(g.id.size()));
    for (double v : {g.t0, g.t1, g.delta, g.clamp_floor, g.precision}) detail::put(os, v);
    detail::put(os, static_cast<std::uint64_t>(g.values.size()));
    os.write(reinterpret_cast<const char*>(g.values.data()), static_cast<std::streamsize>(g.values.size() * sizeof(double)));
}

inline bool read_grid_header(std::istream& is, GridHeader& h) {
    char magic[8];
    if (!is.read(magic, 8) || std::memcmp(magic, detail::grid_magic, 8) != 0) return false;
    std::uint32_t len = 0;
    if (!detail::get(is, h.version) || !detail::get(is, len) || len > 4096) return false;
    h.id.resize(len);
    if (!is.read(h.id.data(), len)) return false;
    for (double* v : {&h.t0, &h.t1, &h.delta, &h.clamp_floor, &h.precision})
        if (!detail::get(is, *v)) return false;
    return detail::get(is, h.count);
}

// Throws DataError on a malformed or truncated stream.
inline CriticalLineGrid read_grid(std::istream& is) {
    GridHeader h;
    if (!read_grid_header(is, h)) throw DataError("grid file: bad header");
    if (h.count > 1000000001ull) throw DataError("grid file: implausible length");
    CriticalLineGrid g;
    g.id = h.id;
    g.t0 = h.t0;
    g.t1 = h.t1;
    g.delta = h.delta;
    g.clamp_floor = h.clamp_floor;
    g.precision = h.precision;
    g.values.resize(h.count);
    if (!is.read(reinterpret_cast<char*>(g.values.data()), static_cast<std::streamsize>(h.count * sizeof(double))))
        throw DataError("grid file: truncated payload");
    if (is.peek() != std::char_traits<char>::eof()) throw DataError("grid file: trailing bytes");
    if (h.count != grid_length(h.t0, h.t1, h.delta)) throw DataError("grid file: length disagrees with header");
    for (double v : g.values) {
        if (!std::isfinite(v) || v < g.clamp_floor) throw DataError("grid file: value below clamp floor");
        g.clamped_count += v <= g.clamp_floor;
    }
    return g;
}

inline void write_grid_csv(std::ostream& os, const CriticalLineGrid& g) {
    os << "t,log_abs,clamped\n";
    char buf[96];
    for (std::size_t j = 0; j < g.size(); ++j) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%d\n", g.t(j), g.values[j], g.clamped(j) ? 1 : 0);
        os << buf;
    }
}

} // namespace lmlab
