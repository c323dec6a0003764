#ifndef ANYCSP_CHECKPOINT_HPP
#define ANYCSP_CHECKPOINT_HPP

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>

#include "anycsp/policy.hpp"

namespace anycsp {

// Binary container: magic "ACSPv1", then d, aggregation mode and per-tensor
// shapes, then 64-bit little-endian floats per parameter in declared order.
namespace detail {

inline void put_u32(std::ostream& os, uint32_t x) {
    unsigned char b[4] = {static_cast<unsigned char>(x), static_cast<unsigned char>(x >> 8),
                          static_cast<unsigned char>(x >> 16),
                          static_cast<unsigned char>(x >> 24)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

inline uint32_t get_u32(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
           (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
}

inline void put_f64(std::ostream& os, double x) {
    uint64_t u;
    std::memcpy(&u, &x, 8);
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(u >> (8 * i));
    os.write(reinterpret_cast<const char*>(b), 8);
}

inline double get_f64(std::istream& is) {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    uint64_t u = 0;
    for (int i = 0; i < 8; ++i) u |= static_cast<uint64_t>(b[i]) << (8 * i);
    double x;
    std::memcpy(&x, &u, 8);
    return x;
}

}  // namespace detail

inline void save_checkpoint(const std::string& path, const PolicyParameters& p) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write checkpoint: " + path);
    os.write("ACSPv1", 6);
    detail::put_u32(os, static_cast<uint32_t>(p.d));
    os.put(static_cast<char>(p.agg));
    detail::put_u32(os, static_cast<uint32_t>(p.t.size()));
    for (const auto& t : p.t) {
        detail::put_u32(os, static_cast<uint32_t>(t.rows));
        detail::put_u32(os, static_cast<uint32_t>(t.cols));
    }
    for (const auto& t : p.t)
        for (double x : t.v) detail::put_f64(os, x);
    if (!os) throw std::runtime_error("checkpoint write failed: " + path);
}

inline PolicyParameters load_checkpoint(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot read checkpoint: " + path);
    char magic[6];
    is.read(magic, 6);
    if (!is || std::memcmp(magic, "ACSPv1", 6) != 0)
        throw std::runtime_error("bad checkpoint magic: " + path);
    const int d = static_cast<int>(detail::get_u32(is));
    const Agg agg = static_cast<Agg>(is.get());
    const uint32_t n = detail::get_u32(is);
    if (n != P_COUNT) throw std::runtime_error("checkpoint parameter count mismatch");
    PolicyParameters p = PolicyParameters::create(d, agg);
    for (uint32_t i = 0; i < n; ++i) {
        const int r = static_cast<int>(detail::get_u32(is));
        const int c = static_cast<int>(detail::get_u32(is));
        if (r != p.t[i].rows || c != p.t[i].cols)
            throw std::runtime_error("checkpoint shape mismatch for " +
                                     std::string(param_names()[i]));
    }
    for (auto& t : p.t)
        for (double& x : t.v) x = detail::get_f64(is);
    if (!is) throw std::runtime_error("checkpoint truncated: " + path);
    return p;
}

}  // namespace anycsp

#endif
