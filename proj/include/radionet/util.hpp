#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace radionet {

// Internal invariant check; throws so the harness can surface node/round context.
struct invariant_error : std::logic_error {
    using std::logic_error::logic_error;
};

#define RN_CHECK(cond, msg)                                                  \
    do {                                                                     \
        if (!(cond)) throw ::radionet::invariant_error(std::string(msg));    \
    } while (0)

// Smallest k with 2^k >= n. ceil_log2(1) == 0.
inline int ceil_log2(long n) {
    int k = 0;
    long v = 1;
    while (v < n) {
        v <<= 1;
        ++k;
    }
    return k;
}

// ceil(log n) clamped to >= 1, as used by stage/modulus arithmetic.
inline int clog(long n) {
    int k = ceil_log2(n);
    return k < 1 ? 1 : k;
}

// ceil(log n)^2 -- the spec reads "log^2 n" with the ceiling applied first.
inline long clog2sq(long n) {
    long k = clog(n);
    return k * k;
}

// 64-bit FNV-1a, used for payload digests in traces.
inline std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t h = 1469598103934665603ull) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

inline std::uint64_t fnv1a(const std::string& s, std::uint64_t h = 1469598103934665603ull) {
    return fnv1a(s.data(), s.size(), h);
}

// splitmix64: cheap deterministic seed derivation for per-attempt reseeding.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

}  // namespace radionet
