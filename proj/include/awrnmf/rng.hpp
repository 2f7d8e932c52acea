#ifndef AWRNMF_RNG_HPP
#define AWRNMF_RNG_HPP

#include <cstdint>
#include <random>

namespace awrnmf {

// splitmix64 finalizer; used to derive independent per-trial seeds from a
// base seed plus a handful of counters, so adding a method or grid point
// never shifts another trial's stream.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0,
                                 std::uint64_t d = 0) {
    std::uint64_t s = mix64(base);
    s = mix64(s ^ mix64(a + 1));
    s = mix64(s ^ mix64(b + 2));
    s = mix64(s ^ mix64(c + 3));
    s = mix64(s ^ mix64(d + 4));
    return s;
}

using Rng = std::mt19937_64;

}  // namespace awrnmf

#endif
