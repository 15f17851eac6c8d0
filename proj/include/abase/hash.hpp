#pragma once

#include <cstdint>
#include <string_view>

#include "abase/rng.hpp"

namespace abase {

// Seedable stable 64-bit hash. Used for key -> partition placement and for
// proxy group routing; must be identical across platforms, so std::hash is
// deliberately avoided.
constexpr std::uint64_t hash64(std::uint64_t key, std::uint64_t seed) {
    std::uint64_t s = seed ^ 0x9e3779b97f4a7c15ULL;
    std::uint64_t h = splitmix64(s);
    s ^= key;
    h ^= splitmix64(s);
    s += key ^ (h >> 32);
    return splitmix64(s);
}

inline std::uint64_t hash_bytes(std::string_view bytes, std::uint64_t seed) {
    std::uint64_t h = seed ^ 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return hash64(h, seed);
}

}  // namespace abase
