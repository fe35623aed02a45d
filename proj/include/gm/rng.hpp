#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

namespace gm {

// 64-bit FNV-1a over a text key; used to derive independent per-task seeds.
inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Uniform double in [0, 1). std::uniform_real_distribution is
// implementation-defined, so draws are built from raw engine output.
inline double uniform01(std::mt19937_64& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

// Uniform integer in [lo, hi], inclusive. Multiply-shift keeps the mapping
// identical across platforms.
inline long long uniform_int(std::mt19937_64& g, long long lo, long long hi) {
    const auto span = static_cast<unsigned long long>(hi - lo) + 1ull;
    const auto r = static_cast<unsigned long long>(
        (static_cast<unsigned __int128>(g()) * static_cast<unsigned __int128>(span)) >> 64);
    return lo + static_cast<long long>(r);
}

template <typename T>
void shuffle_vector(std::vector<T>& v, std::mt19937_64& g) {
    for (std::size_t i = v.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(uniform_int(g, 0, static_cast<long long>(i) - 1));
        std::swap(v[i - 1], v[j]);
    }
}

}  // namespace gm
