#include "smellprop/rng.hpp"

#include "smellprop/error.hpp"

namespace smellprop {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s, std::uint64_t h) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::string_view key_a, std::string_view key_b) {
    std::uint64_t h = fnv1a(key_a, 0xCBF29CE484222325ULL);
    h = fnv1a("\x1f", h);
    h = fnv1a(key_b, h);
    return splitmix64(master ^ splitmix64(h));
}

std::uint64_t DeterministicRng::uniform_index(std::uint64_t n) {
    if (n == 0) throw InvariantError("uniform_index called with n == 0");
    // Rejection sampling over the largest multiple of n.
    const std::uint64_t limit = std::uint64_t(-1) - (std::uint64_t(-1) % n + 1) % n;
    std::uint64_t x = engine_();
    while (x > limit) x = engine_();
    return x % n;
}

}  // namespace smellprop
