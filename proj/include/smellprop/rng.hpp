#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace smellprop {

// Name of the generator recorded in output metadata.
inline constexpr std::string_view kRngAlgorithm = "mt19937_64";

// Mixes a master seed with string keys into an independent child seed, so
// per-smell/per-model streams do not depend on scheduling order.
std::uint64_t derive_seed(std::uint64_t master, std::string_view key_a, std::string_view key_b = {});

// mt19937_64 with a portable uniform index draw; std::uniform_int_distribution
// is implementation-defined and would break cross-platform reproducibility.
class DeterministicRng {
public:
    explicit DeterministicRng(std::uint64_t seed) : engine_(seed) {}

    // Uniform on [0, n). n must be positive.
    std::uint64_t uniform_index(std::uint64_t n);

private:
    std::mt19937_64 engine_;
};

}  // namespace smellprop
