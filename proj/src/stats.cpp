#include "smellprop/stats.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <array>
#include <cmath>

#include "smellprop/error.hpp"
#include "smellprop/moments.hpp"
#include "smellprop/rng.hpp"

namespace smellprop {

BootstrapDistribution bootstrap_means(std::span<const double> values, std::size_t b,
                                      std::size_t resample_size, std::uint64_t seed) {
    if (values.empty()) throw DataError("cannot bootstrap an empty sample");
    if (b == 0) throw ConfigError("bootstrap resample count must be at least 1");
    if (resample_size == 0) resample_size = values.size();

    BootstrapDistribution dist;
    dist.b = b;
    dist.resample_size = resample_size;
    dist.seed = seed;
    dist.resample_means.reserve(b);

    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    DeterministicRng rng(seed);
    for (std::size_t r = 0; r < b; ++r) {
        RunningMoments m;
        for (std::size_t i = 0; i < resample_size; ++i) {
            m.add(values[static_cast<std::size_t>(rng.uniform_index(values.size()))]);
        }
        dist.resample_means.push_back(std::clamp(m.mean(), *lo, *hi));
    }
    return dist;
}

double empirical_quantile(std::span<const double> sorted, double p) {
    if (sorted.empty()) throw DataError("quantile of an empty sample");
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError(fmt::format("quantile probability {} outside [0, 1]", p));
    const double h = static_cast<double>(sorted.size() - 1) * p;
    const auto lower = static_cast<std::size_t>(std::floor(h));
    const std::size_t upper = std::min(lower + 1, sorted.size() - 1);
    const double frac = h - static_cast<double>(lower);
    if (frac == 0.0 || sorted[lower] == sorted[upper]) return sorted[lower];
    return sorted[lower] + frac * (sorted[upper] - sorted[lower]);
}

IntervalEstimate percentile_ci(const BootstrapDistribution &dist, double level) {
    if (!(level > 0.0 && level < 1.0)) {
        throw ConfigError(fmt::format("confidence level {} must lie strictly between 0 and 1", level));
    }
    std::vector<double> sorted = dist.resample_means;
    std::sort(sorted.begin(), sorted.end());
    const double tail = (1.0 - level) / 2.0;
    IntervalEstimate ci;
    ci.level = level;
    ci.low = empirical_quantile(sorted, tail);
    ci.high = empirical_quantile(sorted, 1.0 - tail);
    ci.margin_of_error = (ci.high - ci.low) / 2.0;
    return ci;
}

namespace {

std::array<std::uint64_t, kOverlapBins> histogram(std::span<const double> values) {
    std::array<std::uint64_t, kOverlapBins> counts{};
    for (double v : values) {
        const double clamped = std::clamp(v, 0.0, 1.0);
        auto bin = static_cast<std::size_t>(clamped * static_cast<double>(kOverlapBins));
        ++counts[std::min(bin, kOverlapBins - 1)];
    }
    return counts;
}

}  // namespace

double overlap_coefficient(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw DataError("overlap of an empty distribution");
    const auto ca = histogram(a);
    const auto cb = histogram(b);
    // min(ca/na, cb/nb) summed over bins, kept in integers until the end so
    // identical distributions give exactly 1.
    const std::uint64_t na = a.size();
    const std::uint64_t nb = b.size();
    std::uint64_t shared = 0;
    for (std::size_t i = 0; i < kOverlapBins; ++i) shared += std::min(ca[i] * nb, cb[i] * na);
    return std::clamp(static_cast<double>(shared) / (static_cast<double>(na) * static_cast<double>(nb)), 0.0, 1.0);
}

double overlap_coefficient(const BootstrapDistribution &a, const BootstrapDistribution &b) {
    return overlap_coefficient(a.resample_means, b.resample_means);
}

BootstrapDistribution bootstrap_for(std::span<const double> scores, const std::string &smell_id,
                                    const std::string &model_id, std::size_t b, std::uint64_t seed) {
    BootstrapDistribution dist = bootstrap_means(scores, b, 0, derive_seed(seed, smell_id));
    dist.smell_id = smell_id;
    dist.model_id = model_id;
    return dist;
}

ComparisonResult compare_models(std::span<const double> scores_a, std::span<const double> scores_b,
                                const std::string &smell_id, const std::string &model_a,
                                const std::string &model_b, std::size_t b, double level,
                                std::uint64_t seed) {
    if (scores_a.empty() || scores_b.empty()) {
        throw DataError(fmt::format("{}: both models need at least one score", smell_id));
    }
    const BootstrapDistribution dist_a = bootstrap_for(scores_a, smell_id, model_a, b, seed);
    const BootstrapDistribution dist_b = bootstrap_for(scores_b, smell_id, model_b, b, seed);

    RunningMoments ma;
    RunningMoments mb;
    for (double v : scores_a) ma.add(v);
    for (double v : scores_b) mb.add(v);

    ComparisonResult result;
    result.smell_id = smell_id;
    result.model_a = model_a;
    result.model_b = model_b;
    result.ci_a = percentile_ci(dist_a, level);
    result.ci_b = percentile_ci(dist_b, level);
    result.overlap = overlap_coefficient(dist_a, dist_b);
    result.mean_a = ma.mean();
    result.mean_b = mb.mean();
    result.mean_delta = result.mean_a - result.mean_b;
    return result;
}

}  // namespace smellprop
