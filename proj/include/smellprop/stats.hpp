#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace smellprop {

inline constexpr std::size_t kDefaultBootstrapResamples = 1000;
inline constexpr double kDefaultConfidenceLevel = 0.95;
inline constexpr std::size_t kOverlapBins = 50;

struct BootstrapDistribution {
    std::string smell_id;
    std::string model_id;
    std::vector<double> resample_means;
    std::size_t b = 0;
    std::size_t resample_size = 0;
    std::uint64_t seed = 0;
};

struct IntervalEstimate {
    double level = kDefaultConfidenceLevel;
    double low = 0.0;
    double high = 0.0;
    // Half-width of the interval.
    double margin_of_error = 0.0;
};

struct ComparisonResult {
    std::string smell_id;
    std::string model_a;
    std::string model_b;
    IntervalEstimate ci_a;
    IntervalEstimate ci_b;
    double overlap = 0.0;
    double mean_a = 0.0;
    double mean_b = 0.0;
    double mean_delta = 0.0;
};

// B resamples with replacement of resample_size values (0 means |values|),
// each reduced to its mean. Deterministic in seed.
BootstrapDistribution bootstrap_means(std::span<const double> values, std::size_t b,
                                      std::size_t resample_size, std::uint64_t seed);

// Linear interpolation between order statistics (h = (n - 1) p) of sorted data.
double empirical_quantile(std::span<const double> sorted, double p);

// Percentile interval of the resample means. Throws ConfigError unless 0 < level < 1.
IntervalEstimate percentile_ci(const BootstrapDistribution &dist, double level);

// Sum over 50 equal-width bins on [0, 1] of the smaller relative frequency.
double overlap_coefficient(std::span<const double> a, std::span<const double> b);
double overlap_coefficient(const BootstrapDistribution &a, const BootstrapDistribution &b);

// Bootstraps both score sets with a child seed derived from (seed, smell_id),
// so identical inputs produce identical distributions.
ComparisonResult compare_models(std::span<const double> scores_a, std::span<const double> scores_b,
                                const std::string &smell_id, const std::string &model_a,
                                const std::string &model_b, std::size_t b, double level,
                                std::uint64_t seed);

// The distribution compare_models builds for one side.
BootstrapDistribution bootstrap_for(std::span<const double> scores, const std::string &smell_id,
                                    const std::string &model_id, std::size_t b, std::uint64_t seed);

}  // namespace smellprop
