#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "smellprop/dataset.hpp"
#include "smellprop/trace.hpp"

namespace smellprop {

// Central tendency used to reduce in-span token probabilities.
enum class Statistic { kMean, kMedian };

std::string_view to_string(Statistic statistic);
Statistic parse_statistic(std::string_view text);

// Propensity threshold: a smell at or above it is more likely than a coin flip.
inline constexpr double kDefaultThreshold = 0.5;

// Half-open [begin, end) range of trace token indices.
struct TokenRange {
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t size() const noexcept { return end - begin; }
    friend bool operator==(const TokenRange &, const TokenRange &) = default;
};

struct SpanAlignment {
    std::string method_id;
    std::string smell_id;
    CharSpan char_span;
    TokenRange token_range;
    // Overlapping tokens without a probability (position 0).
    std::size_t dropped_positions = 0;
};

struct PscScore {
    std::string method_id;
    std::string smell_id;
    CharSpan char_span;
    double value = 0.0;
    std::size_t token_count_scored = 0;
    Statistic statistic = Statistic::kMean;
};

struct GlobalEstimate {
    std::string smell_id;
    double mean = 0.0;
    double std = 0.0;
    std::size_t n = 0;
    bool propense = false;
    double threshold = kDefaultThreshold;
};

// Minimal token range covering every token whose non-empty span intersects
// char_span. Throws DataError if char_span is empty or exceeds text_length,
// AlignmentError if no token overlaps, UnscorableSpanError if every
// overlapping token has a null probability.
SpanAlignment align_span(const TokenTrace &trace, CharSpan char_span, std::size_t text_length);

double central_tendency(std::span<const double> values, Statistic statistic);

PscScore aggregate(const TokenTrace &trace, const SpanAlignment &alignment, Statistic statistic);

PscScore score_instance(const TokenTrace &trace, const SmellInstance &instance,
                        std::size_t text_length, Statistic statistic = Statistic::kMean);

inline bool classify_propensity(double mean, double threshold = kDefaultThreshold) {
    return mean >= threshold;
}

// Mean and population standard deviation over one smell's scores. Scores are
// ordered by (method_id, char_span) first so input order does not matter.
// Throws DataError on empty or mixed-smell input.
GlobalEstimate global_estimate(std::span<const PscScore> scores, double threshold = kDefaultThreshold);

// Deterministic order used wherever scores are merged.
void sort_scores(std::vector<PscScore> &scores);

}  // namespace smellprop
