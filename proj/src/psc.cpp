#include "smellprop/psc.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <tuple>

#include "smellprop/moments.hpp"

namespace smellprop {

std::string_view to_string(Statistic statistic) {
    switch (statistic) {
        case Statistic::kMean:
            return "mean";
        case Statistic::kMedian:
            return "median";
    }
    return "mean";
}

Statistic parse_statistic(std::string_view text) {
    if (text == "mean") return Statistic::kMean;
    if (text == "median") return Statistic::kMedian;
    throw ConfigError(fmt::format("unknown statistic '{}' (expected mean or median)", text));
}

SpanAlignment align_span(const TokenTrace &trace, CharSpan char_span, std::size_t text_length) {
    const std::string &method = trace.header.method_id;
    if (char_span.empty()) {
        throw AlignmentError(fmt::format("'{}': span [{}, {}) is empty", method, char_span.begin, char_span.end));
    }
    if (char_span.end > text_length) {
        throw AlignmentError(fmt::format("'{}': span [{}, {}) exceeds text length {}", method,
                                         char_span.begin, char_span.end, text_length));
    }

    // Spans are monotone and disjoint, so both ends are non-decreasing and the
    // overlapping tokens form one contiguous run found by two binary searches.
    const auto &tokens = trace.tokens;
    auto first = std::partition_point(tokens.begin(), tokens.end(),
                                      [&](const TokenRecord &t) { return t.span.end <= char_span.begin; });
    auto last = std::partition_point(first, tokens.end(),
                                     [&](const TokenRecord &t) { return t.span.begin < char_span.end; });
    while (first != last && first->synthetic()) ++first;
    while (last != first && std::prev(last)->synthetic()) --last;
    if (first == last) {
        throw AlignmentError(fmt::format("'{}': no token overlaps span [{}, {})", method, char_span.begin,
                                         char_span.end));
    }

    SpanAlignment alignment;
    alignment.method_id = method;
    alignment.char_span = char_span;
    alignment.token_range = {static_cast<std::size_t>(first - tokens.begin()),
                             static_cast<std::size_t>(last - tokens.begin())};
    std::size_t scorable = 0;
    for (auto it = first; it != last; ++it) {
        if (it->prob) {
            ++scorable;
        } else {
            ++alignment.dropped_positions;
        }
    }
    if (scorable == 0) {
        throw UnscorableSpanError(fmt::format("'{}': every token overlapping [{}, {}) has a null probability",
                                              method, char_span.begin, char_span.end));
    }
    return alignment;
}

double central_tendency(std::span<const double> values, Statistic statistic) {
    if (values.empty()) throw UnscorableSpanError("no probabilities to aggregate");
    double result = 0.0;
    if (statistic == Statistic::kMean) {
        RunningMoments m;
        for (double v : values) m.add(v);
        result = m.mean();
    } else {
        std::vector<double> sorted(values.begin(), values.end());
        std::sort(sorted.begin(), sorted.end());
        const std::size_t mid = sorted.size() / 2;
        result = sorted.size() % 2 == 1 ? sorted[mid] : sorted[mid - 1] + (sorted[mid] - sorted[mid - 1]) / 2.0;
    }
    return std::clamp(result, 0.0, 1.0);
}

PscScore aggregate(const TokenTrace &trace, const SpanAlignment &alignment, Statistic statistic) {
    if (alignment.token_range.end > trace.tokens.size() ||
        alignment.token_range.begin >= alignment.token_range.end) {
        throw AlignmentError(fmt::format("'{}': token range [{}, {}) is invalid for a {}-token trace",
                                         alignment.method_id, alignment.token_range.begin,
                                         alignment.token_range.end, trace.tokens.size()));
    }
    std::vector<double> probs;
    probs.reserve(alignment.token_range.size());
    for (std::size_t k = alignment.token_range.begin; k < alignment.token_range.end; ++k) {
        const auto &t = trace.tokens[k];
        if (t.prob && !t.synthetic()) probs.push_back(*t.prob);
    }
    if (probs.empty()) {
        throw UnscorableSpanError(fmt::format("'{}': no scorable tokens in [{}, {})", alignment.method_id,
                                              alignment.token_range.begin, alignment.token_range.end));
    }

    PscScore score;
    score.method_id = alignment.method_id;
    score.smell_id = alignment.smell_id;
    score.char_span = alignment.char_span;
    score.value = central_tendency(probs, statistic);
    score.token_count_scored = probs.size();
    score.statistic = statistic;
    return score;
}

PscScore score_instance(const TokenTrace &trace, const SmellInstance &instance, std::size_t text_length,
                        Statistic statistic) {
    if (trace.header.method_id != instance.method_id) {
        throw DataError(fmt::format("trace for '{}' used to score an instance of '{}'", trace.header.method_id,
                                    instance.method_id));
    }
    SpanAlignment alignment = align_span(trace, instance.char_span, text_length);
    alignment.smell_id = instance.smell.id;
    return aggregate(trace, alignment, statistic);
}

void sort_scores(std::vector<PscScore> &scores) {
    std::sort(scores.begin(), scores.end(), [](const PscScore &a, const PscScore &b) {
        return std::tie(a.smell_id, a.method_id, a.char_span) < std::tie(b.smell_id, b.method_id, b.char_span);
    });
}

GlobalEstimate global_estimate(std::span<const PscScore> scores, double threshold) {
    if (scores.empty()) throw DataError("cannot estimate a smell with no scores");
    if (!(threshold > 0.0 && threshold < 1.0)) throw ConfigError("threshold must lie in (0, 1)");
    std::vector<PscScore> ordered(scores.begin(), scores.end());
    for (const auto &s : ordered) {
        if (s.smell_id != ordered.front().smell_id) {
            throw DataError(fmt::format("global estimate mixes smells {} and {}", ordered.front().smell_id,
                                        s.smell_id));
        }
    }
    sort_scores(ordered);

    RunningMoments m;
    for (const auto &s : ordered) m.add(s.value);
    GlobalEstimate estimate;
    estimate.smell_id = ordered.front().smell_id;
    estimate.mean = m.mean();
    estimate.std = m.population_stddev();
    estimate.n = m.count();
    estimate.threshold = threshold;
    estimate.propense = classify_propensity(estimate.mean, threshold);
    return estimate;
}

}  // namespace smellprop
