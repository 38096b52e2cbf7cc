#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "smellprop/psc.hpp"
#include "smellprop/taxonomy.hpp"

namespace smellprop {

inline constexpr int kScoreSchemaVersion = 1;

// A manifest instance that could not be scored.
struct ExcludedInstance {
    std::string method_id;
    std::string smell_id;
    CharSpan char_span;
    std::string reason;
};

// Score file (JSONL): a {"header": {...}} line, then one line per scored
// instance {method_id, smell_id, char_span, psc, tokens_scored, statistic},
// one line per excluded instance {method_id, smell_id, char_span, excluded},
// and one summary line per smell {smell_id, mean, std, n, propense, threshold}.
struct ScoreFile {
    std::string model_id;
    std::string manifest_digest;
    SmellTaxonomy taxonomy;
    Statistic statistic = Statistic::kMean;
    double threshold = kDefaultThreshold;
    std::vector<PscScore> scores;
    std::vector<ExcludedInstance> excluded;
    std::vector<GlobalEstimate> estimates;

    // Scores of one smell, in the deterministic merge order.
    std::vector<PscScore> scores_for(std::string_view smell_id) const;
};

std::string serialize_scores(const ScoreFile &file);
ScoreFile parse_scores(std::string_view text);

nlohmann::json to_json(const GlobalEstimate &estimate);
GlobalEstimate estimate_from_json(const nlohmann::json &j);

}  // namespace smellprop
