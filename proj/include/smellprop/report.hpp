#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "smellprop/diagnostics.hpp"
#include "smellprop/psc.hpp"
#include "smellprop/stats.hpp"
#include "smellprop/taxonomy.hpp"

namespace smellprop {

struct BootstrapSettings {
    std::size_t b = kDefaultBootstrapResamples;
    double level = kDefaultConfidenceLevel;
    std::uint64_t seed = 0;
};

struct ModelSummary {
    std::string model_id;
    // Taxonomy order, retained smells only.
    std::vector<GlobalEstimate> estimates;
    // Smell ids by descending mean, ties by id.
    std::vector<std::string> ranking;
    std::size_t propense_count = 0;

    const GlobalEstimate *find(const std::string &smell_id) const noexcept;
};

// Everything needed to render the comparison of two models.
struct ReportBundle {
    std::string manifest_digest;
    SmellTaxonomy taxonomy;
    double threshold = kDefaultThreshold;
    Statistic statistic = Statistic::kMean;
    BootstrapSettings bootstrap;
    ModelSummary model_a;
    ModelSummary model_b;
    std::vector<ComparisonResult> comparisons;
    Diagnostics diagnostics;

    // Throws InvariantError if rankings and estimates disagree.
    void validate() const;
};

ModelSummary summarize_model(const std::string &model_id, std::vector<GlobalEstimate> estimates,
                             const SmellTaxonomy &taxonomy);

nlohmann::json to_json(const ComparisonResult &c);
ComparisonResult comparison_from_json(const nlohmann::json &j);
nlohmann::json to_json(const ReportBundle &bundle);
ReportBundle bundle_from_json(const nlohmann::json &j);

// "0.80 ± 0.08"
std::string format_mean_std(double mean, double std);
// Margin of error in whole percentage points, e.g. "5%".
std::string format_margin(double margin_of_error);
// "10 of 13 propense"
std::string propense_headline(const ModelSummary &summary);

std::string render_markdown(const ReportBundle &bundle);
// Full-precision per-model estimates with their bootstrap intervals.
std::string render_estimates_csv(const ReportBundle &bundle);
// smell_id,model_id,resample_mean; threshold and generator in leading comment lines.
std::string render_boxplot_csv(const std::vector<BootstrapDistribution> &distributions, double threshold,
                               const BootstrapSettings &bootstrap);
// Raw per-instance scores: smell_id,model_id,method_id,psc.
std::string render_scores_csv(const std::vector<std::pair<std::string, std::vector<PscScore>>> &by_model);

}  // namespace smellprop
