#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "smellprop/dataset.hpp"
#include "smellprop/psc.hpp"
#include "smellprop/report.hpp"

namespace smellprop {

// Settings shared by all commands, read from a JSON config file and then
// overridden by command-line flags. Relative paths in the file resolve
// against the file's directory.
struct RunConfig {
    std::optional<std::filesystem::path> taxonomy_path;
    CurationConfig curation;
    Statistic statistic = Statistic::kMean;
    double threshold = kDefaultThreshold;
    BootstrapSettings bootstrap;
    std::vector<std::string> models;
    // Named paths: corpus, token_counts, manifest, trace, scores, scores_a,
    // scores_b, out_dir, bundle.
    std::map<std::string, std::filesystem::path> paths;

    SmellTaxonomy load_taxonomy() const;
    // Throws ConfigError on out-of-range values.
    void validate() const;
    std::optional<std::filesystem::path> path(const std::string &key) const;
};

RunConfig run_config_from_json(const nlohmann::json &j, const std::filesystem::path &base_dir = {});
RunConfig load_run_config(const std::filesystem::path &path);

// Throws ConfigError if two of the paths refer to the same file.
void require_distinct(const std::vector<std::filesystem::path> &paths);
void require_exists(const std::filesystem::path &path, const std::string &what);

}  // namespace smellprop
