#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "smellprop/config.hpp"
#include "smellprop/corpus.hpp"
#include "smellprop/dataset.hpp"
#include "smellprop/report.hpp"
#include "smellprop/score_io.hpp"
#include "smellprop/trace.hpp"

namespace smellprop {

// Pipeline steps as pure functions; the cmd_* wrappers add file handling.

struct CurateResult {
    DatasetManifest manifest;
    Diagnostics diagnostics;
};

// resolve -> deduplicate -> token budget -> per-smell sampling. Throws
// DataError("empty dataset") if no smell type survives.
CurateResult curate(const Corpus &corpus, const SmellTaxonomy &taxonomy, const CurationConfig &config,
                    const std::map<std::string, std::size_t> &token_counts);

// Scores every manifest instance. Instances whose spans cannot be aligned or
// scored are recorded as excluded. Throws DataError listing methods that have
// no trace.
ScoreFile score_manifest(const DatasetManifest &manifest, const std::string &manifest_digest,
                         const TraceSet &traces, Statistic statistic, double threshold,
                         Diagnostics &diagnostics);

struct CompareResult {
    ReportBundle bundle;
    std::vector<BootstrapDistribution> distributions;
};

// Throws DataError if the score files were produced from different manifests
// or taxonomies.
CompareResult compare_scores(const ScoreFile &a, const ScoreFile &b, double threshold,
                             const BootstrapSettings &bootstrap);

std::string manifest_digest(const std::string &manifest_bytes);

void cmd_curate(const RunConfig &config, const std::filesystem::path &corpus_dir,
                const std::optional<std::filesystem::path> &token_counts_path,
                const std::filesystem::path &out_path, std::ostream &log);

void cmd_score(const RunConfig &config, const std::filesystem::path &manifest_path,
               const std::filesystem::path &trace_path, const std::filesystem::path &out_path,
               const std::optional<std::string> &expected_model, std::ostream &log);

// Writes comparison.jsonl, bundle.json, boxplot.csv and scores.csv into out_dir.
void cmd_compare(const RunConfig &config, const std::filesystem::path &scores_a,
                 const std::filesystem::path &scores_b, const std::filesystem::path &out_dir,
                 std::ostream &log);

// Writes report.md and estimates.csv into out_dir.
void cmd_report(const std::filesystem::path &bundle_path, const std::filesystem::path &out_dir,
                std::ostream &log);

}  // namespace smellprop
