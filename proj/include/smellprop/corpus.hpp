#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "smellprop/dataset.hpp"

namespace smellprop {

struct Corpus {
    std::vector<MethodRecord> methods;
    std::vector<ReportedSmell> reported;
};

// Loads a prepared corpus directory: every `<name>.py` file is one method and
// `<name>.json` beside it is its Pylint JSON report. The method id is the
// relative path without the `.py` suffix. Methods without a report are skipped
// and counted as "missing-report".
Corpus load_corpus(const std::filesystem::path &root, const SmellTaxonomy &taxonomy,
                   Diagnostics &diagnostics);

// Token counts per method, either a JSON object {method_id: count} or a trace
// JSONL file (non-synthetic tokens are counted).
std::map<std::string, std::size_t> load_token_counts(const std::filesystem::path &path);

}  // namespace smellprop
