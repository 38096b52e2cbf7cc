#include "smellprop/corpus.hpp"

#include <fmt/core.h>

#include <algorithm>

#include "smellprop/fileio.hpp"
#include "smellprop/trace.hpp"

namespace smellprop {

namespace fs = std::filesystem;

Corpus load_corpus(const fs::path &root, const SmellTaxonomy &taxonomy, Diagnostics &diagnostics) {
    if (!fs::is_directory(root)) {
        throw ConfigError(fmt::format("corpus directory '{}' does not exist", root.string()));
    }
    std::vector<fs::path> files;
    for (const auto &entry : fs::recursive_directory_iterator(root)) {
        if (entry.is_regular_file() && entry.path().extension() == ".py") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());

    Corpus corpus;
    for (const auto &file : files) {
        fs::path rel = fs::relative(file, root);
        const std::string origin = rel.generic_string();
        rel.replace_extension();
        const std::string method_id = rel.generic_string();

        fs::path report_path = file;
        report_path.replace_extension(".json");
        if (!fs::exists(report_path)) {
            diagnostics.count("missing-report");
            diagnostics.note(fmt::format("{}: no analyzer report, skipped", origin));
            continue;
        }
        std::string source = read_file(file);
        if (source.empty()) {
            diagnostics.count("empty-method");
            continue;
        }
        decode_utf8(source);
        MethodRecord method = MethodRecord::make(method_id, std::move(source), origin);
        auto reported = parse_pylint_report(read_file(report_path), taxonomy, method_id, diagnostics);
        corpus.reported.insert(corpus.reported.end(), std::make_move_iterator(reported.begin()),
                               std::make_move_iterator(reported.end()));
        corpus.methods.push_back(std::move(method));
    }
    return corpus;
}

std::map<std::string, std::size_t> load_token_counts(const fs::path &path) {
    const std::string text = read_file(path);
    const auto whole = nlohmann::json::parse(text, nullptr, false);
    if (whole.is_object() && !whole.contains("h")) {
        try {
            return whole.get<std::map<std::string, std::size_t>>();
        } catch (const nlohmann::json::exception &e) {
            throw DataError(fmt::format("token counts '{}': {}", path.string(), e.what()));
        }
    }
    std::map<std::string, std::size_t> counts;
    for (const auto &trace : parse_traces(text)) {
        counts[trace.header.method_id] = trace.content_token_count();
    }
    return counts;
}

}  // namespace smellprop
