#pragma once

// Builders for synthetic traces and corpora shared by the unit, pipeline and
// acceptance tests.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "smellprop/text.hpp"
#include "smellprop/trace.hpp"

namespace smellprop::testing {

inline TokenRecord token(std::size_t index, CharSpan span, std::optional<double> prob,
                         std::uint64_t token_id = 1) {
    TokenRecord t;
    t.index = index;
    t.token_id = token_id;
    t.span = span;
    t.prob = prob;
    if (prob && *prob > 0.0) t.logprob = std::log(*prob);
    return t;
}

// A trace without BOS: token 0 carries a null probability.
inline TokenTrace trace_from_spans(const std::string &method_id, const std::vector<CharSpan> &spans,
                                   const std::vector<double> &probs, std::uint64_t vocab_size = 32016,
                                   const std::string &model_id = "toy") {
    TokenTrace trace;
    trace.header = {method_id, model_id, vocab_size, "fixture", spans.size(), false};
    for (std::size_t k = 0; k < spans.size(); ++k) {
        trace.tokens.push_back(token(k, spans[k], k == 0 ? std::nullopt : std::optional(probs.at(k)),
                                     k % vocab_size));
    }
    return trace;
}

// Splits text into consecutive chunks of chunk code points covering [0, len),
// preceded by a BOS marker. prob_at(k) supplies the probability of token k >= 1.
template <typename ProbFn>
TokenTrace chunked_trace(const std::string &method_id, const std::string &text, std::size_t chunk,
                         ProbFn prob_at, std::uint64_t vocab_size = 32016,
                         const std::string &model_id = "toy") {
    const std::size_t len = code_point_count(text);
    TokenTrace trace;
    trace.header = {method_id, model_id, vocab_size, "fixture-chunked", 0, true};
    trace.tokens.push_back(token(0, {0, 0}, std::nullopt, 0));
    for (std::size_t s = 0; s < len; s += chunk) {
        const std::size_t k = trace.tokens.size();
        trace.tokens.push_back(token(k, {s, std::min(len, s + chunk)}, prob_at(k), 1 + (k % (vocab_size - 1))));
    }
    trace.header.token_count = trace.tokens.size();
    return trace;
}

inline TokenTrace uniform_trace(const std::string &method_id, const std::string &text,
                                std::uint64_t vocab_size, const std::string &model_id = "uniform") {
    const double p = 1.0 / static_cast<double>(vocab_size);
    return chunked_trace(method_id, text, 3, [p](std::size_t) { return p; }, vocab_size, model_id);
}

inline void write_text(const std::filesystem::path &path, const std::string &text) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << text;
}

// One Pylint JSON message.
inline nlohmann::json pylint_message(const std::string &id, const std::string &symbol, int line, int column,
                                     std::optional<int> end_line, std::optional<int> end_column) {
    nlohmann::json m = {{"type", "convention"}, {"module", "m"},         {"obj", "f"},
                        {"line", line},         {"column", column},      {"path", "m.py"},
                        {"symbol", symbol},     {"message", "fixture"}, {"message-id", id}};
    m["endLine"] = end_line ? nlohmann::json(*end_line) : nlohmann::json(nullptr);
    m["endColumn"] = end_column ? nlohmann::json(*end_column) : nlohmann::json(nullptr);
    return m;
}

// A unique temporary directory removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string &tag) {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() /
                ("smellprop-" + tag + "-" + std::to_string(rd()) + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir &) = delete;
    TempDir &operator=(const TempDir &) = delete;

    const std::filesystem::path &path() const noexcept { return path_; }

private:
    std::filesystem::path path_;
};

}  // namespace smellprop::testing
