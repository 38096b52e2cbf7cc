#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "smellprop/text.hpp"

namespace smellprop {

// Teacher-forced token traces as written by the tracing adapter. One JSONL
// file per (model, dataset); each method contributes a header record
//   {"h": {method_id, model_id, vocab_size, tokenizer_fingerprint, token_count, bos_present}}
// followed by token_count records
//   {"t": {index, token_id, span: [s, e], prob, logprob}}.

struct TraceHeader {
    std::string method_id;
    std::string model_id;
    std::uint64_t vocab_size = 0;
    std::string tokenizer_fingerprint;
    std::size_t token_count = 0;
    bool bos_present = false;
};

struct TokenRecord {
    std::size_t index = 0;
    std::uint64_t token_id = 0;
    CharSpan span;
    // Null for position 0 and synthetic markers.
    std::optional<double> prob;
    std::optional<double> logprob;

    // Synthetic markers (BOS) carry an empty span.
    bool synthetic() const noexcept { return span.empty(); }
};

// Tolerance for |prob - exp(logprob)|.
inline constexpr double kLogprobTolerance = 1e-9;

struct TokenTrace {
    TraceHeader header;
    std::vector<TokenRecord> tokens;

    // Number of tokens excluding a leading BOS marker.
    std::size_t content_token_count() const noexcept {
        return header.token_count - (header.bos_present && header.token_count > 0 ? 1 : 0);
    }

    // Throws DataError naming the method and position on any violated
    // invariant. When text_length is given, spans must lie within it.
    void validate(std::optional<std::size_t> text_length = std::nullopt) const;
};

// Parses and validates every trace in a trace file.
std::vector<TokenTrace> parse_traces(std::string_view text);

std::string serialize_trace(const TokenTrace &trace);

// Traces of a single model keyed by method id.
struct TraceSet {
    std::string model_id;
    std::map<std::string, TokenTrace> by_method;
};

// Throws DataError if the traces mix models or repeat a method.
TraceSet index_traces(std::vector<TokenTrace> traces);

}  // namespace smellprop
