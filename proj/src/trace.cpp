#include "smellprop/trace.hpp"

#include <fmt/core.h>
#include <nlohmann/json.hpp>

#include <cmath>

#include "smellprop/error.hpp"

namespace smellprop {

using nlohmann::json;

void TokenTrace::validate(std::optional<std::size_t> text_length) const {
    const auto fail = [&](std::size_t k, const std::string &what) {
        throw DataError(fmt::format("trace '{}' ({}), token {}: {}", header.method_id, header.model_id,
                                    k, what));
    };
    if (header.vocab_size < 2) {
        throw DataError(fmt::format("trace '{}': vocab_size {} < 2", header.method_id, header.vocab_size));
    }
    if (header.token_count != tokens.size()) {
        throw DataError(fmt::format("trace '{}': header declares {} tokens, found {}", header.method_id,
                                    header.token_count, tokens.size()));
    }
    std::size_t prev_end = 0;
    for (std::size_t k = 0; k < tokens.size(); ++k) {
        const TokenRecord &t = tokens[k];
        if (t.index != k) fail(k, fmt::format("index {} out of sequence", t.index));
        if (t.token_id >= header.vocab_size) fail(k, fmt::format("token_id {} >= vocab_size", t.token_id));
        if (t.span.begin > t.span.end) fail(k, "span end precedes start");
        if (t.span.begin < prev_end) fail(k, "span overlaps or precedes the previous token");
        if (text_length && t.span.end > *text_length) {
            fail(k, fmt::format("span [{}, {}) exceeds text length {}", t.span.begin, t.span.end,
                                *text_length));
        }
        prev_end = t.span.end;

        if (k == 0 && t.prob) fail(k, "position 0 must carry a null probability");
        if (k == 0 && header.bos_present && !t.synthetic()) fail(k, "BOS marker must have an empty span");
        if (k > 0 && !t.synthetic() && !t.prob) fail(k, "missing probability");
        if (t.prob) {
            const double p = *t.prob;
            if (!std::isfinite(p) || p < 0.0 || p > 1.0) fail(k, fmt::format("probability {} outside [0, 1]", p));
            if (t.logprob) {
                if (!std::isfinite(*t.logprob)) fail(k, "non-finite logprob");
                if (std::abs(p - std::exp(*t.logprob)) > kLogprobTolerance) {
                    fail(k, fmt::format("prob {} inconsistent with logprob {}", p, *t.logprob));
                }
            }
        } else if (t.logprob) {
            fail(k, "logprob without prob");
        }
    }
}

namespace {

std::optional<double> optional_double(const json &j, const char *key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    return it->get<double>();
}

}  // namespace

std::vector<TokenTrace> parse_traces(std::string_view text) {
    std::vector<TokenTrace> traces;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        const std::string_view line = text.substr(pos, eol - pos);
        const std::size_t line_offset = pos;
        pos = eol + 1;
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;

        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error &e) {
            throw ParseError(fmt::format("trace line {}: {}", line_no, e.what()), line_offset + e.byte);
        }
        try {
            if (auto h = j.find("h"); h != j.end()) {
                TokenTrace trace;
                trace.header.method_id = h->at("method_id").get<std::string>();
                trace.header.model_id = h->at("model_id").get<std::string>();
                trace.header.vocab_size = h->at("vocab_size").get<std::uint64_t>();
                trace.header.tokenizer_fingerprint = h->value("tokenizer_fingerprint", std::string());
                trace.header.token_count = h->at("token_count").get<std::size_t>();
                trace.header.bos_present = h->value("bos_present", false);
                trace.tokens.reserve(trace.header.token_count);
                traces.push_back(std::move(trace));
            } else if (auto t = j.find("t"); t != j.end()) {
                if (traces.empty()) throw DataError("token record before any header");
                TokenRecord r;
                r.index = t->at("index").get<std::size_t>();
                r.token_id = t->at("token_id").get<std::uint64_t>();
                const auto &span = t->at("span");
                r.span = {span.at(0).get<std::size_t>(), span.at(1).get<std::size_t>()};
                r.prob = optional_double(*t, "prob");
                r.logprob = optional_double(*t, "logprob");
                traces.back().tokens.push_back(r);
            } else {
                throw DataError("record is neither a header (\"h\") nor a token (\"t\")");
            }
        } catch (const json::exception &e) {
            throw DataError(fmt::format("trace line {}: {}", line_no, e.what()));
        } catch (const ParseError &) {
            throw;
        } catch (const Error &e) {
            throw DataError(fmt::format("trace line {}: {}", line_no, e.what()));
        }
    }
    for (const auto &trace : traces) trace.validate();
    return traces;
}

std::string serialize_trace(const TokenTrace &trace) {
    std::string out;
    const json header = {{"h",
                          {{"method_id", trace.header.method_id},
                           {"model_id", trace.header.model_id},
                           {"vocab_size", trace.header.vocab_size},
                           {"tokenizer_fingerprint", trace.header.tokenizer_fingerprint},
                           {"token_count", trace.header.token_count},
                           {"bos_present", trace.header.bos_present}}}};
    out += header.dump();
    out += '\n';
    for (const auto &t : trace.tokens) {
        json rec = {{"index", t.index},
                    {"token_id", t.token_id},
                    {"span", {t.span.begin, t.span.end}},
                    {"prob", nullptr},
                    {"logprob", nullptr}};
        if (t.prob) rec["prob"] = *t.prob;
        if (t.logprob) rec["logprob"] = *t.logprob;
        out += json{{"t", rec}}.dump();
        out += '\n';
    }
    return out;
}

TraceSet index_traces(std::vector<TokenTrace> traces) {
    TraceSet set;
    for (auto &trace : traces) {
        if (set.model_id.empty()) {
            set.model_id = trace.header.model_id;
        } else if (trace.header.model_id != set.model_id) {
            throw DataError(fmt::format("trace file mixes models '{}' and '{}'", set.model_id,
                                        trace.header.model_id));
        }
        const std::string id = trace.header.method_id;
        if (!set.by_method.emplace(id, std::move(trace)).second) {
            throw DataError(fmt::format("trace file repeats method '{}'", id));
        }
    }
    return set;
}

}  // namespace smellprop
