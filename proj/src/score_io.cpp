#include "smellprop/score_io.hpp"

#include <fmt/core.h>

namespace smellprop {

using nlohmann::json;

std::vector<PscScore> ScoreFile::scores_for(std::string_view smell_id) const {
    std::vector<PscScore> out;
    for (const auto &s : scores) {
        if (s.smell_id == smell_id) out.push_back(s);
    }
    sort_scores(out);
    return out;
}

json to_json(const GlobalEstimate &e) {
    return {{"smell_id", e.smell_id}, {"mean", e.mean},           {"std", e.std},
            {"n", e.n},               {"propense", e.propense}, {"threshold", e.threshold}};
}

GlobalEstimate estimate_from_json(const json &j) {
    GlobalEstimate e;
    e.smell_id = j.at("smell_id").get<std::string>();
    e.mean = j.at("mean").get<double>();
    e.std = j.at("std").get<double>();
    e.n = j.at("n").get<std::size_t>();
    e.propense = j.at("propense").get<bool>();
    e.threshold = j.at("threshold").get<double>();
    return e;
}

std::string serialize_scores(const ScoreFile &file) {
    std::string out;
    const json header = {{"header",
                          {{"schema_version", kScoreSchemaVersion},
                           {"model_id", file.model_id},
                           {"manifest_digest", file.manifest_digest},
                           {"taxonomy", to_json(file.taxonomy)},
                           {"statistic", std::string(to_string(file.statistic))},
                           {"threshold", file.threshold}}}};
    out += header.dump() + '\n';
    for (const auto &s : file.scores) {
        const json line = {{"method_id", s.method_id},
                           {"smell_id", s.smell_id},
                           {"char_span", {s.char_span.begin, s.char_span.end}},
                           {"psc", s.value},
                           {"tokens_scored", s.token_count_scored},
                           {"statistic", std::string(to_string(s.statistic))}};
        out += line.dump() + '\n';
    }
    for (const auto &x : file.excluded) {
        const json line = {{"method_id", x.method_id},
                           {"smell_id", x.smell_id},
                           {"char_span", {x.char_span.begin, x.char_span.end}},
                           {"excluded", x.reason}};
        out += line.dump() + '\n';
    }
    for (const auto &e : file.estimates) out += to_json(e).dump() + '\n';
    return out;
}

ScoreFile parse_scores(std::string_view text) {
    ScoreFile file;
    bool have_header = false;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        const std::string_view line = text.substr(pos, eol - pos);
        const std::size_t line_offset = pos;
        pos = eol + 1;
        ++line_no;
        if (line.empty()) continue;

        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error &e) {
            throw ParseError(fmt::format("score line {}: {}", line_no, e.what()), line_offset + e.byte);
        }
        try {
            if (auto h = j.find("header"); h != j.end()) {
                if (have_header) throw DataError("duplicate header");
                if (h->at("schema_version").get<int>() != kScoreSchemaVersion) {
                    throw DataError("unsupported score schema_version");
                }
                file.model_id = h->at("model_id").get<std::string>();
                file.manifest_digest = h->at("manifest_digest").get<std::string>();
                file.taxonomy = taxonomy_from_json(h->at("taxonomy"));
                file.statistic = parse_statistic(h->at("statistic").get<std::string>());
                file.threshold = h->at("threshold").get<double>();
                have_header = true;
                continue;
            }
            if (!have_header) throw DataError("score file lacks a header line");
            if (j.contains("psc")) {
                PscScore s;
                s.method_id = j.at("method_id").get<std::string>();
                s.smell_id = j.at("smell_id").get<std::string>();
                const auto &span = j.at("char_span");
                s.char_span = {span.at(0).get<std::size_t>(), span.at(1).get<std::size_t>()};
                s.value = j.at("psc").get<double>();
                s.token_count_scored = j.at("tokens_scored").get<std::size_t>();
                s.statistic = parse_statistic(j.at("statistic").get<std::string>());
                if (!(s.value >= 0.0 && s.value <= 1.0)) throw DataError("psc outside [0, 1]");
                file.scores.push_back(std::move(s));
            } else if (j.contains("excluded")) {
                ExcludedInstance x;
                x.method_id = j.at("method_id").get<std::string>();
                x.smell_id = j.at("smell_id").get<std::string>();
                const auto &span = j.at("char_span");
                x.char_span = {span.at(0).get<std::size_t>(), span.at(1).get<std::size_t>()};
                x.reason = j.at("excluded").get<std::string>();
                file.excluded.push_back(std::move(x));
            } else if (j.contains("mean")) {
                file.estimates.push_back(estimate_from_json(j));
            } else {
                throw DataError("unrecognized record");
            }
        } catch (const json::exception &e) {
            throw DataError(fmt::format("score line {}: {}", line_no, e.what()));
        } catch (const ParseError &) {
            throw;
        } catch (const Error &e) {
            throw DataError(fmt::format("score line {}: {}", line_no, e.what()));
        }
    }
    if (!have_header) throw DataError("score file is empty");
    return file;
}

}  // namespace smellprop
