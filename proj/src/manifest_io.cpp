#include "smellprop/manifest_io.hpp"

#include <fmt/core.h>

#include "smellprop/rng.hpp"

namespace smellprop {

namespace {

using nlohmann::json;

json config_to_json(const CurationConfig &c) {
    return {{"max_tokens", c.max_tokens},
            {"sample_per_smell", c.sample_per_smell},
            {"min_instances", c.min_instances},
            {"seed", c.seed},
            {"drop_degraded_types", c.drop_degraded_types}};
}

CurationConfig config_from_json(const json &j) {
    CurationConfig c;
    c.max_tokens = j.value("max_tokens", c.max_tokens);
    c.sample_per_smell = j.value("sample_per_smell", c.sample_per_smell);
    c.min_instances = j.value("min_instances", c.min_instances);
    c.seed = j.value("seed", c.seed);
    c.drop_degraded_types = j.value("drop_degraded_types", c.drop_degraded_types);
    return c;
}

}  // namespace

std::string serialize_manifest(const DatasetManifest &manifest) {
    std::string out;
    const json header = {{"schema_version", kManifestSchemaVersion},
                         {"taxonomy", to_json(manifest.taxonomy)},
                         {"curation_config", config_to_json(manifest.curation_config)},
                         {"seed", manifest.seed},
                         {"rng", std::string(kRngAlgorithm)}};
    out += header.dump();
    out += '\n';
    for (const auto &inst : manifest.instances) {
        json line = {{"method_id", inst.method_id},
                     {"smell_id", inst.smell.id},
                     {"location",
                      {{"start_line", inst.location.start_line},
                       {"start_col", inst.location.start_col},
                       {"end_line", inst.location.end_line},
                       {"end_col", inst.location.end_col}}},
                     {"char_span", {inst.char_span.begin, inst.char_span.end}}};
        if (inst.degraded) line["degraded"] = true;
        out += line.dump();
        out += '\n';
    }
    for (const auto &m : manifest.methods) {
        const json line = {{"method_id", m.method_id},
                           {"origin", m.origin},
                           {"content_hash", m.content_hash},
                           {"source_text", m.source_text}};
        out += line.dump();
        out += '\n';
    }
    return out;
}

DatasetManifest parse_manifest(std::string_view text) {
    DatasetManifest manifest;
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
            throw ParseError(fmt::format("manifest line {}: {}", line_no, e.what()),
                             line_offset + e.byte);
        }
        try {
            if (!have_header) {
                if (!j.contains("schema_version")) throw DataError("manifest lacks a header line");
                if (j.at("schema_version").get<int>() != kManifestSchemaVersion) {
                    throw DataError(fmt::format("unsupported manifest schema_version {}",
                                                j.at("schema_version").dump()));
                }
                manifest.taxonomy = taxonomy_from_json(j.at("taxonomy"));
                manifest.curation_config = config_from_json(j.at("curation_config"));
                manifest.seed = j.at("seed").get<std::uint64_t>();
                have_header = true;
            } else if (j.contains("smell_id")) {
                SmellInstance inst;
                inst.method_id = j.at("method_id").get<std::string>();
                inst.smell = manifest.taxonomy.at(j.at("smell_id").get<std::string>());
                const auto &loc = j.at("location");
                inst.location = {loc.at("start_line").get<std::size_t>(), loc.at("start_col").get<std::size_t>(),
                                 loc.at("end_line").get<std::size_t>(), loc.at("end_col").get<std::size_t>()};
                const auto &span = j.at("char_span");
                inst.char_span = {span.at(0).get<std::size_t>(), span.at(1).get<std::size_t>()};
                inst.degraded = j.value("degraded", false);
                manifest.instances.push_back(std::move(inst));
            } else {
                MethodRecord m;
                m.method_id = j.at("method_id").get<std::string>();
                m.origin = j.at("origin").get<std::string>();
                m.content_hash = j.at("content_hash").get<std::string>();
                m.source_text = j.at("source_text").get<std::string>();
                manifest.methods.push_back(std::move(m));
            }
        } catch (const json::exception &e) {
            throw DataError(fmt::format("manifest line {}: {}", line_no, e.what()));
        } catch (const ConfigError &e) {
            throw DataError(fmt::format("manifest line {}: {}", line_no, e.what()));
        }
    }
    if (!have_header) throw DataError("manifest is empty");
    manifest.validate();
    return manifest;
}

}  // namespace smellprop
