#include "smellprop/dataset.hpp"

#include <boost/math/distributions/normal.hpp>
#include <fmt/core.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <tuple>
#include <unordered_map>

#include "smellprop/digest.hpp"
#include "smellprop/rng.hpp"

namespace smellprop {

namespace {

std::string describe(const SourceLocation &loc) {
    return fmt::format("({}:{} .. {}:{})", loc.start_line, loc.start_col, loc.end_line, loc.end_col);
}

// Returns the integer value of a field, or nullopt if absent/null.
std::optional<long long> optional_int(const nlohmann::json &msg, const char *key) {
    auto it = msg.find(key);
    if (it == msg.end() || it->is_null()) return std::nullopt;
    if (!it->is_number_integer()) {
        throw DataError(fmt::format("field '{}' is not an integer", key));
    }
    return it->get<long long>();
}

}  // namespace

void validate_location(const SourceLocation &loc) {
    if (loc.start_line < 1 || loc.end_line < 1) {
        throw LocationError(fmt::format("line numbers are 1-based in {}", describe(loc)), loc);
    }
    if (std::tie(loc.start_line, loc.start_col) > std::tie(loc.end_line, loc.end_col)) {
        throw LocationError(fmt::format("location {} ends before it starts", describe(loc)), loc);
    }
}

MethodRecord MethodRecord::make(std::string method_id, std::string source_text, std::string origin) {
    if (source_text.empty()) throw DataError(fmt::format("method '{}' has empty source", method_id));
    MethodRecord m;
    m.content_hash = sha256_hex(source_text);
    m.method_id = std::move(method_id);
    m.source_text = std::move(source_text);
    m.origin = std::move(origin);
    return m;
}

void CurationConfig::validate() const {
    if (sample_per_smell == 0) throw ConfigError("sample_per_smell must be positive");
    if (min_instances == 0) throw ConfigError("min_instances must be positive");
}

const MethodRecord *DatasetManifest::find_method(std::string_view method_id) const noexcept {
    for (const auto &m : methods) {
        if (m.method_id == method_id) return &m;
    }
    return nullptr;
}

void DatasetManifest::validate() const {
    std::unordered_map<std::string, const MethodRecord *> by_id;
    for (const auto &m : methods) {
        if (!by_id.emplace(m.method_id, &m).second) {
            throw DataError(fmt::format("duplicate method_id '{}'", m.method_id));
        }
        if (sha256_hex(m.source_text) != m.content_hash) {
            throw DataError(fmt::format("content_hash mismatch for method '{}'", m.method_id));
        }
    }
    std::map<std::string, std::string> smell_of_method;
    for (const auto &inst : instances) {
        auto it = by_id.find(inst.method_id);
        if (it == by_id.end()) {
            throw DataError(fmt::format("instance references unknown method '{}'", inst.method_id));
        }
        if (!taxonomy.find(inst.smell.id)) {
            throw DataError(fmt::format("instance smell '{}' is not in the taxonomy", inst.smell.id));
        }
        const CharSpan span = resolve_char_span(it->second->source_text, inst.location);
        if (span != inst.char_span) {
            throw DataError(fmt::format("char_span [{}, {}) of '{}' does not match its location {}",
                                        inst.char_span.begin, inst.char_span.end, inst.method_id,
                                        describe(inst.location)));
        }
        auto [pos, inserted] = smell_of_method.emplace(inst.method_id, inst.smell.id);
        if (!inserted && pos->second != inst.smell.id) {
            throw DataError(fmt::format("method '{}' appears under both {} and {}", inst.method_id,
                                        pos->second, inst.smell.id));
        }
    }
}

std::vector<ReportedSmell> parse_pylint_report(std::string_view report_text,
                                               const SmellTaxonomy &taxonomy,
                                               const std::string &method_id,
                                               Diagnostics &diagnostics) {
    std::vector<ReportedSmell> out;
    if (report_text.find_first_not_of(" \t\r\n") == std::string_view::npos) return out;

    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(report_text);
    } catch (const nlohmann::json::parse_error &e) {
        throw ParseError(fmt::format("malformed report for '{}' at byte offset {}: {}", method_id,
                                     e.byte, e.what()),
                         e.byte);
    }
    if (!doc.is_array()) throw ParseError(fmt::format("report for '{}' is not a JSON array", method_id), 0);

    for (std::size_t i = 0; i < doc.size(); ++i) {
        const auto &msg = doc[i];
        if (!msg.is_object()) {
            throw DataError(fmt::format("report for '{}': message {} is not an object", method_id, i));
        }
        const std::string id = msg.value("message-id", std::string());
        const std::string symbol = msg.value("symbol", std::string());
        const SmellType *type = taxonomy.find(id);
        if (!type) type = taxonomy.find(symbol);
        if (!type) {
            diagnostics.count("skipped");
            diagnostics.count("skipped:" + (id.empty() ? symbol : id));
            continue;
        }

        const auto line = optional_int(msg, "line");
        const auto column = optional_int(msg, "column");
        const auto end_line = optional_int(msg, "endLine");
        const auto end_column = optional_int(msg, "endColumn");
        if (!line || !column || *line < 1 || *column < 0 || (end_line && *end_line < 1) ||
            (end_column && *end_column < 0)) {
            diagnostics.count("invalid-location:" + type->id);
            diagnostics.note(fmt::format("{}: {} message {} has no usable start position", method_id,
                                         type->id, i));
            continue;
        }

        ReportedSmell r;
        r.method_id = method_id;
        r.smell = *type;
        r.location.start_line = static_cast<std::size_t>(*line);
        r.location.start_col = static_cast<std::size_t>(*column);
        r.location.end_line = static_cast<std::size_t>(end_line.value_or(*line));
        if (end_column) {
            r.location.end_col = static_cast<std::size_t>(*end_column);
        } else {
            r.to_line_end = true;
            r.location.end_col = r.location.end_line == r.location.start_line ? r.location.start_col : 0;
        }
        if (!end_line || !end_column) {
            diagnostics.count("degraded-location:" + type->id);
        }
        out.push_back(std::move(r));
    }
    return out;
}

CharSpan resolve_char_span(const LineIndex &index, const SourceLocation &location) {
    validate_location(location);
    const auto offset_of = [&](std::size_t line, std::size_t col) {
        if (!index.has_line(line)) {
            throw LocationError(fmt::format("location {} references line {} but text has {} lines",
                                            describe(location), line, index.line_count()),
                                location);
        }
        if (col > index.line_length(line)) {
            throw LocationError(fmt::format("location {} column {} exceeds line {} length {}",
                                            describe(location), col, line, index.line_length(line)),
                                location);
        }
        return index.offset(line, col);
    };
    const std::size_t a = offset_of(location.start_line, location.start_col);
    const std::size_t b = offset_of(location.end_line, location.end_col);
    if (b <= a) {
        throw LocationError(fmt::format("location {} resolves to an empty span", describe(location)),
                            location);
    }
    return {a, b};
}

CharSpan resolve_char_span(std::string_view source_text, const SourceLocation &location) {
    return resolve_char_span(LineIndex(source_text), location);
}

SmellInstance resolve_instance(const ReportedSmell &reported, const MethodRecord &method) {
    const LineIndex index(method.source_text);
    SmellInstance inst;
    inst.method_id = method.method_id;
    inst.smell = reported.smell;
    inst.location = reported.location;
    inst.degraded = reported.to_line_end;
    if (reported.to_line_end) {
        if (!index.has_line(inst.location.end_line)) {
            throw LocationError(fmt::format("location {} references missing line {}",
                                            describe(inst.location), inst.location.end_line),
                                inst.location);
        }
        inst.location.end_col = index.line_length(inst.location.end_line);
    }
    inst.char_span = resolve_char_span(index, inst.location);
    return inst;
}

std::vector<SmellInstance> deduplicate_methods(const std::vector<SmellInstance> &instances,
                                               const std::vector<MethodRecord> &methods,
                                               Diagnostics *diagnostics) {
    std::unordered_map<std::string, const MethodRecord *> by_id;
    for (const auto &m : methods) by_id.emplace(m.method_id, &m);
    const auto hash_of = [&](const std::string &method_id) -> const std::string & {
        auto it = by_id.find(method_id);
        if (it == by_id.end()) throw DataError(fmt::format("unknown method '{}'", method_id));
        return it->second->content_hash;
    };

    std::map<std::string, std::size_t> counts;
    for (const auto &inst : instances) ++counts[inst.smell.id];

    // content_hash -> smell id -> smallest method_id carrying that smell.
    std::map<std::string, std::map<std::string, std::string>> groups;
    for (const auto &inst : instances) {
        auto &slot = groups[hash_of(inst.method_id)];
        auto [it, inserted] = slot.emplace(inst.smell.id, inst.method_id);
        if (!inserted && inst.method_id < it->second) it->second = inst.method_id;
    }

    // content_hash -> (winning smell id, winning method id).
    std::map<std::string, std::pair<std::string, std::string>> winners;
    for (const auto &[hash, smells] : groups) {
        auto best = std::min_element(smells.begin(), smells.end(), [&](const auto &x, const auto &y) {
            return std::tie(counts[x.first], x.first) < std::tie(counts[y.first], y.first);
        });
        winners.emplace(hash, *best);
    }

    std::vector<SmellInstance> out;
    out.reserve(instances.size());
    for (const auto &inst : instances) {
        const auto &[smell, method] = winners.at(hash_of(inst.method_id));
        if (inst.smell.id == smell && inst.method_id == method) {
            out.push_back(inst);
        } else if (diagnostics) {
            diagnostics->count("dedup-removed:" + inst.smell.id);
        }
    }
    return out;
}

std::vector<SmellInstance> filter_by_token_budget(
    const std::vector<SmellInstance> &instances,
    const std::map<std::string, std::size_t> &token_counts, std::size_t max_tokens,
    Diagnostics *diagnostics) {
    if (max_tokens == 0) return instances;
    std::vector<SmellInstance> out;
    for (const auto &inst : instances) {
        auto it = token_counts.find(inst.method_id);
        if (it == token_counts.end()) {
            throw DataError(fmt::format("no token count for method '{}'", inst.method_id));
        }
        if (it->second <= max_tokens) {
            out.push_back(inst);
        } else if (diagnostics) {
            diagnostics->count("over-budget:" + inst.smell.id);
        }
    }
    return out;
}

DatasetManifest sample_per_smell(const std::vector<SmellInstance> &instances,
                                 const std::vector<MethodRecord> &methods,
                                 const SmellTaxonomy &taxonomy, const CurationConfig &config,
                                 Diagnostics *diagnostics) {
    config.validate();
    std::set<std::string> degraded_types;
    std::map<std::string, std::vector<std::size_t>> by_smell;
    for (std::size_t i = 0; i < instances.size(); ++i) {
        const auto &inst = instances[i];
        if (!taxonomy.find(inst.smell.id)) {
            throw DataError(fmt::format("instance smell '{}' is not in the taxonomy", inst.smell.id));
        }
        by_smell[inst.smell.id].push_back(i);
        if (inst.degraded) degraded_types.insert(inst.smell.id);
    }

    DatasetManifest manifest;
    manifest.taxonomy = taxonomy;
    manifest.curation_config = config;
    manifest.seed = config.seed;

    std::set<std::string> used_methods;
    for (const auto &type : taxonomy.entries()) {
        auto it = by_smell.find(type.id);
        const std::size_t available = it == by_smell.end() ? 0 : it->second.size();
        if (config.drop_degraded_types && degraded_types.count(type.id)) {
            if (diagnostics) {
                diagnostics->count("dropped-type:" + type.id, available);
                diagnostics->note(fmt::format("{} ({}) dropped: has degraded locations", type.id, type.name));
            }
            continue;
        }
        if (available < config.min_instances) {
            if (diagnostics) {
                diagnostics->count("dropped-type:" + type.id, available);
                diagnostics->note(fmt::format("{} ({}) dropped: {} instances < {}", type.id, type.name,
                                              available, config.min_instances));
            }
            continue;
        }

        std::vector<std::size_t> pool = it->second;
        const std::size_t take = std::min(config.sample_per_smell, available);
        if (take < available) {
            DeterministicRng rng(derive_seed(config.seed, type.id));
            for (std::size_t k = 0; k < take; ++k) {
                const std::size_t j = k + static_cast<std::size_t>(rng.uniform_index(available - k));
                std::swap(pool[k], pool[j]);
            }
            pool.resize(take);
            std::sort(pool.begin(), pool.end());
        }
        for (std::size_t idx : pool) {
            manifest.instances.push_back(instances[idx]);
            used_methods.insert(instances[idx].method_id);
        }
        if (diagnostics) diagnostics->count("kept:" + type.id, take);
    }

    for (const auto &m : methods) {
        if (used_methods.erase(m.method_id)) manifest.methods.push_back(m);
    }
    if (!used_methods.empty()) {
        throw DataError(fmt::format("instance references unknown method '{}'", *used_methods.begin()));
    }
    std::sort(manifest.methods.begin(), manifest.methods.end(),
              [](const auto &x, const auto &y) { return x.method_id < y.method_id; });
    return manifest;
}

std::size_t validation_sample_size(std::size_t population, double confidence, double margin) {
    if (population < 1) throw ConfigError("population must be at least 1");
    if (!(confidence > 0.0 && confidence < 1.0)) throw ConfigError("confidence must lie in (0, 1)");
    if (!(margin > 0.0 && margin < 1.0)) throw ConfigError("margin must lie in (0, 1)");

    const boost::math::normal_distribution<double> standard;
    const double z = boost::math::quantile(standard, 1.0 - (1.0 - confidence) / 2.0);
    const double p = 0.5;
    const double n0 = z * z * p * (1.0 - p) / (margin * margin);
    const double n = n0 / (1.0 + (n0 - 1.0) / static_cast<double>(population));
    const auto rounded = static_cast<std::size_t>(std::ceil(n));
    return std::min(rounded, population);
}

}  // namespace smellprop
