#include "smellprop/taxonomy.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <cctype>
#include <set>

#include "smellprop/error.hpp"

namespace smellprop {

std::string_view to_string(SmellCategory category) {
    switch (category) {
        case SmellCategory::kConvention:
            return "Convention";
        case SmellCategory::kRefactor:
            return "Refactor";
        case SmellCategory::kWarning:
            return "Warning";
    }
    return "Unknown";
}

SmellCategory parse_category(std::string_view text) {
    if (text == "Convention" || text == "convention") return SmellCategory::kConvention;
    if (text == "Refactor" || text == "refactor") return SmellCategory::kRefactor;
    if (text == "Warning" || text == "warning") return SmellCategory::kWarning;
    throw ConfigError(fmt::format("unknown smell category '{}'", text));
}

void validate_smell_type(const SmellType &type) {
    const std::string &id = type.id;
    const bool shape_ok =
        id.size() == 5 &&
        std::all_of(id.begin() + 1, id.end(), [](unsigned char c) { return std::isdigit(c); });
    if (!shape_ok) throw ConfigError(fmt::format("smell id '{}' is not a letter plus 4 digits", id));
    char expected = '?';
    switch (type.category) {
        case SmellCategory::kConvention:
            expected = 'C';
            break;
        case SmellCategory::kRefactor:
            expected = 'R';
            break;
        case SmellCategory::kWarning:
            expected = 'W';
            break;
    }
    if (id[0] != expected) {
        throw ConfigError(fmt::format("smell id '{}' does not match category {}", id,
                                      to_string(type.category)));
    }
    if (type.name.empty()) throw ConfigError(fmt::format("smell id '{}' has an empty name", id));
}

SmellTaxonomy::SmellTaxonomy(std::vector<SmellType> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) throw ConfigError("taxonomy is empty");
    std::set<std::string> ids;
    std::set<std::string> names;
    for (const auto &t : entries_) {
        validate_smell_type(t);
        if (!ids.insert(t.id).second) throw ConfigError(fmt::format("duplicate smell id '{}'", t.id));
        if (!names.insert(t.name).second) {
            throw ConfigError(fmt::format("duplicate smell name '{}'", t.name));
        }
    }
}

const SmellType *SmellTaxonomy::find(std::string_view id_or_name) const noexcept {
    for (const auto &t : entries_) {
        if (t.id == id_or_name || t.name == id_or_name) return &t;
    }
    return nullptr;
}

const SmellType &SmellTaxonomy::at(std::string_view id) const {
    if (const SmellType *t = find(id)) return *t;
    throw DataError(fmt::format("smell '{}' is not in the taxonomy", id));
}

std::optional<std::size_t> SmellTaxonomy::position(std::string_view id) const noexcept {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (entries_[i].id == id) return i;
    }
    return std::nullopt;
}

const SmellTaxonomy &default_taxonomy() {
    static const SmellTaxonomy taxonomy({
        {"C0103", "invalid-name", SmellCategory::kConvention},
        {"C0121", "singleton-comparison", SmellCategory::kConvention},
        {"C3001", "unnecessary-lambda-assignment", SmellCategory::kConvention},
        {"C2401", "non-ascii-name", SmellCategory::kConvention},
        {"C0104", "disallowed-name", SmellCategory::kConvention},
        {"R0913", "too-many-arguments", SmellCategory::kRefactor},
        {"R1702", "too-many-nested-blocks", SmellCategory::kRefactor},
        {"R0916", "too-many-boolean-expressions", SmellCategory::kRefactor},
        {"R1701", "consider-merging-isinstance", SmellCategory::kRefactor},
        {"R1716", "chained-comparison", SmellCategory::kRefactor},
        {"W0718", "broad-exception-caught", SmellCategory::kWarning},
        {"W0719", "broad-exception-raised", SmellCategory::kWarning},
        {"W0108", "unnecessary-lambda", SmellCategory::kWarning},
    });
    return taxonomy;
}

nlohmann::json to_json(const SmellTaxonomy &taxonomy) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto &t : taxonomy.entries()) {
        out.push_back({{"id", t.id}, {"name", t.name}, {"category", std::string(to_string(t.category))}});
    }
    return out;
}

SmellTaxonomy taxonomy_from_json(const nlohmann::json &j) {
    if (!j.is_array()) throw ConfigError("taxonomy must be a JSON array");
    std::vector<SmellType> entries;
    for (const auto &e : j) {
        try {
            entries.push_back({e.at("id").get<std::string>(), e.at("name").get<std::string>(),
                               parse_category(e.at("category").get<std::string>())});
        } catch (const nlohmann::json::exception &ex) {
            throw ConfigError(fmt::format("bad taxonomy entry: {}", ex.what()));
        }
    }
    return SmellTaxonomy(std::move(entries));
}

}  // namespace smellprop
