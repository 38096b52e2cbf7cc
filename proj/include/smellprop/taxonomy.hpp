#pragma once

#include <nlohmann/json.hpp>

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace smellprop {

enum class SmellCategory { kConvention, kRefactor, kWarning };

std::string_view to_string(SmellCategory category);
SmellCategory parse_category(std::string_view text);

// One Pylint message type, e.g. C0103 / invalid-name.
struct SmellType {
    std::string id;
    std::string name;
    SmellCategory category = SmellCategory::kConvention;

    friend bool operator==(const SmellType &, const SmellType &) = default;
};

// Throws ConfigError if the id is not letter+4 digits or the letter disagrees
// with the category.
void validate_smell_type(const SmellType &type);

// Ordered set of smell types. Lookup accepts either the message id or the symbol.
class SmellTaxonomy {
public:
    SmellTaxonomy() = default;
    explicit SmellTaxonomy(std::vector<SmellType> entries);

    const std::vector<SmellType> &entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }

    const SmellType *find(std::string_view id_or_name) const noexcept;
    const SmellType &at(std::string_view id) const;
    // Position of the id within the taxonomy, used for stable output ordering.
    std::optional<std::size_t> position(std::string_view id) const noexcept;

    friend bool operator==(const SmellTaxonomy &, const SmellTaxonomy &) = default;

private:
    std::vector<SmellType> entries_;
};

// The thirteen method-level smells of the benchmark dataset.
const SmellTaxonomy &default_taxonomy();

nlohmann::json to_json(const SmellTaxonomy &taxonomy);
SmellTaxonomy taxonomy_from_json(const nlohmann::json &j);

}  // namespace smellprop
