#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "smellprop/diagnostics.hpp"
#include "smellprop/error.hpp"
#include "smellprop/taxonomy.hpp"
#include "smellprop/text.hpp"

namespace smellprop {

// Pylint convention: lines are 1-based, columns 0-based, end column exclusive.
struct SourceLocation {
    std::size_t start_line = 1;
    std::size_t start_col = 0;
    std::size_t end_line = 1;
    std::size_t end_col = 0;

    friend bool operator==(const SourceLocation &, const SourceLocation &) = default;
};

// Throws DataError unless start <= end lexicographically and lines are >= 1.
void validate_location(const SourceLocation &loc);

// A location that does not resolve inside the method text.
class LocationError : public DataError {
public:
    LocationError(const std::string &what, SourceLocation location)
        : DataError(what), location_(location) {}

    const SourceLocation &location() const noexcept { return location_; }

private:
    SourceLocation location_;
};

struct MethodRecord {
    std::string method_id;
    std::string source_text;
    std::string origin;
    std::string content_hash;

    // Computes content_hash from source_text; throws DataError on empty text.
    static MethodRecord make(std::string method_id, std::string source_text, std::string origin);
};

// A smell reported by the analyzer, before its location is resolved against
// the method text. When the report lacks an end column, the location runs to
// the end of end_line.
struct ReportedSmell {
    std::string method_id;
    SmellType smell;
    SourceLocation location;
    bool to_line_end = false;
};

struct SmellInstance {
    std::string method_id;
    SmellType smell;
    SourceLocation location;
    CharSpan char_span;
    // The analyzer did not report an exact end position.
    bool degraded = false;
};

struct CurationConfig {
    // 0 disables the token budget.
    std::size_t max_tokens = 400;
    std::size_t sample_per_smell = 100;
    std::size_t min_instances = 100;
    std::uint64_t seed = 0;
    // Drop every smell type that has at least one degraded location.
    bool drop_degraded_types = false;

    void validate() const;
};

struct DatasetManifest {
    SmellTaxonomy taxonomy;
    std::vector<SmellInstance> instances;
    std::vector<MethodRecord> methods;
    CurationConfig curation_config;
    std::uint64_t seed = 0;

    const MethodRecord *find_method(std::string_view method_id) const noexcept;
    // Throws DataError if an instance references a missing method, a span does
    // not reproduce from its location, or a method hash is stale.
    void validate() const;
};

// Parses `pylint --output-format=json` output for one method file. Messages
// whose id or symbol is not in the taxonomy are skipped and counted under
// "skipped:<id>". Throws ParseError (with byte offset) on malformed JSON.
std::vector<ReportedSmell> parse_pylint_report(std::string_view report_text,
                                               const SmellTaxonomy &taxonomy,
                                               const std::string &method_id,
                                               Diagnostics &diagnostics);

CharSpan resolve_char_span(std::string_view source_text, const SourceLocation &location);
CharSpan resolve_char_span(const LineIndex &index, const SourceLocation &location);

// Resolves the location against the method text, filling in the end column
// for degraded locations.
SmellInstance resolve_instance(const ReportedSmell &reported, const MethodRecord &method);

// Keeps each method (grouped by content hash) under a single smell type: the
// type with the smaller instance count in `instances` wins, ties by smell id.
// Among identical-content methods only the smallest method_id survives.
std::vector<SmellInstance> deduplicate_methods(const std::vector<SmellInstance> &instances,
                                               const std::vector<MethodRecord> &methods,
                                               Diagnostics *diagnostics = nullptr);

// Inclusive at the boundary: count <= max_tokens survives. max_tokens == 0 is no limit.
std::vector<SmellInstance> filter_by_token_budget(
    const std::vector<SmellInstance> &instances,
    const std::map<std::string, std::size_t> &token_counts, std::size_t max_tokens,
    Diagnostics *diagnostics = nullptr);

// Drops types below min_instances and draws sample_per_smell instances per
// remaining type uniformly without replacement. Deterministic in
// (instance order, seed).
DatasetManifest sample_per_smell(const std::vector<SmellInstance> &instances,
                                 const std::vector<MethodRecord> &methods,
                                 const SmellTaxonomy &taxonomy, const CurationConfig &config,
                                 Diagnostics *diagnostics = nullptr);

// Sample size for validating a population at the given two-sided confidence
// and margin of error, with p = 0.5 and finite-population correction.
std::size_t validation_sample_size(std::size_t population, double confidence, double margin);

}  // namespace smellprop
