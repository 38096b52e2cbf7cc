#include "smellprop/config.hpp"

#include <fmt/core.h>

#include "smellprop/error.hpp"
#include "smellprop/fileio.hpp"

namespace smellprop {

namespace fs = std::filesystem;

SmellTaxonomy RunConfig::load_taxonomy() const {
    if (!taxonomy_path) return default_taxonomy();
    const std::string text = read_file(*taxonomy_path);
    const auto j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ConfigError(fmt::format("taxonomy '{}' is not valid JSON", taxonomy_path->string()));
    return taxonomy_from_json(j);
}

void RunConfig::validate() const {
    curation.validate();
    if (!(threshold > 0.0 && threshold < 1.0)) throw ConfigError("threshold must lie in (0, 1)");
    if (!(bootstrap.level > 0.0 && bootstrap.level < 1.0)) throw ConfigError("level must lie in (0, 1)");
    if (bootstrap.b == 0) throw ConfigError("bootstrap B must be at least 1");
}

std::optional<fs::path> RunConfig::path(const std::string &key) const {
    auto it = paths.find(key);
    if (it == paths.end()) return std::nullopt;
    return it->second;
}

RunConfig run_config_from_json(const nlohmann::json &j, const fs::path &base_dir) {
    const auto resolve = [&](const std::string &p) {
        fs::path path(p);
        return path.is_relative() && !base_dir.empty() ? base_dir / path : path;
    };
    RunConfig config;
    try {
        if (j.contains("taxonomy") && !j.at("taxonomy").is_null()) {
            config.taxonomy_path = resolve(j.at("taxonomy").get<std::string>());
        }
        if (j.contains("seed")) {
            config.curation.seed = j.at("seed").get<std::uint64_t>();
            config.bootstrap.seed = config.curation.seed;
        }
        if (auto c = j.find("curation"); c != j.end()) {
            config.curation.max_tokens = c->value("max_tokens", config.curation.max_tokens);
            config.curation.sample_per_smell = c->value("sample_per_smell", config.curation.sample_per_smell);
            config.curation.min_instances = c->value("min_instances", config.curation.min_instances);
            config.curation.drop_degraded_types = c->value("drop_degraded_types", config.curation.drop_degraded_types);
        }
        if (j.contains("statistic")) config.statistic = parse_statistic(j.at("statistic").get<std::string>());
        config.threshold = j.value("threshold", config.threshold);
        if (auto b = j.find("bootstrap"); b != j.end()) {
            config.bootstrap.b = b->value("b", config.bootstrap.b);
            config.bootstrap.level = b->value("level", config.bootstrap.level);
            config.bootstrap.seed = b->value("seed", config.bootstrap.seed);
        }
        if (j.contains("models")) config.models = j.at("models").get<std::vector<std::string>>();
        if (auto p = j.find("paths"); p != j.end()) {
            for (const auto &[key, value] : p->items()) config.paths[key] = resolve(value.get<std::string>());
        }
    } catch (const nlohmann::json::exception &e) {
        throw ConfigError(fmt::format("bad config: {}", e.what()));
    }
    return config;
}

RunConfig load_run_config(const fs::path &path) {
    const std::string text = read_file(path);
    const auto j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        throw ConfigError(fmt::format("config '{}' is not a JSON object", path.string()));
    }
    return run_config_from_json(j, path.parent_path());
}

void require_distinct(const std::vector<fs::path> &paths) {
    std::vector<fs::path> normalized;
    for (const auto &p : paths) {
        const fs::path n = fs::weakly_canonical(p);
        for (const auto &seen : normalized) {
            if (seen == n) throw ConfigError(fmt::format("path '{}' is used for two different roles", p.string()));
        }
        normalized.push_back(n);
    }
}

void require_exists(const fs::path &path, const std::string &what) {
    if (!fs::exists(path)) throw ConfigError(fmt::format("{} '{}' does not exist", what, path.string()));
}

}  // namespace smellprop
