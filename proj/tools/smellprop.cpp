// smellprop: code smell propensity benchmark driver.
//
//   smellprop curate  --corpus <dir> --token-counts <file> --out <manifest.jsonl>
//   smellprop score   --manifest <file> --trace <file> --out <scores.jsonl>
//   smellprop compare --scores-a <file> --scores-b <file> --out-dir <dir>
//   smellprop report  --bundle <bundle.json> --out-dir <dir>
//
// Every subcommand accepts --config <file.json>; flags override config values.

#include <CLI11.hpp>
#include <fmt/core.h>

#include <iostream>
#include <optional>

#include "smellprop/commands.hpp"
#include "smellprop/config.hpp"
#include "smellprop/dataset.hpp"
#include "smellprop/error.hpp"

namespace fs = std::filesystem;
using namespace smellprop;

namespace {

struct Flags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> statistic;
    std::optional<double> threshold;
    std::optional<std::size_t> bootstrap_b;
    std::optional<double> level;
    std::optional<std::size_t> max_tokens;
    std::optional<std::size_t> sample_per_smell;
    std::optional<std::size_t> min_instances;
    std::optional<std::string> taxonomy;

    std::string corpus, token_counts, manifest, trace, out, scores_a, scores_b, out_dir, bundle, model;
};

RunConfig build_config(const Flags &f) {
    RunConfig config = f.config.empty() ? RunConfig{} : load_run_config(f.config);
    if (f.seed) {
        config.curation.seed = *f.seed;
        config.bootstrap.seed = *f.seed;
    }
    if (f.statistic) config.statistic = parse_statistic(*f.statistic);
    if (f.threshold) config.threshold = *f.threshold;
    if (f.bootstrap_b) config.bootstrap.b = *f.bootstrap_b;
    if (f.level) config.bootstrap.level = *f.level;
    if (f.max_tokens) config.curation.max_tokens = *f.max_tokens;
    if (f.sample_per_smell) config.curation.sample_per_smell = *f.sample_per_smell;
    if (f.min_instances) config.curation.min_instances = *f.min_instances;
    if (f.taxonomy) config.taxonomy_path = *f.taxonomy;
    config.validate();
    return config;
}

// Flag value, else the named config path, else a usage error.
fs::path pick(const std::string &flag, const RunConfig &config, const std::string &key, const char *option) {
    if (!flag.empty()) return flag;
    if (auto p = config.path(key)) return *p;
    throw ConfigError(fmt::format("missing {} (or paths.{} in the config)", option, key));
}

std::optional<fs::path> pick_optional(const std::string &flag, const RunConfig &config, const std::string &key) {
    if (!flag.empty()) return fs::path(flag);
    return config.path(key);
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Code smell propensity benchmark"};
    app.require_subcommand(1);
    Flags f;

    const auto common = [&f](CLI::App *cmd) {
        cmd->add_option("--config", f.config, "JSON run configuration");
        cmd->add_option("--seed", f.seed, "Master seed for sampling and bootstrap");
        cmd->add_option("--statistic", f.statistic, "Aggregation statistic: mean or median");
        cmd->add_option("--threshold", f.threshold, "Propensity threshold");
        cmd->add_option("--bootstrap-b", f.bootstrap_b, "Bootstrap resamples");
        cmd->add_option("--level", f.level, "Confidence level of bootstrap intervals");
    };

    auto *curate = app.add_subcommand("curate", "Build a dataset manifest from analyzer reports");
    common(curate);
    curate->add_option("--corpus", f.corpus, "Directory of method files with Pylint JSON reports");
    curate->add_option("--token-counts", f.token_counts, "Token counts (JSON object or trace JSONL)");
    curate->add_option("--out", f.out, "Manifest output path");
    curate->add_option("--taxonomy", f.taxonomy, "Taxonomy JSON (default: built-in 13 smells)");
    curate->add_option("--max-tokens", f.max_tokens, "Token budget per method (0 = unlimited)");
    curate->add_option("--sample-per-smell", f.sample_per_smell, "Instances sampled per smell type");
    curate->add_option("--min-instances", f.min_instances, "Minimum instances for a smell type to be kept");

    auto *score = app.add_subcommand("score", "Score manifest instances against a model trace");
    common(score);
    score->add_option("--manifest", f.manifest, "Dataset manifest");
    score->add_option("--trace", f.trace, "Trace JSONL for one model");
    score->add_option("--out", f.out, "Score file output path");
    score->add_option("--model", f.model, "Expected model id in the trace");

    auto *compare = app.add_subcommand("compare", "Compare two models' score files");
    common(compare);
    compare->add_option("--scores-a", f.scores_a, "Score file of the first model");
    compare->add_option("--scores-b", f.scores_b, "Score file of the second model");
    compare->add_option("--out-dir", f.out_dir, "Output directory");

    auto *report = app.add_subcommand("report", "Render a comparison bundle");
    common(report);
    report->add_option("--bundle", f.bundle, "bundle.json written by compare");
    report->add_option("--out-dir", f.out_dir, "Output directory");

    std::size_t population = 0;
    double confidence = 0.80;
    double margin = 0.15;
    auto *sample_size = app.add_subcommand("sample-size", "Validation sample size for a smell type");
    sample_size->add_option("--population", population, "Number of instances")->required();
    sample_size->add_option("--confidence", confidence, "Two-sided confidence level");
    sample_size->add_option("--margin", margin, "Margin of error");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return static_cast<int>(ExitCode::kUsage);
    }

    try {
        if (*sample_size) {
            std::cout << validation_sample_size(population, confidence, margin) << '\n';
            return 0;
        }
        const RunConfig config = build_config(f);
        if (*curate) {
            cmd_curate(config, pick(f.corpus, config, "corpus", "--corpus"),
                       pick_optional(f.token_counts, config, "token_counts"),
                       pick(f.out, config, "manifest", "--out"), std::cerr);
        } else if (*score) {
            const std::optional<std::string> model = f.model.empty() ? std::nullopt : std::optional(f.model);
            cmd_score(config, pick(f.manifest, config, "manifest", "--manifest"),
                      pick(f.trace, config, "trace", "--trace"), pick(f.out, config, "scores", "--out"), model,
                      std::cerr);
        } else if (*compare) {
            cmd_compare(config, pick(f.scores_a, config, "scores_a", "--scores-a"),
                        pick(f.scores_b, config, "scores_b", "--scores-b"),
                        pick(f.out_dir, config, "out_dir", "--out-dir"), std::cerr);
        } else if (*report) {
            cmd_report(pick(f.bundle, config, "bundle", "--bundle"), pick(f.out_dir, config, "out_dir", "--out-dir"),
                       std::cout);
        }
    } catch (const Error &e) {
        std::cerr << "smellprop: " << e.what() << '\n';
        return static_cast<int>(e.code());
    } catch (const std::exception &e) {
        std::cerr << "smellprop: internal error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::kInternal);
    }
    return 0;
}
