#include "smellprop/commands.hpp"

#include <fmt/core.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <future>
#include <ostream>
#include <set>
#include <unordered_map>

#include "smellprop/digest.hpp"
#include "smellprop/fileio.hpp"
#include "smellprop/manifest_io.hpp"

namespace smellprop {

namespace fs = std::filesystem;

CurateResult curate(const Corpus &corpus, const SmellTaxonomy &taxonomy, const CurationConfig &config,
                    const std::map<std::string, std::size_t> &token_counts) {
    config.validate();
    CurateResult result;
    Diagnostics &diag = result.diagnostics;

    std::unordered_map<std::string, const MethodRecord *> methods;
    for (const auto &m : corpus.methods) {
        if (!methods.emplace(m.method_id, &m).second) {
            throw DataError(fmt::format("duplicate method_id '{}' in corpus", m.method_id));
        }
    }

    std::vector<SmellInstance> resolved;
    resolved.reserve(corpus.reported.size());
    for (const auto &r : corpus.reported) {
        auto it = methods.find(r.method_id);
        if (it == methods.end()) throw DataError(fmt::format("report for unknown method '{}'", r.method_id));
        try {
            resolved.push_back(resolve_instance(r, *it->second));
        } catch (const LocationError &e) {
            diag.count("unresolved-location:" + r.smell.id);
            diag.note(e.what());
        }
    }

    const auto unique = deduplicate_methods(resolved, corpus.methods, &diag);
    const auto budgeted = filter_by_token_budget(unique, token_counts, config.max_tokens, &diag);
    result.manifest = sample_per_smell(budgeted, corpus.methods, taxonomy, config, &diag);
    if (result.manifest.instances.empty()) {
        throw DataError(fmt::format("empty dataset: no smell type has at least {} instances", config.min_instances));
    }
    result.manifest.validate();
    return result;
}

ScoreFile score_manifest(const DatasetManifest &manifest, const std::string &manifest_digest,
                         const TraceSet &traces, Statistic statistic, double threshold,
                         Diagnostics &diagnostics) {
    std::set<std::string> missing;
    for (const auto &m : manifest.methods) {
        if (!traces.by_method.count(m.method_id)) missing.insert(m.method_id);
    }
    if (!missing.empty()) {
        std::string list;
        for (const auto &id : missing) list += (list.empty() ? "" : ", ") + id;
        throw DataError(fmt::format("trace for model '{}' is missing {} method(s): {}", traces.model_id,
                                    missing.size(), list));
    }

    std::unordered_map<std::string, std::size_t> text_length;
    for (const auto &m : manifest.methods) {
        const std::size_t len = code_point_count(m.source_text);
        traces.by_method.at(m.method_id).validate(len);
        text_length.emplace(m.method_id, len);
    }

    ScoreFile file;
    file.model_id = traces.model_id;
    file.manifest_digest = manifest_digest;
    file.taxonomy = manifest.taxonomy;
    file.statistic = statistic;
    file.threshold = threshold;

    std::set<std::string> had_instances;
    for (const auto &inst : manifest.instances) {
        had_instances.insert(inst.smell.id);
        const TokenTrace &trace = traces.by_method.at(inst.method_id);
        try {
            file.scores.push_back(score_instance(trace, inst, text_length.at(inst.method_id), statistic));
        } catch (const AlignmentError &e) {
            const bool unscorable = dynamic_cast<const UnscorableSpanError *>(&e) != nullptr;
            const std::string reason = unscorable ? "unscorable-span" : "no-overlapping-token";
            file.excluded.push_back({inst.method_id, inst.smell.id, inst.char_span, reason});
            diagnostics.count(reason + ":" + inst.smell.id);
            diagnostics.note(e.what());
        }
    }
    sort_scores(file.scores);
    std::sort(file.excluded.begin(), file.excluded.end(), [](const auto &x, const auto &y) {
        return std::tie(x.smell_id, x.method_id, x.char_span) < std::tie(y.smell_id, y.method_id, y.char_span);
    });

    for (const auto &type : manifest.taxonomy.entries()) {
        const auto scores = file.scores_for(type.id);
        if (scores.empty()) {
            if (had_instances.count(type.id)) {
                diagnostics.count("omitted-type:" + type.id);
                diagnostics.note(fmt::format("{} omitted: every instance was excluded", type.id));
            }
            continue;
        }
        file.estimates.push_back(global_estimate(scores, threshold));
    }
    return file;
}

CompareResult compare_scores(const ScoreFile &a, const ScoreFile &b, double threshold,
                             const BootstrapSettings &bootstrap) {
    if (a.manifest_digest != b.manifest_digest) {
        throw DataError(fmt::format("score files come from different manifests ({} vs {})", a.manifest_digest,
                                    b.manifest_digest));
    }
    if (!(a.taxonomy == b.taxonomy)) throw DataError("score files use different taxonomies");

    CompareResult result;
    ReportBundle &bundle = result.bundle;
    bundle.manifest_digest = a.manifest_digest;
    bundle.taxonomy = a.taxonomy;
    bundle.threshold = threshold;
    bundle.statistic = a.statistic;
    bundle.bootstrap = bootstrap;
    if (a.statistic != b.statistic) bundle.diagnostics.note("score files were aggregated with different statistics");

    for (const auto *file : {&a, &b}) {
        for (const auto &x : file->excluded) bundle.diagnostics.count("excluded:" + file->model_id + ":" + x.reason);
    }

    struct Work {
        std::string smell_id;
        std::vector<PscScore> scores_a;
        std::vector<PscScore> scores_b;
    };
    std::vector<Work> work;
    for (const auto &type : a.taxonomy.entries()) {
        Work w{type.id, a.scores_for(type.id), b.scores_for(type.id)};
        if (w.scores_a.empty() && w.scores_b.empty()) continue;
        if (w.scores_a.empty() || w.scores_b.empty()) {
            bundle.diagnostics.count("one-sided:" + type.id);
            bundle.diagnostics.note(fmt::format("{} scored for only one model; left out of the comparison", type.id));
            continue;
        }
        work.push_back(std::move(w));
    }

    struct Outcome {
        GlobalEstimate est_a;
        GlobalEstimate est_b;
        ComparisonResult comparison;
        BootstrapDistribution dist_a;
        BootstrapDistribution dist_b;
    };
    // Each smell bootstraps with its own child seeds, so the fan-out order
    // does not affect results.
    std::vector<std::future<Outcome>> futures;
    for (const auto &w : work) {
        futures.push_back(std::async(std::launch::async, [&w, &a, &b, threshold, bootstrap] {
            const auto values = [](const std::vector<PscScore> &scores) {
                std::vector<double> v;
                v.reserve(scores.size());
                for (const auto &s : scores) v.push_back(s.value);
                return v;
            };
            const auto va = values(w.scores_a);
            const auto vb = values(w.scores_b);
            Outcome o;
            o.est_a = global_estimate(w.scores_a, threshold);
            o.est_b = global_estimate(w.scores_b, threshold);
            o.comparison = compare_models(va, vb, w.smell_id, a.model_id, b.model_id, bootstrap.b, bootstrap.level,
                                          bootstrap.seed);
            o.dist_a = bootstrap_for(va, w.smell_id, a.model_id, bootstrap.b, bootstrap.seed);
            o.dist_b = bootstrap_for(vb, w.smell_id, b.model_id, bootstrap.b, bootstrap.seed);
            return o;
        }));
    }

    std::vector<GlobalEstimate> estimates_a;
    std::vector<GlobalEstimate> estimates_b;
    for (auto &f : futures) {
        Outcome o = f.get();
        estimates_a.push_back(o.est_a);
        estimates_b.push_back(o.est_b);
        bundle.comparisons.push_back(std::move(o.comparison));
        result.distributions.push_back(std::move(o.dist_a));
        result.distributions.push_back(std::move(o.dist_b));
    }
    bundle.model_a = summarize_model(a.model_id, std::move(estimates_a), a.taxonomy);
    bundle.model_b = summarize_model(b.model_id, std::move(estimates_b), a.taxonomy);
    bundle.validate();
    return result;
}

std::string manifest_digest(const std::string &manifest_bytes) { return sha256_hex(manifest_bytes); }

namespace {

void print_diagnostics(const Diagnostics &diag, std::ostream &log) {
    for (const auto &[key, value] : diag.counters) fmt::print(log, "  {}: {}\n", key, value);
}

}  // namespace

void cmd_curate(const RunConfig &config, const fs::path &corpus_dir, const std::optional<fs::path> &token_counts_path,
                const fs::path &out_path, std::ostream &log) {
    config.validate();
    require_exists(corpus_dir, "corpus directory");
    std::vector<fs::path> roles = {corpus_dir, out_path};
    std::map<std::string, std::size_t> token_counts;
    if (config.curation.max_tokens > 0) {
        if (!token_counts_path) {
            throw ConfigError("a token budget is set; pass --token-counts or set max_tokens to 0");
        }
        require_exists(*token_counts_path, "token counts file");
        roles.push_back(*token_counts_path);
    }
    require_distinct(roles);
    if (config.curation.max_tokens > 0) token_counts = load_token_counts(*token_counts_path);

    const SmellTaxonomy taxonomy = config.load_taxonomy();
    Diagnostics load_diag;
    const Corpus corpus = load_corpus(corpus_dir, taxonomy, load_diag);
    CurateResult result = curate(corpus, taxonomy, config.curation, token_counts);
    result.diagnostics.merge(load_diag);

    const std::string bytes = serialize_manifest(result.manifest);
    write_file_atomic(out_path, bytes);

    fmt::print(log, "curated {} instances from {} methods ({} methods loaded)\n", result.manifest.instances.size(),
               result.manifest.methods.size(), corpus.methods.size());
    std::map<std::string, std::size_t> per_smell;
    for (const auto &inst : result.manifest.instances) ++per_smell[inst.smell.id];
    for (const auto &type : taxonomy.entries()) {
        if (per_smell.count(type.id)) fmt::print(log, "  {} {}: {}\n", type.id, type.name, per_smell[type.id]);
    }
    print_diagnostics(result.diagnostics, log);
    fmt::print(log, "manifest digest {}\n", manifest_digest(bytes));
}

void cmd_score(const RunConfig &config, const fs::path &manifest_path, const fs::path &trace_path,
               const fs::path &out_path, const std::optional<std::string> &expected_model, std::ostream &log) {
    config.validate();
    require_exists(manifest_path, "manifest");
    require_exists(trace_path, "trace file");
    require_distinct({manifest_path, trace_path, out_path});

    const std::string manifest_bytes = read_file(manifest_path);
    const DatasetManifest manifest = parse_manifest(manifest_bytes);
    const TraceSet traces = index_traces(parse_traces(read_file(trace_path)));
    if (expected_model && !traces.model_id.empty() && traces.model_id != *expected_model) {
        throw DataError(fmt::format("trace file holds model '{}', expected '{}'", traces.model_id, *expected_model));
    }

    Diagnostics diag;
    const ScoreFile file =
        score_manifest(manifest, manifest_digest(manifest_bytes), traces, config.statistic, config.threshold, diag);
    if (file.scores.size() + file.excluded.size() != manifest.instances.size()) {
        throw InvariantError("scored and excluded instances do not add up to the manifest");
    }
    write_file_atomic(out_path, serialize_scores(file));

    fmt::print(log, "model {}: scored {} instances, excluded {}\n", file.model_id, file.scores.size(),
               file.excluded.size());
    for (const auto &e : file.estimates) {
        fmt::print(log, "  {}: {} (n={}){}\n", e.smell_id, format_mean_std(e.mean, e.std), e.n,
                   e.propense ? " propense" : "");
    }
    print_diagnostics(diag, log);
}

void cmd_compare(const RunConfig &config, const fs::path &scores_a, const fs::path &scores_b, const fs::path &out_dir,
                 std::ostream &log) {
    config.validate();
    require_exists(scores_a, "score file");
    require_exists(scores_b, "score file");
    if (fs::exists(out_dir) && !fs::is_directory(out_dir)) {
        throw ConfigError(fmt::format("output '{}' is not a directory", out_dir.string()));
    }

    const ScoreFile a = parse_scores(read_file(scores_a));
    const ScoreFile b = parse_scores(read_file(scores_b));
    const CompareResult result = compare_scores(a, b, config.threshold, config.bootstrap);

    std::string comparisons;
    for (const auto &c : result.bundle.comparisons) comparisons += to_json(c).dump() + '\n';
    write_file_atomic(out_dir / "comparison.jsonl", comparisons);
    write_file_atomic(out_dir / "bundle.json", to_json(result.bundle).dump(2) + '\n');
    write_file_atomic(out_dir / "boxplot.csv",
                      render_boxplot_csv(result.distributions, config.threshold, config.bootstrap));
    write_file_atomic(out_dir / "scores.csv", render_scores_csv({{a.model_id, a.scores}, {b.model_id, b.scores}}));

    fmt::print(log, "{}: {}\n", result.bundle.model_a.model_id, propense_headline(result.bundle.model_a));
    fmt::print(log, "{}: {}\n", result.bundle.model_b.model_id, propense_headline(result.bundle.model_b));
    for (const auto &c : result.bundle.comparisons) {
        fmt::print(log, "  {}: delta {:+.3f}, OVL {:.2f}\n", c.smell_id, c.mean_delta, c.overlap);
    }
    print_diagnostics(result.bundle.diagnostics, log);
}

void cmd_report(const fs::path &bundle_path, const fs::path &out_dir, std::ostream &log) {
    require_exists(bundle_path, "report bundle");
    const auto j = nlohmann::json::parse(read_file(bundle_path), nullptr, false);
    if (j.is_discarded()) throw DataError(fmt::format("bundle '{}' is not valid JSON", bundle_path.string()));
    const ReportBundle bundle = bundle_from_json(j);
    const std::string markdown = render_markdown(bundle);
    write_file_atomic(out_dir / "report.md", markdown);
    write_file_atomic(out_dir / "estimates.csv", render_estimates_csv(bundle));
    log << markdown;
}

}  // namespace smellprop
