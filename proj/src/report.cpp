#include "smellprop/report.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "smellprop/error.hpp"
#include "smellprop/rng.hpp"
#include "smellprop/score_io.hpp"

namespace smellprop {

using nlohmann::json;

const GlobalEstimate *ModelSummary::find(const std::string &smell_id) const noexcept {
    for (const auto &e : estimates) {
        if (e.smell_id == smell_id) return &e;
    }
    return nullptr;
}

ModelSummary summarize_model(const std::string &model_id, std::vector<GlobalEstimate> estimates,
                             const SmellTaxonomy &taxonomy) {
    const auto pos = [&](const std::string &id) { return taxonomy.position(id).value_or(taxonomy.size()); };
    std::sort(estimates.begin(), estimates.end(),
              [&](const auto &a, const auto &b) { return pos(a.smell_id) < pos(b.smell_id); });

    ModelSummary summary;
    summary.model_id = model_id;
    std::vector<const GlobalEstimate *> ranked;
    for (const auto &e : estimates) {
        ranked.push_back(&e);
        if (e.propense) ++summary.propense_count;
    }
    std::sort(ranked.begin(), ranked.end(), [](const GlobalEstimate *a, const GlobalEstimate *b) {
        if (a->mean != b->mean) return a->mean > b->mean;
        return a->smell_id < b->smell_id;
    });
    for (const auto *e : ranked) summary.ranking.push_back(e->smell_id);
    summary.estimates = std::move(estimates);
    return summary;
}

void ReportBundle::validate() const {
    for (const ModelSummary *m : {&model_a, &model_b}) {
        std::multiset<std::string> ranked(m->ranking.begin(), m->ranking.end());
        std::multiset<std::string> estimated;
        for (const auto &e : m->estimates) estimated.insert(e.smell_id);
        if (ranked != estimated) {
            throw InvariantError(fmt::format("ranking of '{}' is not a permutation of its smells", m->model_id));
        }
    }
    for (const auto &e : model_a.estimates) {
        if (!model_b.find(e.smell_id)) {
            throw InvariantError(fmt::format("smell {} estimated for '{}' but not '{}'", e.smell_id,
                                             model_a.model_id, model_b.model_id));
        }
    }
    if (model_a.estimates.size() != model_b.estimates.size()) {
        throw InvariantError("models retain different smell sets");
    }
}

namespace {

json interval_to_json(const IntervalEstimate &ci) {
    return {{"level", ci.level}, {"low", ci.low}, {"high", ci.high}, {"margin_of_error", ci.margin_of_error}};
}

IntervalEstimate interval_from_json(const json &j) {
    return {j.at("level").get<double>(), j.at("low").get<double>(), j.at("high").get<double>(),
            j.at("margin_of_error").get<double>()};
}

json summary_to_json(const ModelSummary &m) {
    json estimates = json::array();
    for (const auto &e : m.estimates) estimates.push_back(to_json(e));
    return {{"model_id", m.model_id},
            {"estimates", estimates},
            {"ranking", m.ranking},
            {"propense_count", m.propense_count}};
}

ModelSummary summary_from_json(const json &j) {
    ModelSummary m;
    m.model_id = j.at("model_id").get<std::string>();
    for (const auto &e : j.at("estimates")) m.estimates.push_back(estimate_from_json(e));
    m.ranking = j.at("ranking").get<std::vector<std::string>>();
    m.propense_count = j.at("propense_count").get<std::size_t>();
    return m;
}

std::string full_precision(double v) { return fmt::format("{:.17g}", v); }

std::string csv_quote(const std::string &field) {
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

}  // namespace

json to_json(const ComparisonResult &c) {
    return {{"smell_id", c.smell_id},
            {"model_a", c.model_a},
            {"model_b", c.model_b},
            {"ci_a", interval_to_json(c.ci_a)},
            {"ci_b", interval_to_json(c.ci_b)},
            {"overlap", c.overlap},
            {"mean_a", c.mean_a},
            {"mean_b", c.mean_b},
            {"mean_delta", c.mean_delta}};
}

ComparisonResult comparison_from_json(const json &j) {
    ComparisonResult c;
    c.smell_id = j.at("smell_id").get<std::string>();
    c.model_a = j.at("model_a").get<std::string>();
    c.model_b = j.at("model_b").get<std::string>();
    c.ci_a = interval_from_json(j.at("ci_a"));
    c.ci_b = interval_from_json(j.at("ci_b"));
    c.overlap = j.at("overlap").get<double>();
    c.mean_a = j.at("mean_a").get<double>();
    c.mean_b = j.at("mean_b").get<double>();
    c.mean_delta = j.at("mean_delta").get<double>();
    return c;
}

json to_json(const ReportBundle &bundle) {
    json comparisons = json::array();
    for (const auto &c : bundle.comparisons) comparisons.push_back(to_json(c));
    return {{"manifest_digest", bundle.manifest_digest},
            {"taxonomy", to_json(bundle.taxonomy)},
            {"threshold", bundle.threshold},
            {"statistic", std::string(to_string(bundle.statistic))},
            {"bootstrap",
             {{"b", bundle.bootstrap.b},
              {"level", bundle.bootstrap.level},
              {"seed", bundle.bootstrap.seed},
              {"rng", std::string(kRngAlgorithm)}}},
            {"model_a", summary_to_json(bundle.model_a)},
            {"model_b", summary_to_json(bundle.model_b)},
            {"comparisons", comparisons},
            {"diagnostics", to_json(bundle.diagnostics)}};
}

ReportBundle bundle_from_json(const json &j) {
    try {
        ReportBundle bundle;
        bundle.manifest_digest = j.at("manifest_digest").get<std::string>();
        bundle.taxonomy = taxonomy_from_json(j.at("taxonomy"));
        bundle.threshold = j.at("threshold").get<double>();
        bundle.statistic = parse_statistic(j.at("statistic").get<std::string>());
        const auto &bs = j.at("bootstrap");
        bundle.bootstrap = {bs.at("b").get<std::size_t>(), bs.at("level").get<double>(),
                            bs.at("seed").get<std::uint64_t>()};
        bundle.model_a = summary_from_json(j.at("model_a"));
        bundle.model_b = summary_from_json(j.at("model_b"));
        for (const auto &c : j.at("comparisons")) bundle.comparisons.push_back(comparison_from_json(c));
        if (j.contains("diagnostics")) bundle.diagnostics = diagnostics_from_json(j.at("diagnostics"));
        return bundle;
    } catch (const json::exception &e) {
        throw DataError(fmt::format("bad report bundle: {}", e.what()));
    }
}

std::string format_mean_std(double mean, double std) { return fmt::format("{:.2f} ± {:.2f}", mean, std); }

std::string format_margin(double margin_of_error) {
    return fmt::format("{:.0f}%", std::round(margin_of_error * 100.0));
}

std::string propense_headline(const ModelSummary &summary) {
    return fmt::format("{} of {} propense", summary.propense_count, summary.estimates.size());
}

std::string render_markdown(const ReportBundle &bundle) {
    bundle.validate();
    const auto &a = bundle.model_a;
    const auto &b = bundle.model_b;
    const auto comparison_for = [&](const std::string &id) -> const ComparisonResult * {
        for (const auto &c : bundle.comparisons) {
            if (c.smell_id == id) return &c;
        }
        return nullptr;
    };
    const auto name_of = [&](const std::string &id) {
        const SmellType *t = bundle.taxonomy.find(id);
        return t ? t->name : std::string();
    };
    const auto margin_of = [&](const std::string &id) {
        const ComparisonResult *c = comparison_for(id);
        return c ? format_margin(std::max(c->ci_a.margin_of_error, c->ci_b.margin_of_error)) : std::string("-");
    };
    const auto row = [&](const std::string &id) {
        const GlobalEstimate &ea = *a.find(id);
        const GlobalEstimate &eb = *b.find(id);
        const ComparisonResult *c = comparison_for(id);
        // Marked when neither model reaches the threshold.
        const bool below = !ea.propense && !eb.propense;
        return fmt::format("| {}{} | {} | {} | {} | {} | {} | {} / {} |\n", id, below ? " ▽" : "", name_of(id),
                           format_mean_std(ea.mean, ea.std), format_mean_std(eb.mean, eb.std), margin_of(id),
                           c ? fmt::format("{:.2f}", c->overlap) : std::string("-"), ea.propense ? "yes" : "no",
                           eb.propense ? "yes" : "no");
    };
    const std::string header = fmt::format(
        "| Code Smell | Name | {} PSC | {} PSC | ME - {:.0f}% | OVL | Propense |\n"
        "|---|---|---|---|---|---|---|\n",
        a.model_id, b.model_id, bundle.bootstrap.level * 100.0);

    std::string out;
    out += "# Code smell propensity report\n\n";
    out += fmt::format("- Models: {} vs {}\n", a.model_id, b.model_id);
    out += fmt::format("- Statistic: {}; propensity threshold λ = {:.2f}\n", to_string(bundle.statistic),
                       bundle.threshold);
    out += fmt::format("- Bootstrap: B = {}, {:.0f}% percentile intervals, seed {} ({})\n", bundle.bootstrap.b,
                       bundle.bootstrap.level * 100.0, bundle.bootstrap.seed, kRngAlgorithm);
    out += fmt::format("- Manifest: `{}`\n\n", bundle.manifest_digest);
    out += fmt::format("**{}: {}**\n\n", a.model_id, propense_headline(a));
    out += fmt::format("**{}: {}**\n\n", b.model_id, propense_headline(b));

    out += fmt::format("## Top-5 highest and Top-3 lowest smells by {} PSC (mean ± std)\n\n", a.model_id);
    out += header;
    const std::size_t n = a.ranking.size();
    const std::size_t top = std::min<std::size_t>(5, n);
    const std::size_t bottom = std::min<std::size_t>(3, n - top);
    for (std::size_t i = 0; i < top; ++i) out += row(a.ranking[i]);
    for (std::size_t i = n - bottom; i < n; ++i) out += row(a.ranking[i]);

    out += "\n## All smells\n\n";
    out += header;
    for (const auto &id : a.ranking) out += row(id);
    out += fmt::format("\n▽ marks smells below λ = {:.2f} for both models.\n", bundle.threshold);

    if (!bundle.diagnostics.counters.empty()) {
        out += "\n## Diagnostics\n\n";
        for (const auto &[key, value] : bundle.diagnostics.counters) out += fmt::format("- {}: {}\n", key, value);
    }
    return out;
}

std::string render_estimates_csv(const ReportBundle &bundle) {
    std::string out = "model_id,smell_id,mean,std,n,propense,threshold,ci_low,ci_high,margin_of_error\n";
    for (const ModelSummary *m : {&bundle.model_a, &bundle.model_b}) {
        const bool is_a = m == &bundle.model_a;
        for (const auto &e : m->estimates) {
            IntervalEstimate ci;
            bool have_ci = false;
            for (const auto &c : bundle.comparisons) {
                if (c.smell_id == e.smell_id) {
                    ci = is_a ? c.ci_a : c.ci_b;
                    have_ci = true;
                }
            }
            out += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", m->model_id, e.smell_id, full_precision(e.mean),
                               full_precision(e.std), e.n, e.propense ? "true" : "false",
                               full_precision(e.threshold), have_ci ? full_precision(ci.low) : "",
                               have_ci ? full_precision(ci.high) : "",
                               have_ci ? full_precision(ci.margin_of_error) : "");
        }
    }
    return out;
}

std::string render_boxplot_csv(const std::vector<BootstrapDistribution> &distributions, double threshold,
                               const BootstrapSettings &bootstrap) {
    std::string out = fmt::format("# threshold={}\n# rng={} seed={} b={} level={}\n", full_precision(threshold),
                                  kRngAlgorithm, bootstrap.seed, bootstrap.b, full_precision(bootstrap.level));
    out += "smell_id,model_id,resample_mean\n";
    for (const auto &d : distributions) {
        for (double v : d.resample_means) out += fmt::format("{},{},{}\n", d.smell_id, d.model_id, full_precision(v));
    }
    return out;
}

std::string render_scores_csv(const std::vector<std::pair<std::string, std::vector<PscScore>>> &by_model) {
    std::string out = "smell_id,model_id,method_id,psc\n";
    for (const auto &[model, scores] : by_model) {
        for (const auto &s : scores) {
            out += fmt::format("{},{},{},{}\n", s.smell_id, model, csv_quote(s.method_id), full_precision(s.value));
        }
    }
    return out;
}

}  // namespace smellprop
