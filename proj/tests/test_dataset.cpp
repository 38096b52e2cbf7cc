#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <tuple>

#include "smellprop/dataset.hpp"
#include "smellprop/manifest_io.hpp"
#include "support/fixtures.hpp"

using namespace smellprop;
using smellprop::testing::pylint_message;

namespace {

// Independent oracle: walk the text one code point at a time tracking
// (line, column) and return the offset where the target position is reached.
std::optional<std::size_t> scan_offset(const std::string &text, std::size_t line, std::size_t col) {
    const std::u32string chars = decode_utf8(text);
    std::size_t cur_line = 1;
    std::size_t cur_col = 0;
    for (std::size_t i = 0; i <= chars.size(); ++i) {
        if (cur_line == line && cur_col == col) return i;
        if (i == chars.size()) break;
        if (chars[i] == U'\n') {
            ++cur_line;
            cur_col = 0;
        } else {
            ++cur_col;
        }
    }
    return std::nullopt;
}

// Independent oracle for the two-sided normal quantile: bisection on erfc.
double z_by_bisection(double confidence) {
    const double target = 1.0 - (1.0 - confidence) / 2.0;
    double lo = 0.0;
    double hi = 10.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = (lo + hi) / 2.0;
        const double cdf = 0.5 * std::erfc(-mid / std::sqrt(2.0));
        (cdf < target ? lo : hi) = mid;
    }
    return (lo + hi) / 2.0;
}

std::size_t sample_size_oracle(std::size_t population, double confidence, double margin) {
    const double z = z_by_bisection(confidence);
    const double n0 = z * z * 0.25 / (margin * margin);
    const double n = n0 / (1.0 + (n0 - 1.0) / static_cast<double>(population));
    return std::min<std::size_t>(static_cast<std::size_t>(std::ceil(n)), population);
}

SmellInstance instance(const std::string &method, const std::string &smell_id) {
    SmellInstance inst;
    inst.method_id = method;
    inst.smell = default_taxonomy().at(smell_id);
    inst.location = {1, 0, 1, 1};
    inst.char_span = {0, 1};
    return inst;
}

}  // namespace

TEST_CASE("taxonomy invariants") {
    CHECK(default_taxonomy().size() == 13);
    CHECK(default_taxonomy().find("invalid-name")->id == "C0103");
    CHECK(default_taxonomy().find("R1716")->name == "chained-comparison");
    CHECK_THROWS_AS(SmellTaxonomy({{"R0103", "invalid-name", SmellCategory::kConvention}}), ConfigError);
    CHECK_THROWS_AS(SmellTaxonomy({{"C103", "x", SmellCategory::kConvention}}), ConfigError);
    CHECK_THROWS_AS(SmellTaxonomy({{"C0103", "a", SmellCategory::kConvention},
                                   {"C0103", "b", SmellCategory::kConvention}}),
                    ConfigError);
    CHECK_THROWS_AS(SmellTaxonomy(std::vector<SmellType>{}), ConfigError);
    CHECK(taxonomy_from_json(to_json(default_taxonomy())) == default_taxonomy());
}

TEST_CASE("parse_pylint_report") {
    const SmellTaxonomy &tax = default_taxonomy();
    Diagnostics diag;

    SUBCASE("single in-taxonomy message maps its fields") {
        const nlohmann::json report = {pylint_message("C0103", "invalid-name", 1, 4, 1, 5)};
        const auto smells = parse_pylint_report(report.dump(), tax, "m1", diag);
        REQUIRE(smells.size() == 1);
        CHECK(smells[0].smell.id == "C0103");
        CHECK(smells[0].method_id == "m1");
        CHECK(smells[0].location == SourceLocation{1, 4, 1, 5});
        CHECK_FALSE(smells[0].to_line_end);
    }

    SUBCASE("message outside the taxonomy is skipped and tallied") {
        const SmellTaxonomy only_r({{"R1716", "chained-comparison", SmellCategory::kRefactor}});
        const nlohmann::json report = {pylint_message("C0103", "invalid-name", 1, 4, 1, 5)};
        CHECK(parse_pylint_report(report.dump(), only_r, "m1", diag).empty());
        CHECK(diag.get("skipped") == 1);
        CHECK(diag.get("skipped:C0103") == 1);
    }

    SUBCASE("3 in-taxonomy and 2 out-of-taxonomy messages keep order") {
        const nlohmann::json report = {
            pylint_message("W0612", "unused-variable", 2, 4, 2, 5),
            pylint_message("R1716", "chained-comparison", 2, 7, 2, 20),
            pylint_message("C0114", "missing-module-docstring", 1, 0, 1, 1),
            pylint_message("", "invalid-name", 1, 4, 1, 5),
            pylint_message("W0718", "broad-exception-caught", 4, 11, 4, 20),
        };
        const auto smells = parse_pylint_report(report.dump(), tax, "m", diag);
        REQUIRE(smells.size() == 3);
        CHECK(smells[0].smell.id == "R1716");
        CHECK(smells[1].smell.id == "C0103");  // matched by symbol
        CHECK(smells[2].smell.id == "W0718");
        CHECK(diag.get("skipped") == 2);
    }

    SUBCASE("missing end position degrades to end of line") {
        const nlohmann::json report = {pylint_message("R0913", "too-many-arguments", 1, 0, std::nullopt, std::nullopt)};
        const auto smells = parse_pylint_report(report.dump(), tax, "m", diag);
        REQUIRE(smells.size() == 1);
        CHECK(smells[0].to_line_end);
        CHECK(diag.get("degraded-location:R0913") == 1);

        const MethodRecord method = MethodRecord::make("m", "def f(a, b, c, d, e, f):\n    pass\n", "m.py");
        const SmellInstance inst = resolve_instance(smells[0], method);
        CHECK(inst.degraded);
        CHECK(inst.location.end_col == 24);
        CHECK(inst.char_span == CharSpan{0, 24});
    }

    SUBCASE("malformed JSON names the byte offset") {
        try {
            parse_pylint_report("[{\"message-id\": \"C0103\",}", tax, "m", diag);
            FAIL("expected ParseError");
        } catch (const ParseError &e) {
            CHECK(e.byte_offset() == 25);
        }
        CHECK_THROWS_AS(parse_pylint_report("{\"a\": 1}", tax, "m", diag), ParseError);
    }

    SUBCASE("empty report") {
        CHECK(parse_pylint_report("[]", tax, "m", diag).empty());
        CHECK(parse_pylint_report("", tax, "m", diag).empty());
    }
}

TEST_CASE("resolve_char_span examples") {
    CHECK(resolve_char_span("def f():\n    x = 1\n", {2, 4, 2, 9}) == CharSpan{13, 18});
    CHECK(resolve_char_span("x", {1, 0, 1, 1}) == CharSpan{0, 1});
    CHECK_THROWS_AS(resolve_char_span("x", {2, 0, 2, 1}), LocationError);
    CHECK_THROWS_AS(resolve_char_span("x", {1, 0, 1, 2}), LocationError);
    CHECK_THROWS_AS(resolve_char_span("xy", {1, 1, 1, 1}), LocationError);
    try {
        resolve_char_span("x", {1, 1, 1, 0});
        FAIL("expected LocationError");
    } catch (const LocationError &e) {
        CHECK(e.location() == SourceLocation{1, 1, 1, 0});
    }
    // Non-ASCII characters count once.
    CHECK(resolve_char_span("é = 1\nnaïve = é\n", {2, 8, 2, 9}) == CharSpan{14, 15});
}

TEST_CASE("resolve_char_span agrees with a character scanner and is monotone") {
    std::mt19937_64 rng(11);
    const std::vector<std::string> alphabet = {"a", "b", " ", "\t", "\n", "é", "中", "(", ")"};
    for (int trial = 0; trial < 300; ++trial) {
        std::string text;
        const int len = 1 + static_cast<int>(rng() % 60);
        for (int i = 0; i < len; ++i) text += alphabet[rng() % alphabet.size()];
        const LineIndex index(text);

        std::vector<std::pair<SourceLocation, CharSpan>> resolved;
        for (int q = 0; q < 20; ++q) {
            const std::size_t l1 = 1 + rng() % index.line_count();
            const std::size_t l2 = l1 + rng() % (index.line_count() - l1 + 1);
            const std::size_t c1 = rng() % (index.line_length(l1) + 1);
            const std::size_t c2 = rng() % (index.line_length(l2) + 1);
            const SourceLocation loc{l1, c1, l2, c2};
            const auto a = scan_offset(text, l1, c1);
            const auto b = scan_offset(text, l2, c2);
            REQUIRE(a);
            REQUIRE(b);
            if (*b <= *a) {
                CHECK_THROWS_AS(resolve_char_span(text, loc), LocationError);
                continue;
            }
            const CharSpan span = resolve_char_span(text, loc);
            CHECK(span == CharSpan{*a, *b});
            resolved.emplace_back(loc, span);
        }
        for (const auto &[la, sa] : resolved) {
            for (const auto &[lb, sb] : resolved) {
                if (std::tie(la.start_line, la.start_col) < std::tie(lb.start_line, lb.start_col)) {
                    CHECK(sa.begin < sb.begin);
                }
            }
        }
    }
}

TEST_CASE("deduplicate_methods") {
    const MethodRecord m1 = MethodRecord::make("m1", "def a(): pass\n", "a.py");
    const MethodRecord m2 = MethodRecord::make("m2", "def b(): pass\n", "b.py");

    SUBCASE("rarer smell wins a conflicted method") {
        // C0103 is far more common than R1716 in the input set.
        std::vector<SmellInstance> instances;
        std::vector<MethodRecord> methods = {m1};
        for (int i = 0; i < 5; ++i) {
            const auto m = MethodRecord::make("c" + std::to_string(i), "x" + std::to_string(i), "c.py");
            methods.push_back(m);
            instances.push_back(instance(m.method_id, "C0103"));
        }
        instances.push_back(instance("m1", "C0103"));
        instances.push_back(instance("m1", "R1716"));
        const auto out = deduplicate_methods(instances, methods);
        std::vector<std::string> m1_smells;
        for (const auto &inst : out) {
            if (inst.method_id == "m1") m1_smells.push_back(inst.smell.id);
        }
        CHECK(m1_smells == std::vector<std::string>{"R1716"});
        CHECK(out.size() == 6);
    }

    SUBCASE("equal counts tie-break on smell id") {
        const auto out = deduplicate_methods({instance("m1", "W0718"), instance("m1", "R0913")}, {m1});
        REQUIRE(out.size() == 1);
        CHECK(out[0].smell.id == "R0913");
    }

    SUBCASE("distinct methods with one smell each are kept") {
        const auto out = deduplicate_methods({instance("m1", "C0103"), instance("m2", "R1716")}, {m1, m2});
        CHECK(out.size() == 2);
    }

    SUBCASE("identical source under two ids keeps one") {
        const MethodRecord twin = MethodRecord::make("m1-copy", m1.source_text, "copy.py");
        CHECK(twin.content_hash == m1.content_hash);
        const auto out = deduplicate_methods({instance("m1", "C0103"), instance("m1-copy", "R1716")}, {m1, twin});
        REQUIRE(out.size() == 1);
        CHECK(out[0].method_id == "m1");
        CHECK(out[0].smell.id == "C0103");  // tie on count, smaller id
    }

    SUBCASE("several instances of the winning smell on one method survive") {
        const auto out = deduplicate_methods({instance("m1", "C0103"), instance("m1", "C0103")}, {m1});
        CHECK(out.size() == 2);
    }
}

TEST_CASE("filter_by_token_budget") {
    SUBCASE("boundary is inclusive") {
        const auto out = filter_by_token_budget({instance("m1", "C0103"), instance("m2", "C0103")},
                                                {{"m1", 400}, {"m2", 401}}, 400);
        REQUIRE(out.size() == 1);
        CHECK(out[0].method_id == "m1");
    }
    SUBCASE("zero means no limit") {
        const auto out = filter_by_token_budget({instance("m1", "C0103")}, {}, 0);
        CHECK(out.size() == 1);
    }
    SUBCASE("counts 100..1000 step 100 with max 400 keep four") {
        std::vector<SmellInstance> instances;
        std::map<std::string, std::size_t> counts;
        for (int i = 1; i <= 10; ++i) {
            instances.push_back(instance("m" + std::to_string(i), "C0103"));
            counts["m" + std::to_string(i)] = static_cast<std::size_t>(100 * i);
        }
        CHECK(filter_by_token_budget(instances, counts, 400).size() == 4);
    }
    SUBCASE("missing count names the method") {
        CHECK_THROWS_WITH_AS(filter_by_token_budget({instance("m9", "C0103")}, {}, 400),
                             doctest::Contains("m9"), DataError);
    }
}

namespace {

struct SamplingFixture {
    std::vector<SmellInstance> instances;
    std::vector<MethodRecord> methods;

    void add(const std::string &smell_id, int count) {
        for (int i = 0; i < count; ++i) {
            const auto m = MethodRecord::make(smell_id + "-" + std::to_string(i),
                                              "def f" + std::to_string(i) + "(): pass\n", smell_id + ".py");
            methods.push_back(m);
            SmellInstance inst = instance(m.method_id, smell_id);
            instances.push_back(inst);
        }
    }
};

}  // namespace

TEST_CASE("sample_per_smell") {
    SamplingFixture fx;
    fx.add("C0104", 99);
    fx.add("R1701", 100);
    fx.add("R1716", 128);
    CurationConfig config;
    config.seed = 42;
    Diagnostics diag;
    const DatasetManifest manifest = sample_per_smell(fx.instances, fx.methods, default_taxonomy(), config, &diag);

    std::map<std::string, std::size_t> counts;
    std::set<std::string> r1701;
    for (const auto &inst : manifest.instances) {
        ++counts[inst.smell.id];
        if (inst.smell.id == "R1701") r1701.insert(inst.method_id);
    }
    CHECK(counts.count("C0104") == 0);
    CHECK(diag.get("dropped-type:C0104") == 99);
    CHECK(counts["R1701"] == 100);
    CHECK(r1701.size() == 100);
    CHECK(counts["R1716"] == 100);
    CHECK(manifest.methods.size() == 200);

    SUBCASE("identical seed gives identical selection") {
        const auto again = sample_per_smell(fx.instances, fx.methods, default_taxonomy(), config);
        CHECK(serialize_manifest(again) == serialize_manifest(manifest));
    }
    SUBCASE("another seed changes the R1716 selection but not R1701") {
        CurationConfig other = config;
        other.seed = 43;
        const auto b = sample_per_smell(fx.instances, fx.methods, default_taxonomy(), other);
        std::set<std::string> a_r1716;
        std::set<std::string> b_r1716;
        std::set<std::string> b_r1701;
        for (const auto &i : manifest.instances) {
            if (i.smell.id == "R1716") a_r1716.insert(i.method_id);
        }
        for (const auto &i : b.instances) {
            if (i.smell.id == "R1716") b_r1716.insert(i.method_id);
            if (i.smell.id == "R1701") b_r1701.insert(i.method_id);
        }
        CHECK(a_r1716 != b_r1716);
        CHECK(b_r1701 == r1701);
    }
    SUBCASE("sampling never exceeds availability") {
        CurationConfig big = config;
        big.sample_per_smell = 500;
        const auto all = sample_per_smell(fx.instances, fx.methods, default_taxonomy(), big);
        CHECK(all.instances.size() == 228);
    }
    SUBCASE("degraded types can be dropped") {
        SamplingFixture degraded = fx;
        degraded.instances.back().degraded = true;  // an R1716 instance
        CurationConfig drop = config;
        drop.drop_degraded_types = true;
        Diagnostics d;
        const auto out = sample_per_smell(degraded.instances, degraded.methods, default_taxonomy(), drop, &d);
        CHECK(out.instances.size() == 100);
        CHECK(d.get("dropped-type:R1716") == 128);
    }
}

TEST_CASE("validation_sample_size") {
    CHECK(validation_sample_size(132, 0.80, 0.15) == 17);
    CHECK(validation_sample_size(1, 0.80, 0.15) == 1);
    CHECK(validation_sample_size(1000000000, 0.80, 0.15) == 19);
    CHECK(z_by_bisection(0.80) == doctest::Approx(1.2815515655446004).epsilon(1e-12));

    for (std::size_t n : {125815u, 1089u, 666u, 583u, 174u, 4738u, 1273u, 289u, 132u, 128u, 4384u, 3150u, 396u}) {
        CHECK(validation_sample_size(n, 0.80, 0.15) == sample_size_oracle(n, 0.80, 0.15));
    }

    SUBCASE("monotone in population and margin") {
        std::size_t prev = 0;
        for (std::size_t n = 1; n < 3000; n += 7) {
            const std::size_t s = validation_sample_size(n, 0.95, 0.05);
            CHECK(s >= prev);
            prev = s;
        }
        std::size_t prev_m = std::numeric_limits<std::size_t>::max();
        for (double e = 0.01; e < 0.5; e += 0.01) {
            const std::size_t s = validation_sample_size(5000, 0.90, e);
            CHECK(s <= prev_m);
            prev_m = s;
        }
    }

    CHECK_THROWS_AS(validation_sample_size(0, 0.8, 0.15), ConfigError);
    CHECK_THROWS_AS(validation_sample_size(10, 1.0, 0.15), ConfigError);
    CHECK_THROWS_AS(validation_sample_size(10, 0.8, 0.0), ConfigError);
}

TEST_CASE("manifest serialization is stable and validated") {
    SamplingFixture fx;
    fx.add("R1716", 3);
    CurationConfig config;
    config.min_instances = 1;
    config.sample_per_smell = 2;
    config.seed = 5;
    DatasetManifest manifest = sample_per_smell(fx.instances, fx.methods, default_taxonomy(), config);
    for (auto &inst : manifest.instances) {
        const auto *m = manifest.find_method(inst.method_id);
        inst.location = {1, 4, 1, 6};
        inst.char_span = resolve_char_span(m->source_text, inst.location);
    }
    manifest.validate();

    const std::string once = serialize_manifest(manifest);
    const std::string twice = serialize_manifest(parse_manifest(once));
    CHECK(once == twice);
    CHECK(once.back() == '\n');
    CHECK(once.find('\r') == std::string::npos);

    SUBCASE("tampered span is rejected") {
        std::string bad = once;
        const auto pos = bad.find("\"char_span\":[4,6]");
        REQUIRE(pos != std::string::npos);
        bad.replace(pos, 17, "\"char_span\":[4,7]");
        CHECK_THROWS_AS(parse_manifest(bad), DataError);
    }
    SUBCASE("tampered source is rejected") {
        std::string bad = once;
        const auto pos = bad.find("pass");
        bad.replace(pos, 4, "PASS");
        CHECK_THROWS_AS(parse_manifest(bad), DataError);
    }
    SUBCASE("a method under two smells is rejected") {
        DatasetManifest twice_used = manifest;
        SmellInstance extra = twice_used.instances.front();
        extra.smell = default_taxonomy().at("C0103");
        twice_used.instances.push_back(extra);
        CHECK_THROWS_AS(twice_used.validate(), DataError);
    }
}
