#include <doctest.h>

#include <random>

#include "smellprop/corpus.hpp"
#include "smellprop/error.hpp"
#include "smellprop/trace.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace smellprop;
using namespace smellprop::testing;

namespace {

const char *kTwoMethods =
    R"({"h":{"method_id":"a","model_id":"toy","vocab_size":10,"tokenizer_fingerprint":"x","token_count":3,"bos_present":true}}
{"t":{"index":0,"token_id":1,"span":[0,0],"prob":null,"logprob":null}}
{"t":{"index":1,"token_id":5,"span":[0,3],"prob":0.25,"logprob":-1.3862943611198906}}
{"t":{"index":2,"token_id":6,"span":[3,5],"prob":0.5}}
{"h":{"method_id":"b","model_id":"toy","vocab_size":10,"tokenizer_fingerprint":"x","token_count":1,"bos_present":false}}
{"t":{"index":0,"token_id":2,"span":[0,1],"prob":null}}
)";

std::string replace_once(std::string s, const std::string &from, const std::string &to) {
    const auto pos = s.find(from);
    REQUIRE(pos != std::string::npos);
    return s.replace(pos, from.size(), to);
}

}  // namespace

TEST_CASE("trace wire format parses") {
    const auto traces = parse_traces(kTwoMethods);
    REQUIRE(traces.size() == 2);
    CHECK(traces[0].header.method_id == "a");
    CHECK(traces[0].header.bos_present);
    CHECK(traces[0].content_token_count() == 2);
    CHECK(traces[0].tokens[0].synthetic());
    CHECK_FALSE(traces[0].tokens[0].prob);
    CHECK(*traces[0].tokens[2].prob == 0.5);
    CHECK(traces[1].content_token_count() == 1);

    const TraceSet set = index_traces(traces);
    CHECK(set.model_id == "toy");
    CHECK(set.by_method.size() == 2);
}

TEST_CASE("trace serialization round-trips") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 50; ++i) {
        TokenTrace t = random_tokenization(rng, 1 + rng() % 80);
        t.validate();
        const std::string once = serialize_trace(t);
        const auto back = parse_traces(once);
        REQUIRE(back.size() == 1);
        CHECK(serialize_trace(back[0]) == once);
    }
}

TEST_CASE("trace invariants are enforced") {
    const std::string good = kTwoMethods;
    CHECK_THROWS_AS(parse_traces(replace_once(good, "\"token_id\":5", "\"token_id\":10")), DataError);
    CHECK_THROWS_AS(parse_traces(replace_once(good, "\"span\":[3,5]", "\"span\":[2,5]")), DataError);
    CHECK_THROWS_AS(parse_traces(replace_once(good, "\"prob\":0.5", "\"prob\":1.5")), DataError);
    CHECK_THROWS_AS(parse_traces(replace_once(good, "\"prob\":0.5", "\"prob\":null")), DataError);
    CHECK_THROWS_AS(parse_traces(replace_once(good, "-1.3862943611198906", "-1.0")), DataError);
    CHECK_THROWS_AS(parse_traces(replace_once(good, "\"token_count\":3", "\"token_count\":4")), DataError);
    CHECK_THROWS_AS(parse_traces(replace_once(good, "\"index\":2", "\"index\":3")), DataError);
    CHECK_THROWS_AS(parse_traces(replace_once(good, "\"span\":[0,0],\"prob\":null", "\"span\":[0,0],\"prob\":0.1")),
                    DataError);
    CHECK_THROWS_AS(parse_traces(replace_once(good, "\"span\":[0,0]", "\"span\":[0,1]")), DataError);
    CHECK_THROWS_AS(parse_traces(replace_once(good, "\"vocab_size\":10", "\"vocab_size\":1")), DataError);
    CHECK_THROWS_AS(parse_traces("{\"t\":{\"index\":0}}\n"), DataError);
    CHECK_THROWS_AS(parse_traces("{\"x\":1}\n"), DataError);

    try {
        parse_traces(std::string(kTwoMethods) + "{oops\n");
        FAIL("expected ParseError");
    } catch (const ParseError &e) {
        CHECK(e.byte_offset() > std::string(kTwoMethods).size());
    }

    auto traces = parse_traces(kTwoMethods);
    CHECK_THROWS_AS(traces[0].validate(4), DataError);
    CHECK_NOTHROW(traces[0].validate(5));

    auto mixed = traces;
    mixed[1].header.model_id = "other";
    CHECK_THROWS_AS(index_traces(mixed), DataError);
    auto repeated = traces;
    repeated[1].header.method_id = "a";
    CHECK_THROWS_AS(index_traces(repeated), DataError);
}

TEST_CASE("token counts load from a map or a trace file") {
    TempDir dir("counts");
    write_text(dir.path() / "counts.json", R"({"m1": 400, "m2": 401})");
    const auto from_map = load_token_counts(dir.path() / "counts.json");
    CHECK(from_map.at("m1") == 400);
    CHECK(from_map.at("m2") == 401);

    write_text(dir.path() / "trace.jsonl", kTwoMethods);
    const auto from_trace = load_token_counts(dir.path() / "trace.jsonl");
    CHECK(from_trace.at("a") == 2);
    CHECK(from_trace.at("b") == 1);

    CHECK_THROWS_AS(load_token_counts(dir.path() / "missing.json"), Error);
}
