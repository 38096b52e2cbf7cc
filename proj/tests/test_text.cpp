#include <doctest.h>

#include "smellprop/error.hpp"
#include "smellprop/text.hpp"

using namespace smellprop;

TEST_CASE("utf8 decoding counts scalar values") {
    CHECK(code_point_count("abc") == 3);
    CHECK(code_point_count("naïve") == 5);
    CHECK(decode_utf8("xé中\U0001F600").size() == 4);
    CHECK(encode_utf8(decode_utf8("xé中\U0001F600")) == "xé中\U0001F600");
    CHECK(utf8_slice("déf g", {1, 3}) == "éf");
}

TEST_CASE("invalid utf8 reports the byte offset") {
    const std::string bad = std::string("ab") + char(0xC3) + "(";
    try {
        decode_utf8(bad);
        FAIL("expected ParseError");
    } catch (const ParseError &e) {
        CHECK(e.byte_offset() == 2);
    }
    CHECK_THROWS_AS(decode_utf8(std::string("\xED\xA0\x80")), ParseError);  // surrogate
    CHECK_THROWS_AS(decode_utf8(std::string("\xC0\xAF")), ParseError);      // overlong
}

TEST_CASE("line index") {
    const LineIndex index("def f():\n\tx = 1\n");
    CHECK(index.line_count() == 3);
    CHECK(index.line_length(1) == 8);
    CHECK(index.line_length(2) == 6);  // tab is one character
    CHECK(index.line_length(3) == 0);
    CHECK(index.offset(2, 1) == 10);
    CHECK_FALSE(index.has_line(4));
    CHECK_THROWS_AS(index.offset(2, 7), DataError);
}

TEST_CASE("char span overlap is half-open") {
    CHECK(CharSpan{0, 4}.overlaps({3, 8}));
    CHECK_FALSE(CharSpan{0, 4}.overlaps({4, 8}));
    CHECK_FALSE(CharSpan{4, 4}.overlaps({0, 8}));
}
