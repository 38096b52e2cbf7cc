#include "smellprop/text.hpp"

#include <fmt/core.h>

#include "smellprop/error.hpp"

namespace smellprop {

namespace {

// Returns the number of bytes consumed, or 0 on an invalid sequence.
std::size_t decode_one(std::string_view text, std::size_t pos, char32_t &out) {
    const auto byte = [&](std::size_t i) { return static_cast<unsigned char>(text[i]); };
    const unsigned char lead = byte(pos);
    std::size_t len = 0;
    char32_t cp = 0;
    if (lead < 0x80) {
        out = lead;
        return 1;
    } else if ((lead & 0xE0) == 0xC0) {
        len = 2;
        cp = lead & 0x1F;
    } else if ((lead & 0xF0) == 0xE0) {
        len = 3;
        cp = lead & 0x0F;
    } else if ((lead & 0xF8) == 0xF0) {
        len = 4;
        cp = lead & 0x07;
    } else {
        return 0;
    }
    if (pos + len > text.size()) return 0;
    for (std::size_t i = 1; i < len; ++i) {
        const unsigned char c = byte(pos + i);
        if ((c & 0xC0) != 0x80) return 0;
        cp = (cp << 6) | (c & 0x3F);
    }
    // Reject overlong forms, surrogates and out-of-range values.
    static constexpr char32_t kMin[] = {0, 0, 0x80, 0x800, 0x10000};
    if (cp < kMin[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return 0;
    out = cp;
    return len;
}

}  // namespace

std::u32string decode_utf8(std::string_view text) {
    std::u32string out;
    out.reserve(text.size());
    std::size_t pos = 0;
    while (pos < text.size()) {
        char32_t cp = 0;
        const std::size_t n = decode_one(text, pos, cp);
        if (n == 0) {
            throw ParseError(fmt::format("invalid UTF-8 at byte offset {}", pos), pos);
        }
        out.push_back(cp);
        pos += n;
    }
    return out;
}

std::string encode_utf8(std::u32string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char32_t cp : text) {
        if (cp < 0x80) {
            out.push_back(static_cast<char>(cp));
        } else if (cp < 0x800) {
            out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else if (cp < 0x10000) {
            out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else {
            out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        }
    }
    return out;
}

std::size_t code_point_count(std::string_view text) {
    std::size_t count = 0;
    for (char c : text) {
        if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++count;
    }
    return count;
}

std::string utf8_slice(std::string_view text, CharSpan span) {
    const std::u32string decoded = decode_utf8(text);
    if (span.end > decoded.size() || span.begin > span.end) {
        throw DataError(fmt::format("slice [{}, {}) out of range for text of length {}",
                                    span.begin, span.end, decoded.size()));
    }
    return encode_utf8(std::u32string_view(decoded).substr(span.begin, span.size()));
}

LineIndex::LineIndex(std::string_view text) {
    const std::u32string decoded = decode_utf8(text);
    length_ = decoded.size();
    std::size_t start = 0;
    for (std::size_t i = 0; i < decoded.size(); ++i) {
        if (decoded[i] == U'\n') {
            line_starts_.push_back(start);
            line_lengths_.push_back(i - start);
            start = i + 1;
        }
    }
    line_starts_.push_back(start);
    line_lengths_.push_back(decoded.size() - start);
}

bool LineIndex::has_line(std::size_t line) const noexcept {
    return line >= 1 && line <= line_starts_.size();
}

std::size_t LineIndex::line_length(std::size_t line) const {
    if (!has_line(line)) throw DataError(fmt::format("no line {}", line));
    return line_lengths_[line - 1];
}

std::size_t LineIndex::offset(std::size_t line, std::size_t column) const {
    if (!has_line(line)) throw DataError(fmt::format("no line {}", line));
    if (column > line_lengths_[line - 1]) {
        throw DataError(fmt::format("column {} beyond length {} of line {}", column,
                                    line_lengths_[line - 1], line));
    }
    return line_starts_[line - 1] + column;
}

}  // namespace smellprop
