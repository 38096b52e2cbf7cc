#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace smellprop {

// Half-open [begin, end) range of character (Unicode scalar value) offsets.
struct CharSpan {
    std::size_t begin = 0;
    std::size_t end = 0;

    bool empty() const noexcept { return end <= begin; }
    std::size_t size() const noexcept { return empty() ? 0 : end - begin; }
    bool overlaps(const CharSpan &other) const noexcept {
        return !empty() && !other.empty() && begin < other.end && other.begin < end;
    }
    friend bool operator==(const CharSpan &, const CharSpan &) = default;
    friend auto operator<=>(const CharSpan &, const CharSpan &) = default;
};

// Decodes UTF-8; throws DataError naming the byte offset of the first bad sequence.
std::u32string decode_utf8(std::string_view text);
std::string encode_utf8(std::u32string_view text);

std::size_t code_point_count(std::string_view text);

// Substring by code point offsets.
std::string utf8_slice(std::string_view text, CharSpan span);

// Maps (1-based line, 0-based column) positions to character offsets.
// Lines are split on '\n'; columns count code points within the line.
class LineIndex {
public:
    explicit LineIndex(std::string_view text);

    std::size_t line_count() const noexcept { return line_starts_.size(); }
    std::size_t text_length() const noexcept { return length_; }

    bool has_line(std::size_t line) const noexcept;
    std::size_t line_length(std::size_t line) const;
    // Throws DataError when the line is missing or the column exceeds its length.
    std::size_t offset(std::size_t line, std::size_t column) const;

private:
    std::vector<std::size_t> line_starts_;
    std::vector<std::size_t> line_lengths_;
    std::size_t length_ = 0;
};

}  // namespace smellprop
