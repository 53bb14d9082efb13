#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace polyclone {

/// A contiguous range of lines in one file at one granularity value
/// (0 = whole file, larger = finer nested block).
struct CodeSegment {
    std::string file;
    std::uint32_t start_line = 1;
    std::uint32_t end_line = 1;
    std::uint32_t granularity = 0;

    [[nodiscard]] bool nests_in(const CodeSegment& outer) const noexcept {
        return file == outer.file && outer.start_line <= start_line && end_line <= outer.end_line;
    }

    friend auto operator<=>(const CodeSegment&, const CodeSegment&) = default;
};

/// Multiset of retained token texts, sorted by text, multiplicities > 0.
using TokenCounts = std::vector<std::pair<std::string, std::uint32_t>>;

struct TokenBag {
    CodeSegment segment;
    TokenCounts counts;
    std::uint32_t size = 0;  // sum of multiplicities

    friend bool operator==(const TokenBag&, const TokenBag&) = default;
};

/// Builds a bag from token texts; counts are sorted and size is filled in.
TokenBag make_bag(CodeSegment segment, const std::vector<std::string>& texts);

}  // namespace polyclone
