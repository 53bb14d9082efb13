#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace polyclone {

enum class TokenCategory : std::uint8_t { Keyword, Identifier, Literal, Other };

std::string_view to_string(TokenCategory category) noexcept;

/// A categorized lexical unit with its 1-based source position.
struct Token {
    TokenCategory category = TokenCategory::Other;
    std::string text;
    std::uint32_t line = 1;
    std::uint32_t col = 1;

    /// Line holding the token's last character (multi-line literals span lines).
    [[nodiscard]] std::uint32_t last_line() const noexcept;

    /// Keywords, identifiers and literals go into token bags; OTHER never does.
    [[nodiscard]] bool retained() const noexcept { return category != TokenCategory::Other; }

    friend bool operator==(const Token&, const Token&) = default;
};

/// Half-open index range [begin, end) into a file's token sequence.
struct TokenSpan {
    std::size_t begin = 0;
    std::size_t end = 0;

    [[nodiscard]] std::size_t length() const noexcept { return end - begin; }
    [[nodiscard]] bool contains(const TokenSpan& other) const noexcept {
        return begin <= other.begin && other.end <= end;
    }

    friend bool operator==(const TokenSpan&, const TokenSpan&) = default;
};

}  // namespace polyclone
