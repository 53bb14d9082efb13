#include <algorithm>
#include <cctype>
#include <cstdint>

#include "polyclone/error.hpp"
#include "polyclone/frontend.hpp"

namespace polyclone {

namespace {

bool valid_utf8(std::string_view text) noexcept {
    const auto* p = reinterpret_cast<const unsigned char*>(text.data());
    const auto* end = p + text.size();
    while (p < end) {
        const unsigned char c = *p;
        if (c < 0x80) {
            ++p;
            continue;
        }
        int extra = 0;
        std::uint32_t cp = 0;
        if ((c & 0xE0) == 0xC0) {
            extra = 1;
            cp = c & 0x1F;
        } else if ((c & 0xF0) == 0xE0) {
            extra = 2;
            cp = c & 0x0F;
        } else if ((c & 0xF8) == 0xF0) {
            extra = 3;
            cp = c & 0x07;
        } else {
            return false;
        }
        if (end - p <= extra) return false;
        for (int k = 1; k <= extra; ++k) {
            if ((p[k] & 0xC0) != 0x80) return false;
            cp = (cp << 6) | (p[k] & 0x3F);
        }
        static constexpr std::uint32_t kMin[] = {0, 0x80, 0x800, 0x10000};
        if (cp < kMin[extra] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return false;
        p += extra + 1;
    }
    return true;
}

bool ident_start(unsigned char c) noexcept {
    return std::isalpha(c) || c == '_' || c == '$' || c >= 0x80;
}
bool ident_char(unsigned char c) noexcept { return ident_start(c) || std::isdigit(c); }

}  // namespace

std::uint32_t count_lines(std::string_view text) noexcept {
    if (text.empty()) return 0;
    auto lines = static_cast<std::uint32_t>(std::count(text.begin(), text.end(), '\n'));
    if (text.back() != '\n') ++lines;
    return lines;
}

std::string_view validate_source(std::string_view raw) {
    if (raw.size() >= 3 && raw.substr(0, 3) == "\xEF\xBB\xBF") raw.remove_prefix(3);
    if (raw.find('\0') != std::string_view::npos) {
        throw Error(ErrorCode::LexFailure, "binary content (NUL byte)");
    }
    if (!valid_utf8(raw)) throw Error(ErrorCode::LexFailure, "input is not valid UTF-8");
    return raw;
}

std::vector<Token> lex_generic(std::string_view src, const LanguageConfig& cfg) {
    auto delimiters = cfg.comments.string_delimiters;
    std::sort(delimiters.begin(), delimiters.end(),
              [](const auto& a, const auto& b) { return a.size() > b.size(); });

    std::vector<Token> tokens;
    std::uint32_t line = 1;
    std::uint32_t col = 1;
    std::size_t i = 0;
    const std::size_t n = src.size();

    auto advance_to = [&](std::size_t j) {
        for (; i < j; ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    auto emit = [&](TokenCategory category, std::size_t j) {
        tokens.push_back(Token{category, std::string(src.substr(i, j - i)), line, col});
        advance_to(j);
    };

    while (i < n) {
        const auto c = static_cast<unsigned char>(src[i]);
        if (std::isspace(c)) {
            advance_to(i + 1);
            continue;
        }

        std::string_view delim;
        for (const auto& d : delimiters) {
            if (src.compare(i, d.size(), d) == 0) {
                delim = d;
                break;
            }
        }
        if (!delim.empty()) {
            std::size_t j = i + delim.size();
            while (j < n) {
                if (src[j] == '\\') {
                    j += 2;
                    continue;
                }
                if (src.compare(j, delim.size(), delim) == 0) {
                    j += delim.size();
                    break;
                }
                if (src[j] == '\n' && delim.size() < 3) break;
                ++j;
            }
            emit(TokenCategory::Literal, std::min(j, n));
            continue;
        }

        if (std::isdigit(c) || (c == '.' && i + 1 < n && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
            std::size_t j = i + 1;
            while (j < n) {
                const auto d = static_cast<unsigned char>(src[j]);
                if (std::isalnum(d) || d == '_' || d == '.') {
                    ++j;
                } else if ((d == '+' || d == '-') && (src[j - 1] == 'e' || src[j - 1] == 'E')) {
                    ++j;
                } else {
                    break;
                }
            }
            emit(TokenCategory::Literal, j);
            continue;
        }

        if (ident_start(c)) {
            std::size_t j = i + 1;
            while (j < n && ident_char(static_cast<unsigned char>(src[j]))) ++j;
            const auto word = src.substr(i, j - i);
            emit(cfg.is_keyword(word) ? TokenCategory::Keyword : TokenCategory::Identifier, j);
            continue;
        }

        emit(cfg.is_keyword(src.substr(i, 1)) ? TokenCategory::Keyword : TokenCategory::Other, i + 1);
    }
    return tokens;
}

}  // namespace polyclone
