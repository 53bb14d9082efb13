#include "polyclone/preprocess.hpp"

#include <algorithm>
#include <cctype>

namespace polyclone {

namespace {

bool starts_with_at(std::string_view text, std::size_t pos, std::string_view prefix) noexcept {
    return !prefix.empty() && text.compare(pos, prefix.size(), prefix) == 0;
}

bool is_blank_char(char c) noexcept { return c == ' ' || c == '\t' || c == '\r'; }

void trim_trailing_blanks(std::string& out) {
    while (!out.empty() && (out.back() == ' ' || out.back() == '\t')) out.pop_back();
}

bool is_blank_line(std::string_view line) noexcept {
    return std::all_of(line.begin(), line.end(), is_blank_char);
}

std::string collapse_blank_lines(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    const bool trailing_newline = !text.empty() && text.back() == '\n';
    if (trailing_newline) text.remove_suffix(1);

    std::size_t blank_run = 0;
    std::string_view pending_blank;
    bool first = true;
    auto emit = [&](std::string_view line) {
        if (!first) out.push_back('\n');
        out.append(line);
        first = false;
    };
    auto flush_blanks = [&] {
        if (blank_run == 1) emit(pending_blank);
        else if (blank_run >= 2) emit({});
        blank_run = 0;
    };

    std::size_t pos = 0;
    while (true) {
        const auto nl = text.find('\n', pos);
        const auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        if (is_blank_line(line)) {
            if (blank_run++ == 0) pending_blank = line;
        } else {
            flush_blanks();
            emit(line);
        }
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    flush_blanks();
    if (trailing_newline) out.push_back('\n');
    return out;
}

}  // namespace

PreprocessResult preprocess(std::string_view src, const CommentRules& rules,
                            const PreprocessOptions& options) {
    auto delimiters = rules.string_delimiters;
    std::sort(delimiters.begin(), delimiters.end(),
              [](const auto& a, const auto& b) { return a.size() > b.size(); });

    PreprocessResult result;
    std::string& out = result.text;
    out.reserve(src.size());
    std::size_t line = 1;
    std::size_t i = 0;
    const std::size_t n = src.size();

    auto match_delimiter = [&](std::size_t pos) -> std::string_view {
        for (const auto& d : delimiters)
            if (starts_with_at(src, pos, d)) return d;
        return {};
    };

    while (i < n) {
        if (auto delim = match_delimiter(i); !delim.empty()) {
            std::size_t j = i + delim.size();
            const bool multiline = delim.size() >= 3;
            while (j < n) {
                if (src[j] == '\\') {
                    j += 2;
                    continue;
                }
                if (starts_with_at(src, j, delim)) {
                    j += delim.size();
                    break;
                }
                if (src[j] == '\n' && !multiline) break;
                ++j;
            }
            j = std::min(j, n);
            const auto literal = src.substr(i, j - i);
            line += static_cast<std::size_t>(std::count(literal.begin(), literal.end(), '\n'));
            out.append(literal);
            i = j;
            continue;
        }

        const bool line_comment = std::any_of(rules.line_comment.begin(), rules.line_comment.end(),
                                              [&](const auto& p) { return starts_with_at(src, i, p); });
        if (line_comment) {
            const auto nl = src.find('\n', i);
            trim_trailing_blanks(out);
            i = nl == std::string_view::npos ? n : nl;
            continue;
        }

        const auto block = std::find_if(rules.block_comment.begin(), rules.block_comment.end(),
                                        [&](const auto& b) { return starts_with_at(src, i, b.open); });
        if (block != rules.block_comment.end()) {
            const auto close = src.find(block->close, i + block->open.size());
            std::size_t j = n;
            if (close == std::string_view::npos) {
                result.unterminated_block_comments.push_back(line);
            } else {
                j = close + block->close.size();
            }
            const auto comment = src.substr(i, j - i);
            const auto newlines = static_cast<std::size_t>(std::count(comment.begin(), comment.end(), '\n'));
            const bool ends_line = j >= n || src[j] == '\n' || src[j] == '\r';
            if (newlines == 0) {
                if (!out.empty() && !std::isspace(static_cast<unsigned char>(out.back())) && !ends_line &&
                    !std::isspace(static_cast<unsigned char>(src[j])))
                    out.push_back(' ');
            } else {
                trim_trailing_blanks(out);
                out.append(newlines, '\n');
                line += newlines;
            }
            if (ends_line) trim_trailing_blanks(out);
            i = j;
            continue;
        }

        if (src[i] == '\n') ++line;
        out.push_back(src[i]);
        ++i;
    }

    if (options.collapse_blank_lines) out = collapse_blank_lines(out);
    return result;
}

}  // namespace polyclone
