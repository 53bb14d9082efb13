#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "polyclone/language.hpp"

namespace polyclone {

struct PreprocessOptions {
    /// Collapse runs of two or more blank lines into one. Turn off to keep
    /// line numbers aligned with the original file.
    bool collapse_blank_lines = true;
};

struct PreprocessResult {
    std::string text;
    /// 1-based line where an unterminated block comment starts, if any.
    std::vector<std::size_t> unterminated_block_comments;
};

/// Removes comments per `rules`, leaving string literals untouched.
/// Lines that held only a comment become blank. Idempotent.
PreprocessResult preprocess(std::string_view source, const CommentRules& rules,
                            const PreprocessOptions& options = {});

inline std::string preprocess_text(std::string_view source, const LanguageConfig& cfg) {
    return preprocess(source, cfg.comments).text;
}

}  // namespace polyclone
