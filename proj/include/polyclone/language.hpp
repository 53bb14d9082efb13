#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace polyclone {

struct BlockComment {
    std::string open;
    std::string close;

    friend bool operator==(const BlockComment&, const BlockComment&) = default;
};

/// Declarative comment-stripping rules for one language.
struct CommentRules {
    std::vector<std::string> line_comment;
    std::vector<BlockComment> block_comment;
    /// String-literal delimiters whose contents are protected from stripping.
    std::vector<std::string> string_delimiters;

    friend bool operator==(const CommentRules&, const CommentRules&) = default;
};

/// Everything the pipeline needs to know about one source language.
/// Immutable after load; safe to share across threads.
struct LanguageConfig {
    std::string language_id;
    /// Adapter identifier, e.g. "tree-sitter:java" or "lexical".
    std::string grammar_ref;
    std::set<std::string, std::less<>> keywords;
    std::vector<std::string> file_extensions;
    CommentRules comments;

    [[nodiscard]] bool is_keyword(std::string_view text) const {
        return keywords.find(text) != keywords.end();
    }
    [[nodiscard]] bool matches_extension(const std::filesystem::path& file) const;
};

/// Loads and validates a JSON language config. Unknown keys are rejected.
/// `keywords` may be an inline array or a path (relative to the config file)
/// to a plain-text list with one keyword per line.
LanguageConfig load_language_config(const std::filesystem::path& path);

/// Same as load_language_config, from already-read text.
LanguageConfig parse_language_config(std::string_view text,
                                     const std::filesystem::path& base_dir = {});

struct LanguageEntry {
    std::filesystem::path path;
    std::optional<LanguageConfig> config;
    std::string error;  // set when config is absent
};

/// Scans a directory for *.json language configs, sorted by file name.
/// Malformed files are returned with an error instead of throwing.
std::vector<LanguageEntry> scan_language_dir(const std::filesystem::path& dir);

/// The directory holding language configs: $POLYCLONE_LANG_DIR if set,
/// otherwise the configs shipped with the source tree.
std::filesystem::path default_language_dir();

/// Finds the config with the given languageId in dir.
LanguageConfig find_language(const std::filesystem::path& dir, std::string_view language_id);

}  // namespace polyclone
