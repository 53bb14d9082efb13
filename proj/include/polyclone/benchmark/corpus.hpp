#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "polyclone/language.hpp"

namespace polyclone::bench {

/// Minimums a benchmark file must meet, and the clone matcher's line coverage.
struct MatchConfig {
    double coverage = 0.7;
    std::size_t min_tokens = 20;
    std::size_t min_lines = 6;
};

/// One accepted submission, preprocessed and tokenized.
struct Submission {
    std::string problem_id;
    std::string submission_id;
    std::filesystem::path file;    // original location
    std::string extension;         // including the dot
    std::string text;              // preprocessed source
    std::vector<std::string> token_seq;  // identifier-normalized
    std::size_t retained_tokens = 0;     // keyword/identifier/literal count
    std::uint32_t line_count = 0;

    [[nodiscard]] bool passes(const MatchConfig& cfg) const noexcept {
        return retained_tokens >= cfg.min_tokens && line_count >= cfg.min_lines;
    }
    /// Name under which the submission is materialized: "<sid><ext>".
    [[nodiscard]] std::string file_name() const { return submission_id + extension; }
};

struct CorpusOptions {
    std::size_t max_per_problem = 300;
};

/// Accepted submissions grouped by problem id, each list sorted by id.
using Corpus = std::map<std::string, std::vector<Submission>>;

/// Loads `<root>/<problemId>/<languageDir>/<submissionId>.<ext>` for the
/// given problems (all problems when empty). Files that fail to lex are
/// skipped and listed in `warnings`.
Corpus load_corpus(const std::filesystem::path& root, const LanguageConfig& cfg,
                   const std::vector<std::string>& problems, const CorpusOptions& options,
                   std::vector<std::string>* warnings = nullptr);

/// Builds one submission from source text (preprocess, lex, normalize).
Submission make_submission(std::string problem_id, std::string submission_id,
                           std::string_view source, const LanguageConfig& cfg,
                           std::string extension = {});

/// Problem statement text from `<root>/problem_descriptions/<pid>.html|txt`,
/// empty if absent.
std::string read_description(const std::filesystem::path& root, const std::string& problem_id);

/// Writes preprocessed submissions under dir/<pid>/<sid><ext>.
void materialize(const std::filesystem::path& dir, const std::vector<const Submission*>& subs);

}  // namespace polyclone::bench
