#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "polyclone/language.hpp"
#include "polyclone/segment.hpp"
#include "polyclone/token.hpp"

namespace polyclone {

/// Parse-tree node. Leaves cover exactly one token; an inner node's span is
/// the contiguous concatenation of its children's spans.
struct ParseNode {
    std::string rule;  // empty for leaves
    std::vector<ParseNode> children;
    TokenSpan span;

    [[nodiscard]] bool is_leaf() const noexcept { return children.empty(); }

    static ParseNode leaf(std::size_t index) { return ParseNode{{}, {}, {index, index + 1}}; }
};

enum class ParseErrorKind : std::uint8_t { Lexical, Syntactic };

struct ParseError {
    std::uint32_t line = 1;
    std::uint32_t col = 1;
    ParseErrorKind kind = ParseErrorKind::Syntactic;
    bool recovered = true;
};

struct ParseOutcome {
    std::vector<Token> tokens;
    std::optional<ParseNode> tree;
    std::vector<ParseError> errors;

    /// No tree was produced; the file can only take part at file granularity.
    [[nodiscard]] bool degraded() const noexcept { return !tree.has_value(); }
};

/// Grammar-driven parser: preprocessed text in, tokens and tree out.
class ParserAdapter {
public:
    virtual ~ParserAdapter() = default;
    [[nodiscard]] virtual std::string_view name() const = 0;
    /// Throws Error{LexFailure} only when no token stream can be produced.
    [[nodiscard]] virtual ParseOutcome parse(std::string_view source,
                                             const LanguageConfig& cfg) const = 0;
};

/// Looks up the adapter for a grammarRef; nullptr when none is registered.
const ParserAdapter* find_adapter(std::string_view grammar_ref);

/// All registered grammarRef identifiers.
std::vector<std::string> adapter_names();

/// Checks encoding, strips a UTF-8 BOM, and returns the text to lex.
/// Throws Error{LexFailure} for invalid UTF-8 or binary content.
std::string_view validate_source(std::string_view raw);

/// Tokenizes with the built-in lexer (no grammar needed). Used directly by
/// the "lexical" adapter and as the fallback when a grammar yields no tree.
std::vector<Token> lex_generic(std::string_view source, const LanguageConfig& cfg);

/// Runs the adapter registered for cfg.grammar_ref.
/// Throws Error{AdapterUnavailable} or Error{LexFailure}.
ParseOutcome parse_file(std::string_view source, const LanguageConfig& cfg);

/// Whole-file bag over all retained tokens, granularity 0.
/// Throws Error{EmptyAfterFiltering} when no token is retained.
TokenBag file_level_bag(const ParseOutcome& outcome, std::string file);

/// Number of lines in text (a trailing newline does not start a new line).
std::uint32_t count_lines(std::string_view text) noexcept;

}  // namespace polyclone
