#include <algorithm>
#include <cctype>
#include <memory>
#include <set>
#include <string>

#include <tree_sitter/api.h>

#include "adapters/adapters.hpp"
#include "polyclone/error.hpp"

extern "C" {
const TSLanguage* tree_sitter_java(void);
const TSLanguage* tree_sitter_python(void);
const TSLanguage* tree_sitter_c(void);
}

namespace polyclone::detail {

namespace {

struct ParserDeleter {
    void operator()(TSParser* p) const noexcept { ts_parser_delete(p); }
};
struct TreeDeleter {
    void operator()(TSTree* t) const noexcept { ts_tree_delete(t); }
};

struct GrammarTraits {
    std::string name;
    const TSLanguage* (*language)();
    /// Node types lexed as a single literal token even if the grammar gives them children.
    std::set<std::string, std::less<>> literal_types;
    std::set<std::string, std::less<>> comment_types;
};

/// Trees whose ERROR regions cover more than this share of the tokens are
/// treated as unusable and the file falls back to file-level detection.
constexpr double kMaxErrorShare = 0.5;

TokenCategory classify_text(std::string_view text) noexcept {
    const auto c = static_cast<unsigned char>(text.front());
    if (std::isdigit(c) || c == '"' || c == '\'' || c == '`') return TokenCategory::Literal;
    if (std::isalpha(c) || c == '_' || c == '$' || c >= 0x80) return TokenCategory::Identifier;
    return TokenCategory::Other;
}

class TreeBuilder {
public:
    TreeBuilder(std::string_view source, const LanguageConfig& cfg, const GrammarTraits& traits,
                ParseOutcome& out)
        : source_(source), cfg_(cfg), traits_(traits), out_(out) {}

    std::optional<ParseNode> build(TSNode node) {
        const std::string_view type = ts_node_type(node);
        const auto start = ts_node_start_byte(node);
        const auto end = ts_node_end_byte(node);

        if (ts_node_is_missing(node)) {
            record_error(node, ParseErrorKind::Syntactic);
            return std::nullopt;
        }
        if (start >= end) return std::nullopt;
        if (traits_.comment_types.contains(type)) return std::nullopt;

        const bool is_error = ts_node_is_error(node);
        if (is_error) record_error(node, ParseErrorKind::Syntactic);

        const std::uint32_t child_count = ts_node_child_count(node);
        if (child_count == 0 || traits_.literal_types.contains(type)) {
            return make_leaf(node, type, start, end);
        }

        ParseNode inner;
        inner.rule = std::string(type);
        if (is_error) ++error_depth_;
        for (std::uint32_t k = 0; k < child_count; ++k) {
            if (auto child = build(ts_node_child(node, k))) inner.children.push_back(std::move(*child));
        }
        if (is_error) --error_depth_;

        if (inner.children.empty()) return make_leaf(node, type, start, end);
        inner.span = {inner.children.front().span.begin, inner.children.back().span.end};
        if (is_error && error_depth_ == 0) error_tokens_ += inner.span.length();
        return inner;
    }

    [[nodiscard]] std::size_t error_tokens() const noexcept { return error_tokens_; }

private:
    ParseNode make_leaf(TSNode node, std::string_view type, std::uint32_t start, std::uint32_t end) {
        const auto point = ts_node_start_point(node);
        Token token;
        token.text = std::string(source_.substr(start, end - start));
        token.line = point.row + 1;
        token.col = point.column + 1;
        if (cfg_.is_keyword(token.text)) {
            token.category = TokenCategory::Keyword;
        } else if (traits_.literal_types.contains(type)) {
            token.category = TokenCategory::Literal;
        } else if (ts_node_is_named(node)) {
            token.category = classify_text(token.text);
        } else {
            token.category = TokenCategory::Other;
        }
        const std::size_t index = out_.tokens.size();
        out_.tokens.push_back(std::move(token));
        if (ts_node_is_error(node) && error_depth_ == 0) ++error_tokens_;
        return ParseNode::leaf(index);
    }

    void record_error(TSNode node, ParseErrorKind kind) {
        const auto point = ts_node_start_point(node);
        out_.errors.push_back(ParseError{point.row + 1, point.column + 1, kind, true});
    }

    std::string_view source_;
    const LanguageConfig& cfg_;
    const GrammarTraits& traits_;
    ParseOutcome& out_;
    int error_depth_ = 0;
    std::size_t error_tokens_ = 0;
};

class TreeSitterAdapter final : public ParserAdapter {
public:
    explicit TreeSitterAdapter(GrammarTraits traits) : traits_(std::move(traits)) {}

    [[nodiscard]] std::string_view name() const override { return traits_.name; }

    [[nodiscard]] ParseOutcome parse(std::string_view source, const LanguageConfig& cfg) const override {
        std::unique_ptr<TSParser, ParserDeleter> parser(ts_parser_new());
        if (!ts_parser_set_language(parser.get(), traits_.language())) {
            throw Error(ErrorCode::AdapterUnavailable, "incompatible grammar " + traits_.name);
        }
        std::unique_ptr<TSTree, TreeDeleter> tree(ts_parser_parse_string(
            parser.get(), nullptr, source.data(), static_cast<std::uint32_t>(source.size())));

        ParseOutcome outcome;
        if (!tree) {
            outcome.tokens = lex_generic(source, cfg);
            outcome.errors.push_back(ParseError{1, 1, ParseErrorKind::Syntactic, false});
            return outcome;
        }

        const TSNode root = ts_tree_root_node(tree.get());
        TreeBuilder builder(source, cfg, traits_, outcome);
        auto built = builder.build(root);

        const bool unusable =
            !built || ts_node_is_error(root) ||
            static_cast<double>(builder.error_tokens()) >
                kMaxErrorShare * static_cast<double>(outcome.tokens.size());
        if (unusable) {
            for (auto& e : outcome.errors) e.recovered = false;
            if (outcome.errors.empty()) {
                outcome.errors.push_back(ParseError{1, 1, ParseErrorKind::Syntactic, false});
            }
            return outcome;
        }
        if (built->is_leaf()) {
            // A one-token file still gets an inner root so the tree has a rule.
            ParseNode wrapper{std::string(ts_node_type(root)), {std::move(*built)}, {0, 1}};
            built = std::move(wrapper);
        }
        outcome.tree = std::move(built);
        return outcome;
    }

private:
    GrammarTraits traits_;
};

}  // namespace

const std::vector<const ParserAdapter*>& tree_sitter_adapters() {
    static const TreeSitterAdapter java(GrammarTraits{
        "tree-sitter:java",
        tree_sitter_java,
        {"decimal_integer_literal", "hex_integer_literal", "octal_integer_literal",
         "binary_integer_literal", "decimal_floating_point_literal", "hex_floating_point_literal",
         "character_literal", "string_literal", "text_block", "true", "false", "null_literal"},
        {"line_comment", "block_comment", "comment"}});
    static const TreeSitterAdapter python(GrammarTraits{
        "tree-sitter:python",
        tree_sitter_python,
        {"integer", "float", "string", "true", "false", "none", "ellipsis"},
        {"comment"}});
    static const TreeSitterAdapter c(GrammarTraits{
        "tree-sitter:c",
        tree_sitter_c,
        {"number_literal", "string_literal", "char_literal", "raw_string_literal", "system_lib_string",
         "true", "false", "null"},
        {"comment"}});
    static const std::vector<const ParserAdapter*> all{&java, &python, &c};
    return all;
}

}  // namespace polyclone::detail
