#include <gtest/gtest.h>

#include <functional>

#include "fixtures.hpp"
#include "polyclone/error.hpp"
#include "polyclone/frontend.hpp"
#include "polyclone/preprocess.hpp"
#include "synth.hpp"

using namespace polyclone;

namespace {

void collect_leaves(const ParseNode& n, std::vector<TokenSpan>& out) {
    if (n.is_leaf()) {
        out.push_back(n.span);
        return;
    }
    for (const auto& c : n.children) collect_leaves(c, out);
}

void expect_leaves_match_tokens(const ParseOutcome& outcome) {
    ASSERT_TRUE(outcome.tree.has_value());
    std::vector<TokenSpan> leaves;
    collect_leaves(*outcome.tree, leaves);
    ASSERT_EQ(leaves.size(), outcome.tokens.size());
    for (std::size_t i = 0; i < leaves.size(); ++i) EXPECT_EQ(leaves[i], (TokenSpan{i, i + 1}));
}

void expect_spans_contiguous(const ParseNode& n) {
    if (n.is_leaf()) {
        EXPECT_EQ(n.span.length(), 1u);
        return;
    }
    EXPECT_EQ(n.children.front().span.begin, n.span.begin);
    EXPECT_EQ(n.children.back().span.end, n.span.end);
    for (std::size_t i = 1; i < n.children.size(); ++i) {
        EXPECT_EQ(n.children[i - 1].span.end, n.children[i].span.begin);
    }
    for (const auto& c : n.children) expect_spans_contiguous(c);
}

const char* kJava = R"(public class Sum {
    public int total(int[] xs) {
        int acc = 0;
        for (int i = 0; i < xs.length; i++) {
            acc += xs[i] * 2;
        }
        String s = "text";
        return acc;
    }
}
)";

}  // namespace

TEST(Frontend, ValidJavaParsesCleanly) {
    const auto& java = fixtures::lang("java");
    const auto outcome = parse_file(kJava, java);
    EXPECT_FALSE(outcome.degraded());
    EXPECT_TRUE(outcome.errors.empty());
    expect_leaves_match_tokens(outcome);
    expect_spans_contiguous(*outcome.tree);
}

TEST(Frontend, TokenCategories) {
    const auto& java = fixtures::lang("java");
    const auto outcome = parse_file(kJava, java);
    auto find = [&](const std::string& text) {
        for (const auto& t : outcome.tokens) {
            if (t.text == text) return t;
        }
        ADD_FAILURE() << "missing token " << text;
        return Token{};
    };
    EXPECT_EQ(find("for").category, TokenCategory::Keyword);
    EXPECT_EQ(find("acc").category, TokenCategory::Identifier);
    EXPECT_EQ(find("0").category, TokenCategory::Literal);
    EXPECT_EQ(find("\"text\"").category, TokenCategory::Literal);
    EXPECT_EQ(find("{").category, TokenCategory::Other);
    EXPECT_EQ(find("+=").category, TokenCategory::Other);
    EXPECT_EQ(find("acc").line, 3u);
    for (const auto& t : outcome.tokens) {
        EXPECT_EQ(t.category == TokenCategory::Keyword, java.is_keyword(t.text)) << t.text;
    }
}

TEST(Frontend, MissingSemicolonIsRecovered) {
    const auto& java = fixtures::lang("java");
    const auto outcome = parse_file("class C {\n  int f(int x) {\n    int y = x + 1\n    return y;\n  }\n}\n", java);
    ASSERT_FALSE(outcome.degraded());
    ASSERT_EQ(outcome.errors.size(), 1u);
    EXPECT_TRUE(outcome.errors[0].recovered);
    EXPECT_EQ(outcome.errors[0].kind, ParseErrorKind::Syntactic);
    expect_leaves_match_tokens(outcome);
}

TEST(Frontend, GarbageIsDegradedButTokenized) {
    const auto& java = fixtures::lang("java");
    const auto outcome = parse_file("}}} ))) class class ;; @@ %% ) ( ] [ foo bar baz )))\n", java);
    EXPECT_TRUE(outcome.degraded());
    EXPECT_FALSE(outcome.tokens.empty());
    EXPECT_FALSE(outcome.errors.empty());
}

TEST(Frontend, BinaryContentIsLexFailure) {
    const auto& java = fixtures::lang("java");
    const std::string binary("\x7f" "ELF\x02\x01\x00\x00\xff\xfe", 10);
    try {
        (void)parse_file(binary, java);
        FAIL() << "expected LexFailure";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::LexFailure);
    }
    EXPECT_THROW(validate_source("ok \xc3"), Error);
}

TEST(Frontend, ByteOrderMarkIsStripped) {
    EXPECT_EQ(validate_source("\xEF\xBB\xBFint x;"), "int x;");
    const auto outcome = parse_file("\xEF\xBB\xBF" "class A { int x; }", fixtures::lang("java"));
    EXPECT_FALSE(outcome.degraded());
    EXPECT_EQ(outcome.tokens.front().text, "class");
}

TEST(Frontend, UnknownAdapter) {
    auto cfg = fixtures::lang("java");
    cfg.grammar_ref = "tree-sitter:cobol";
    try {
        (void)parse_file("x", cfg);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::AdapterUnavailable);
    }
}

TEST(Frontend, PythonAndCAdapters) {
    const auto py = parse_file("def f(x):\n    if x > 0:\n        return x\n    return -x\n", fixtures::lang("python"));
    EXPECT_FALSE(py.degraded());
    expect_leaves_match_tokens(py);
    EXPECT_EQ(py.tokens.front().category, TokenCategory::Keyword);

    const auto c = parse_file("int main(void) {\n  int a = 3;\n  while (a) { a--; }\n  return 0;\n}\n", fixtures::lang("c"));
    EXPECT_FALSE(c.degraded());
    expect_leaves_match_tokens(c);
}

TEST(Frontend, LexicalAdapterIsAlwaysDegraded) {
    const auto out = parse_file("int main() { return 0; }", fixtures::lang("cpp"));
    EXPECT_TRUE(out.degraded());
    EXPECT_EQ(out.tokens.size(), 9u);
}

TEST(Frontend, SyntheticClassesParseWithoutErrors) {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 50; ++i) {
        const auto src = synth::java_class(rng, "S" + std::to_string(i));
        const auto outcome = parse_file(src, fixtures::lang("java"));
        ASSERT_FALSE(outcome.degraded()) << src;
        EXPECT_TRUE(outcome.errors.empty()) << src;
        expect_leaves_match_tokens(outcome);
    }
}

TEST(FileLevelBag, CategoryFilter) {
    ParseOutcome o;
    o.tokens = {{TokenCategory::Keyword, "if", 1, 1},
                {TokenCategory::Identifier, "x", 1, 4},
                {TokenCategory::Other, ">", 1, 6},
                {TokenCategory::Literal, "0", 2, 1}};
    const auto bag = file_level_bag(o, "f");
    EXPECT_EQ(bag.size, 3u);
    EXPECT_EQ(bag.counts, (TokenCounts{{"0", 1}, {"if", 1}, {"x", 1}}));
    EXPECT_EQ(bag.segment, (CodeSegment{"f", 1, 2, 0}));
}

TEST(FileLevelBag, Multiset) {
    ParseOutcome o;
    o.tokens = {{TokenCategory::Identifier, "x", 1, 1},
                {TokenCategory::Identifier, "x", 1, 3},
                {TokenCategory::Identifier, "y", 1, 5}};
    EXPECT_EQ(file_level_bag(o, "f").counts, (TokenCounts{{"x", 2}, {"y", 1}}));
}

TEST(FileLevelBag, AllOtherThrows) {
    ParseOutcome o;
    o.tokens = {{TokenCategory::Other, "{", 1, 1}, {TokenCategory::Other, "}", 1, 2}};
    try {
        (void)file_level_bag(o, "f");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::EmptyAfterFiltering);
    }
}
