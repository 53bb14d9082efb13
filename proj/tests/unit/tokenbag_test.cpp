#include <gtest/gtest.h>

#include <functional>
#include <map>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "polyclone/error.hpp"
#include "polyclone/frontend.hpp"
#include "polyclone/spt.hpp"
#include "polyclone/tokenbag.hpp"
#include "synth.hpp"

using namespace polyclone;

namespace {

Token tok(TokenCategory c, std::string text, std::uint32_t line = 1) { return {c, std::move(text), line, 1}; }

const SptNode* find_rule(const SptNode& n, const std::string& rule) {
    if (n.rule == rule) return &n;
    for (const auto& c : n.children) {
        if (const auto* hit = find_rule(c, rule)) return hit;
    }
    return nullptr;
}

// Re-scan oracle: the retained tokens in the node's span, counted in a map.
std::map<std::string, std::uint32_t> rescan(const std::vector<Token>& tokens, TokenSpan span) {
    std::map<std::string, std::uint32_t> m;
    for (std::size_t i = span.begin; i < span.end; ++i) {
        if (tokens[i].category != TokenCategory::Other) ++m[tokens[i].text];
    }
    return m;
}

const char* kLoop = R"(class L {
  int f(int[] xs) {
    int s = 0;
    for (int i = 0; i < xs.length; i++) {
      s = s + xs[i];
    }
    return s;
  }
}
)";

}  // namespace

TEST(KeywordsFilter, KeywordOnlyChildPasses) {
    const std::vector<Token> tokens = {tok(TokenCategory::Keyword, "while"), tok(TokenCategory::Other, "("),
                                       tok(TokenCategory::Identifier, "x"), tok(TokenCategory::Other, ")")};
    SptNode node;
    node.span = {0, 4};
    node.partition = {{0, 1}, {1, 4}};
    const KeywordSet kw = {"while"};
    EXPECT_TRUE(keywords_filter(node, kw, tokens));
}

TEST(KeywordsFilter, MixedChildrenFail) {
    const std::vector<Token> tokens = {tok(TokenCategory::Keyword, "return"), tok(TokenCategory::Identifier, "x"),
                                       tok(TokenCategory::Keyword, "new"), tok(TokenCategory::Identifier, "y")};
    SptNode node;
    node.span = {0, 4};
    node.partition = {{0, 2}, {2, 4}};
    EXPECT_FALSE(keywords_filter(node, KeywordSet{"return", "new"}, tokens));
}

TEST(KeywordsFilter, LeafHasNoQualifyingChild) {
    const std::vector<Token> tokens = {tok(TokenCategory::Keyword, "if")};
    SptNode node;
    node.span = {0, 1};
    EXPECT_FALSE(keywords_filter(node, KeywordSet{"if"}, tokens));
}

TEST(KeywordsFilter, ForLoopPassesItsConditionDoesNot) {
    const auto& java = fixtures::lang("java");
    const auto outcome = parse_file(kLoop, java);
    ASSERT_FALSE(outcome.degraded());
    const auto spt = simplify(*outcome.tree, outcome.tokens, {3});
    const auto* loop = find_rule(spt.root, "for_statement");
    const auto* cond = find_rule(spt.root, "binary_expression");
    ASSERT_NE(loop, nullptr);
    ASSERT_NE(cond, nullptr);
    EXPECT_TRUE(keywords_filter(*loop, java.keywords, outcome.tokens));
    EXPECT_FALSE(keywords_filter(*cond, java.keywords, outcome.tokens));

    const auto all = generate_bags(spt.root, outcome.tokens, "L.java", nullptr, 1);
    const auto filtered = generate_bags(spt.root, outcome.tokens, "L.java", &java.keywords, 1);
    EXPECT_EQ(all.size(), node_count(spt.root));
    EXPECT_LT(filtered.size(), all.size());
}

TEST(GenerateBags, OneBagPerNodeWithoutKeywords) {
    std::vector<Token> tokens;
    for (int i = 0; i < 8; ++i) tokens.push_back(tok(TokenCategory::Identifier, "x" + std::to_string(i), i + 1));
    ParseNode a{"a", {ParseNode::leaf(0), ParseNode::leaf(1)}, {0, 2}};
    ParseNode b{"b", {ParseNode::leaf(2), ParseNode::leaf(3)}, {2, 4}};
    ParseNode c{"c", {a, b}, {0, 4}};
    ParseNode d{"d", {ParseNode::leaf(4), ParseNode::leaf(5), ParseNode::leaf(6), ParseNode::leaf(7)}, {4, 8}};
    ParseNode root{"root", {c, d}, {0, 8}};
    const auto spt = simplify(root, tokens, {2});
    ASSERT_EQ(node_count(spt.root), 5u);
    const auto bags = generate_bags(spt.root, tokens, "f", nullptr, 2);
    ASSERT_EQ(bags.size(), 5u);
    EXPECT_EQ(bags[0].segment, (CodeSegment{"f", 1, 8, 0}));
    EXPECT_EQ(bags[1].segment, (CodeSegment{"f", 1, 4, 1}));
    EXPECT_EQ(bags[2].segment, (CodeSegment{"f", 1, 2, 2}));
    EXPECT_EQ(bags[4].segment, (CodeSegment{"f", 5, 8, 1}));
}

TEST(GenerateBags, MinTokensBoundary) {
    std::vector<Token> tokens;
    std::vector<ParseNode> leaves;
    for (std::size_t i = 0; i < 25; ++i) {
        // 19 retained tokens and 6 punctuation tokens
        tokens.push_back(tok(i < 19 ? TokenCategory::Identifier : TokenCategory::Other, "t"));
        leaves.push_back(ParseNode::leaf(i));
    }
    ParseNode root{"root", leaves, {0, 25}};
    const auto spt = simplify(root, tokens, {20});
    EXPECT_TRUE(generate_bags(spt.root, tokens, "f", nullptr, 20).empty());
    EXPECT_EQ(generate_bags(spt.root, tokens, "f", nullptr, 19).size(), 1u);
}

TEST(GenerateBags, PropertiesOnSyntheticJava) {
    const auto& java = fixtures::lang("java");
    std::mt19937_64 rng(5);
    for (int i = 0; i < 30; ++i) {
        const auto src = synth::java_class(rng, "P" + std::to_string(i));
        const auto outcome = parse_file(src, java);
        ASSERT_FALSE(outcome.degraded());
        const std::size_t m = 5 + rng() % 20;
        const auto spt = simplify(*outcome.tree, outcome.tokens, {m});
        const auto all = generate_bags(spt.root, outcome.tokens, "P.java", nullptr, m);
        const auto filtered = generate_bags(spt.root, outcome.tokens, "P.java", &java.keywords, m);

        // Filter monotonicity: filtered segments are a subset.
        std::multiset<CodeSegment> all_segments;
        for (const auto& b : all) all_segments.insert(b.segment);
        for (const auto& b : filtered) {
            auto it = all_segments.find(b.segment);
            ASSERT_NE(it, all_segments.end());
            all_segments.erase(it);
        }

        // Nested-span consistency.
        for (const auto& x : all) {
            for (const auto& y : all) {
                const bool strict = y.segment.nests_in(x.segment) &&
                                    (y.segment.start_line != x.segment.start_line ||
                                     y.segment.end_line != x.segment.end_line);
                if (strict) EXPECT_LT(x.segment.granularity, y.segment.granularity);
            }
        }

        // Multiset correctness against a direct re-scan of each node span.
        std::vector<const SptNode*> nodes;
        std::function<void(const SptNode&)> walk = [&](const SptNode& n) {
            nodes.push_back(&n);
            for (const auto& c : n.children) walk(c);
        };
        walk(spt.root);
        std::size_t k = 0;
        for (const auto* n : nodes) {
            const auto expected = rescan(outcome.tokens, n->span);
            std::uint32_t size = 0;
            for (const auto& kv : expected) size += kv.second;
            if (size < m) continue;
            ASSERT_LT(k, all.size());
            EXPECT_EQ(oracle::as_map(all[k]), expected);
            EXPECT_EQ(all[k].size, size);
            EXPECT_EQ(all[k].segment.granularity, n->granularity);
            ++k;
        }
        EXPECT_EQ(k, all.size());
    }
}

TEST(BagFile, EmptyRoundTrip) {
    std::stringstream buf;
    write_bags({}, buf, "java", 20);
    BagFileHeader header;
    EXPECT_TRUE(read_bags(buf, &header).empty());
    EXPECT_EQ(header.language_id, "java");
    EXPECT_EQ(header.min_tokens, 20u);
}

TEST(BagFile, RoundTripPreservesOddTokens) {
    std::vector<TokenBag> bags;
    bags.push_back(make_bag({"dir/a,b.java", 3, 9, 1}, {"if", "if", "x"}));
    bags.push_back(make_bag({"b.py", 1, 2, 0}, {"\"a=b,c\"", "'\t%'", "x"}));
    bags.push_back(make_bag({"c.py", 1, 4, 0}, {"\"\"\"multi\nline\r\"\"\"", "y"}));
    std::stringstream buf;
    write_bags(bags, buf, "java", 1);
    EXPECT_EQ(read_bags(buf), bags);
    EXPECT_EQ(bags[0].counts, (TokenCounts{{"if", 2}, {"x", 1}}));
}

TEST(BagFile, GranularityFilterOnRead) {
    std::vector<TokenBag> bags = {make_bag({"a", 1, 9, 0}, {"x"}), make_bag({"a", 2, 3, 1}, {"y"})};
    std::stringstream buf;
    write_bags(bags, buf, "java", 1);
    const auto only_fine = read_bags(buf, nullptr, [](std::uint32_t g) { return g == 1; });
    ASSERT_EQ(only_fine.size(), 1u);
    EXPECT_EQ(only_fine[0], bags[1]);
}

TEST(BagFile, TruncationAndTamperingAreDetected) {
    std::vector<TokenBag> bags = {make_bag({"a", 1, 9, 0}, {"x", "y"}), make_bag({"b", 1, 9, 0}, {"x", "z"})};
    std::stringstream buf;
    write_bags(bags, buf, "java", 1);
    const auto full = buf.str();
    auto expect_corrupt = [](const std::string& text) {
        std::istringstream in(text);
        try {
            (void)read_bags(in);
            ADD_FAILURE() << "accepted: " << text;
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::CorruptBagFile);
        }
    };
    expect_corrupt(full.substr(0, full.size() / 2));
    expect_corrupt(full.substr(0, full.rfind("END")));
    auto tampered = full;
    tampered[tampered.find("x=1")] = 'q';
    expect_corrupt(tampered);
    expect_corrupt("MSB9 java 1\n");
}

TEST(PercentEncoding, RoundTrip) {
    std::mt19937_64 rng(3);
    const std::string alphabet = "ab%,=\t\n\r\\ ";
    for (int i = 0; i < 1000; ++i) {
        std::string s;
        for (int k = static_cast<int>(rng() % 12); k > 0; --k) s += alphabet[rng() % alphabet.size()];
        const auto enc = percent_encode(s, "\t,=");
        EXPECT_EQ(enc.find_first_of(",=\t\n\r"), std::string::npos);
        EXPECT_EQ(percent_decode(enc), s);
    }
}
