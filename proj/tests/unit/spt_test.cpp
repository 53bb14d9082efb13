#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "oracles.hpp"
#include "polyclone/spt.hpp"

using namespace polyclone;

namespace {

ParseNode inner(std::string rule, std::vector<ParseNode> children) {
    ParseNode n;
    n.rule = std::move(rule);
    n.children = std::move(children);
    n.span = {n.children.front().span.begin, n.children.back().span.end};
    return n;
}

// Node numbering follows the figure: 0 -> 1 -> {2, 3}; 2 -> {4, 5};
// 3 -> {6, 7, 8}; 7 -> {9, 10}. Leaves 4 5 6 9 10 8 are tokens 0..5.
ParseNode figure_tree() {
    auto n2 = inner("n2", {ParseNode::leaf(0), ParseNode::leaf(1)});
    auto n7 = inner("n7", {ParseNode::leaf(3), ParseNode::leaf(4)});
    auto n3 = inner("n3", {ParseNode::leaf(2), n7, ParseNode::leaf(5)});
    auto n1 = inner("n1", {n2, n3});
    return inner("n0", {n1});
}

std::vector<Token> line_tokens(std::size_t n) {
    std::vector<Token> out;
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back({TokenCategory::Identifier, "t", static_cast<std::uint32_t>(i + 1), 1});
    }
    return out;
}

}  // namespace

TEST(Simplify, FigureExample) {
    const auto tree = figure_tree();
    const auto tokens = line_tokens(6);
    const auto spt = simplify(tree, tokens, {2});
    EXPECT_FALSE(spt.file_level_only);

    // Surviving nodes 0, 2, 3, 7 in pre-order.
    const auto flat = oracle::flatten(spt.root);
    ASSERT_EQ(flat.size(), 4u);
    EXPECT_EQ(flat[0], (oracle::RefNode{{0, 6}, 0, "n1"}));
    EXPECT_EQ(flat[1], (oracle::RefNode{{0, 2}, 1, "n2"}));
    EXPECT_EQ(flat[2], (oracle::RefNode{{2, 6}, 1, "n3"}));
    EXPECT_EQ(flat[3], (oracle::RefNode{{3, 5}, 2, "n7"}));
    EXPECT_EQ(max_granularity(spt.root), 2u);
    EXPECT_EQ(node_count(spt.root), 4u);
    EXPECT_EQ(oracle::simplify(tree, 2), flat);

    // Lines come from the first and last token of each span.
    EXPECT_EQ(spt.root.children[1].start_line, 3u);
    EXPECT_EQ(spt.root.children[1].end_line, 6u);
    // The partition of node 3 still lists its leaf children.
    EXPECT_EQ(spt.root.children[1].partition,
              (std::vector<TokenSpan>{{2, 3}, {3, 5}, {5, 6}}));
}

TEST(Simplify, SingleChainMergesToOneNode) {
    const auto tree = inner("root", {inner("a", {inner("b", {ParseNode::leaf(0)})})});
    const auto spt = simplify(tree, line_tokens(1), {1});
    EXPECT_EQ(node_count(spt.root), 1u);
    EXPECT_EQ(spt.root.granularity, 0u);
    EXPECT_EQ(spt.root.rule, "b");
    EXPECT_EQ(spt.root.span, (TokenSpan{0, 1}));
    EXPECT_EQ(max_granularity(spt.root), 0u);
}

TEST(Simplify, ShortFileIsFileLevelOnly) {
    const auto spt = simplify(figure_tree(), line_tokens(6), {7});
    EXPECT_TRUE(spt.file_level_only);
    EXPECT_EQ(node_count(spt.root), 1u);
    EXPECT_EQ(spt.root.span, (TokenSpan{0, 6}));
    EXPECT_EQ(max_granularity(spt.root), 0u);
}

TEST(Simplify, MatchesReferenceOnRandomTrees) {
    std::mt19937_64 rng(2024);
    for (int round = 0; round < 2000; ++round) {
        const auto tree = oracle::random_tree(rng, 12);
        const auto tokens = oracle::random_tokens(rng, tree.span.length());
        const std::size_t m = 1 + rng() % 5;
        const auto spt = simplify(tree, tokens, {m});
        ASSERT_EQ(oracle::flatten(spt.root), oracle::simplify(tree, m)) << "round " << round << " mSize " << m;
    }
}

TEST(Simplify, StructuralInvariants) {
    std::mt19937_64 rng(99);
    for (int round = 0; round < 1000; ++round) {
        const auto tree = oracle::random_tree(rng, 30);
        const auto tokens = oracle::random_tokens(rng, tree.span.length());
        const std::size_t m = 1 + rng() % 6;
        const auto spt = simplify(tree, tokens, {m});

        // Span conservation at the root.
        EXPECT_EQ(spt.root.span, tree.span);

        // Strict containment parent -> child and depth = granularity.
        std::function<void(const SptNode&)> check = [&](const SptNode& n) {
            for (const auto& c : n.children) {
                EXPECT_TRUE(n.span.contains(c.span));
                EXPECT_LT(c.span.length(), n.span.length());
                EXPECT_GE(c.span.length(), m);
                EXPECT_EQ(c.granularity, n.granularity + 1);
                check(c);
            }
        };
        check(spt.root);

        // Raising mSize never adds nodes.
        const auto bigger = simplify(tree, tokens, {m + 1});
        EXPECT_LE(node_count(bigger.root), node_count(spt.root));

        // Determinism.
        EXPECT_EQ(simplify(tree, tokens, {m}).root, spt.root);
    }
}
