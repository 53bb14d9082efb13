#include "polyclone/spt.hpp"

#include <algorithm>

namespace polyclone {

namespace {

class Simplifier {
public:
    Simplifier(std::span<const Token> tokens, std::size_t min_size)
        : tokens_(tokens), min_size_(std::max<std::size_t>(1, min_size)) {}

    [[nodiscard]] std::size_t min_size() const noexcept { return min_size_; }

    /// Builds the SPT node for `top`, absorbing its equal-span chain.
    SptNode build(const ParseNode& top, std::uint32_t depth, bool descend) const {
        const ParseNode* bottom = &top;
        std::string_view rule = top.rule;
        while (!bottom->is_leaf() && bottom->children.front().span.length() == bottom->span.length()) {
            bottom = &bottom->children.front();
            if (!bottom->is_leaf()) rule = bottom->rule;
        }

        SptNode node;
        node.rule = std::string(rule);
        node.span = top.span;
        node.granularity = depth;
        set_lines(node);
        node.partition.reserve(bottom->children.size());
        for (const auto& child : bottom->children) {
            node.partition.push_back(child.span);
            if (descend && !child.is_leaf() && child.span.length() >= min_size_) {
                node.children.push_back(build(child, depth + 1, true));
            }
        }
        return node;
    }

private:
    void set_lines(SptNode& node) const {
        if (node.span.length() == 0 || node.span.end > tokens_.size()) return;
        node.start_line = tokens_[node.span.begin].line;
        node.end_line = std::max(node.start_line, tokens_[node.span.end - 1].last_line());
    }

    std::span<const Token> tokens_;
    std::size_t min_size_;
};

}  // namespace

Spt simplify(const ParseNode& tree, std::span<const Token> tokens, const SimplifyConfig& cfg) {
    const Simplifier simplifier(tokens, cfg.min_size);
    if (tree.is_leaf() || tree.span.length() < simplifier.min_size()) {
        return Spt{simplifier.build(tree, 0, false), true};
    }
    return Spt{simplifier.build(tree, 0, true), false};
}

std::uint32_t max_granularity(const SptNode& root) noexcept {
    std::uint32_t deepest = root.granularity;
    for (const auto& child : root.children) deepest = std::max(deepest, max_granularity(child));
    return deepest;
}

std::size_t node_count(const SptNode& root) noexcept {
    std::size_t count = 1;
    for (const auto& child : root.children) count += node_count(child);
    return count;
}

}  // namespace polyclone
