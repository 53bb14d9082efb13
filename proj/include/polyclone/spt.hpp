#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "polyclone/frontend.hpp"
#include "polyclone/token.hpp"

namespace polyclone {

struct SimplifyConfig {
    std::size_t min_size = 20;  // minimum token count of a code block, >= 1
};

/// Node of a simplified parse tree. `granularity` is its depth (root = 0).
struct SptNode {
    std::string rule;  // deepest rule of a merged single-child chain
    TokenSpan span;
    std::uint32_t granularity = 0;
    std::uint32_t start_line = 1;
    std::uint32_t end_line = 1;
    /// Surviving sub-blocks.
    std::vector<SptNode> children;
    /// Spans of every immediate parse-tree child of the merged node, leaves
    /// and pruned blocks included. The keyword filter inspects these.
    std::vector<TokenSpan> partition;

    friend bool operator==(const SptNode&, const SptNode&) = default;
};

struct Spt {
    SptNode root;
    /// The whole file is shorter than min_size; only file-level use makes sense.
    bool file_level_only = false;
};

/// Merges equal-span single-child chains, keeps only inner nodes whose span
/// is at least cfg.min_size, and assigns depths. Pre-order is preserved.
Spt simplify(const ParseNode& tree, std::span<const Token> tokens, const SimplifyConfig& cfg);

std::uint32_t max_granularity(const SptNode& root) noexcept;

/// Number of nodes in the tree rooted at root.
std::size_t node_count(const SptNode& root) noexcept;

}  // namespace polyclone
