#pragma once

// Deliberately naive reference implementations used as test oracles. None of
// them share code with the library beyond plain data types.

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "polyclone/benchmark/recall.hpp"
#include "polyclone/detector.hpp"
#include "polyclone/frontend.hpp"
#include "polyclone/segment.hpp"
#include "polyclone/spt.hpp"

namespace oracle {

using polyclone::ClonePair;
using polyclone::CodeSegment;
using polyclone::TokenBag;

std::map<std::string, std::uint32_t> as_map(const TokenBag& bag);

/// Shared-token count by walking both maps.
std::uint32_t intersection(const TokenBag& a, const TokenBag& b);

double similarity(const TokenBag& a, const TokenBag& b);

/// All same-granularity pairs reaching theta, oriented left < right, sorted
/// by (left, right, granularity). No suppression.
std::vector<ClonePair> all_pairs(const std::vector<TokenBag>& bags, double theta);

/// Removes every pair that has a parent pair one level up nesting it on both
/// sides in either orientation. Checked by exhaustive search.
std::vector<ClonePair> suppress(const std::vector<ClonePair>& pairs);

/// One surviving node of the reference simplification.
struct RefNode {
    polyclone::TokenSpan span;
    std::uint32_t depth = 0;
    std::string rule;
    friend bool operator==(const RefNode&, const RefNode&) = default;
};

/// Reference simplification built by direct set construction: an inner node
/// survives when its span reaches min_size and differs from its parent's.
std::vector<RefNode> simplify(const polyclone::ParseNode& tree, std::size_t min_size);

/// Flattens an SPT in pre-order for comparison against the reference.
std::vector<RefNode> flatten(const polyclone::SptNode& root);

/// Levenshtein distance over a full DP matrix.
std::size_t levenshtein(const std::vector<std::string>& a, const std::vector<std::string>& b);

/// Recall per bucket by checking every (truth, report) combination.
polyclone::bench::RecallScore match(const std::vector<ClonePair>& report,
                                    const std::vector<polyclone::bench::LabeledClone>& truth,
                                    const polyclone::bench::MatchConfig& cfg);

// ---- random inputs --------------------------------------------------------

/// Bags over a small alphabet so that overlaps are frequent.
TokenBag random_bag(std::mt19937_64& rng, std::string file, std::uint32_t line,
                    std::uint32_t granularity, std::size_t alphabet, std::size_t max_size);

/// Random ordered tree with at most max_nodes nodes; leaves get consecutive
/// token indices and inner nodes get rule names "r<k>".
polyclone::ParseNode random_tree(std::mt19937_64& rng, std::size_t max_nodes);

/// A token stream of n tokens, a few per line.
std::vector<polyclone::Token> random_tokens(std::mt19937_64& rng, std::size_t n);

}  // namespace oracle
