#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "polyclone/segment.hpp"

namespace polyclone {

enum class GranularityMode : std::uint8_t { FileOnly, Range, All };

struct DetectorConfig {
    double theta = 0.7;
    std::size_t min_tokens = 20;
    GranularityMode mode = GranularityMode::Range;
    std::uint32_t g_lo = 0;
    std::uint32_t g_hi = 4;
    bool report_coarsest_only = true;

    [[nodiscard]] bool accepts(std::uint32_t granularity) const noexcept;
    /// "file", "all" or "lo..hi".
    [[nodiscard]] std::string granularity_label() const;
    /// Parses "file", "all", "N" or "lo..hi". Throws std::invalid_argument.
    static DetectorConfig with_granularity(DetectorConfig base, std::string_view spec);
};

/// Unordered pair of same-granularity segments; left < right canonically.
struct ClonePair {
    CodeSegment left;
    CodeSegment right;
    double similarity = 0.0;
    std::uint32_t granularity = 0;

    friend bool operator==(const ClonePair&, const ClonePair&) = default;
};

/// Canonical report order: (leftFile, s, e, rightFile, s, e), then granularity.
bool pair_less(const ClonePair& a, const ClonePair& b) noexcept;

/// |a ∩ b| / max(|a|, |b|) with multiset intersection.
double overlap_similarity(const TokenBag& a, const TokenBag& b);

/// Shared-token count of two sorted count vectors.
std::uint32_t multiset_overlap(const TokenCounts& a, const TokenCounts& b) noexcept;

/// Prefix-filter inverted index over one granularity group. Bags are
/// interned into a global rarest-first token order; each bag indexes its
/// first ceil((1 - theta) * size) + 1 multiset elements.
class CandidateIndex {
public:
    CandidateIndex(std::span<const TokenBag> group, double theta);

    /// Positions (into the group) of every bag that may reach theta against
    /// group[query]. Never misses a true match; excludes query itself.
    [[nodiscard]] std::vector<std::uint32_t> probe(std::uint32_t query) const;

    /// Candidates for a bag that is not part of the group.
    [[nodiscard]] std::vector<std::uint32_t> probe(const TokenBag& bag) const;

    /// Reusable per-thread buffers for matches().
    struct Scratch {
        std::vector<std::int32_t> accumulated;
        std::vector<std::uint32_t> touched;
    };

    /// Every (other, overlap) with similarity >= theta against group[query],
    /// restricted to members ordered before query by (size, position) so
    /// that each pair is produced once across all queries. Prefix matches
    /// are counted per candidate and dropped as soon as the tokens left
    /// after the matching positions cannot lift the overlap to theta.
    [[nodiscard]] std::vector<std::pair<std::uint32_t, std::uint32_t>> matches(std::uint32_t query,
                                                                               Scratch& scratch) const;

    /// Exact shared-token count between two group members.
    [[nodiscard]] std::uint32_t overlap(std::uint32_t a, std::uint32_t b) const noexcept;

    [[nodiscard]] std::size_t prefix_length(std::uint32_t size) const noexcept;
    [[nodiscard]] std::size_t size() const noexcept { return sizes_.size(); }

private:
    using Element = std::uint64_t;  // (token rank << 32) | occurrence
    using Encoded = std::vector<std::pair<std::uint32_t, std::uint32_t>>;  // (rank, count)

    [[nodiscard]] Encoded encode(const TokenCounts& counts) const;
    [[nodiscard]] std::vector<std::uint32_t> probe_encoded(const Encoded& bag, std::uint32_t size,
                                                           std::int64_t self) const;

    struct Posting {
        std::uint32_t bag;
        std::uint32_t position;  // index of the element in the bag's rank-ordered sequence
    };

    [[nodiscard]] bool ordered_before(std::uint32_t a, std::uint32_t b) const noexcept {
        return sizes_[a] != sizes_[b] ? sizes_[a] < sizes_[b] : a < b;
    }

    double theta_;
    std::unordered_map<std::string, std::uint32_t> rank_;
    std::vector<Encoded> bags_;
    std::vector<std::uint32_t> sizes_;
    // Each list is sorted by ordered_before.
    std::unordered_map<Element, std::vector<Posting>> postings_;
};

CandidateIndex build_candidate_index(std::span<const TokenBag> group, double theta);

/// Clone pairs within one granularity group (no suppression), unsorted.
std::vector<ClonePair> detect_group(std::span<const TokenBag> group, double theta,
                                    unsigned jobs = 1);

/// Drops each pair at granularity g+1 nested (both sides) inside a pair
/// detected at granularity g. Suppression chains: a suppressed pair still
/// suppresses its own sub-pairs.
std::vector<ClonePair> suppress_nested(std::vector<ClonePair> pairs);

/// Full detection: groups by granularity, compares within groups, applies
/// coarsest-only reporting, returns pairs in canonical order.
std::vector<ClonePair> detect(std::span<const TokenBag> bags, const DetectorConfig& cfg,
                              unsigned jobs = 1);

/// Sorts canonically and removes exact duplicates and self-pairs.
void canonicalize(std::vector<ClonePair>& pairs);

void write_report(std::span<const ClonePair> pairs, std::ostream& out, const DetectorConfig& cfg);
/// Reads a clone report; throws Error{MalformedReport}.
std::vector<ClonePair> read_report(std::istream& in);

}  // namespace polyclone
