#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "polyclone/segment.hpp"
#include "polyclone/spt.hpp"
#include "polyclone/token.hpp"

namespace polyclone {

using KeywordSet = std::set<std::string, std::less<>>;

/// True iff some immediate child of node covers only keyword tokens.
bool keywords_filter(const SptNode& node, const KeywordSet& keywords,
                     std::span<const Token> tokens);

/// One bag per SPT node (pre-order), optionally restricted to nodes passing
/// the keyword filter; bags with fewer than min_tokens retained tokens are
/// dropped.
std::vector<TokenBag> generate_bags(const SptNode& root, std::span<const Token> tokens,
                                    const std::string& file, const KeywordSet* keywords,
                                    std::size_t min_tokens);

/// Streaming writer for the versioned bag file. The trailer carries the
/// record count and a checksum; call finish() once all bags are written.
class BagWriter {
public:
    BagWriter(std::ostream& out, std::string_view language_id, std::size_t min_tokens);
    void write(const TokenBag& bag);
    void finish();
    [[nodiscard]] std::size_t count() const noexcept { return count_; }

private:
    std::ostream& out_;
    std::uint64_t hash_;
    std::size_t count_ = 0;
    bool finished_ = false;
};

struct BagFileHeader {
    std::string language_id;
    std::size_t min_tokens = 0;
};

void write_bags(std::span<const TokenBag> bags, std::ostream& out, std::string_view language_id,
                std::size_t min_tokens);

/// Reads a bag file, verifying the trailer. `keep` filters records before
/// they are materialized. Throws Error{CorruptBagFile}.
std::vector<TokenBag> read_bags(std::istream& in, BagFileHeader* header = nullptr,
                                const std::function<bool(std::uint32_t granularity)>& keep = {});

std::string percent_encode(std::string_view text, std::string_view reserved);
std::string percent_decode(std::string_view text);

}  // namespace polyclone
