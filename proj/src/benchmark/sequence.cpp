#include "polyclone/benchmark/sequence.hpp"

#include <algorithm>
#include <numeric>

#include "polyclone/error.hpp"

namespace polyclone::bench {

std::vector<std::string> normalize_seq(std::span<const Token> tokens) {
    std::vector<std::string> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) {
        out.push_back(t.category == TokenCategory::Identifier ? std::string(kIdentifierSentinel) : t.text);
    }
    return out;
}

std::size_t lev_ts(std::span<const std::string> a, std::span<const std::string> b) {
    if (a.size() < b.size()) std::swap(a, b);
    if (b.empty()) return a.size();

    std::vector<std::size_t> prev(b.size() + 1);
    std::vector<std::size_t> cur(b.size() + 1);
    std::iota(prev.begin(), prev.end(), std::size_t{0});
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            if (a[i - 1] == b[j - 1]) {
                cur[j] = prev[j - 1];
            } else {
                cur[j] = 1 + std::min({prev[j], cur[j - 1], prev[j - 1]});
            }
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

double lev_simi(std::span<const std::string> a, std::span<const std::string> b) {
    const auto longest = std::max(a.size(), b.size());
    if (longest == 0) throw Error(ErrorCode::BothEmpty, "lev_simi of two empty sequences");
    return static_cast<double>(longest - lev_ts(a, b)) / static_cast<double>(longest);
}

}  // namespace polyclone::bench
