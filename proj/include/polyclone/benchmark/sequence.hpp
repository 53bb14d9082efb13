#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "polyclone/token.hpp"

namespace polyclone::bench {

inline constexpr std::string_view kIdentifierSentinel = "ID";

/// Token texts with every identifier replaced by kIdentifierSentinel.
std::vector<std::string> normalize_seq(std::span<const Token> tokens);

/// Unit-cost Levenshtein distance over token sequences.
std::size_t lev_ts(std::span<const std::string> a, std::span<const std::string> b);

/// (max(|a|,|b|) - lev_ts) / max(|a|,|b|). Throws Error{BothEmpty}.
double lev_simi(std::span<const std::string> a, std::span<const std::string> b);

}  // namespace polyclone::bench
