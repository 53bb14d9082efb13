#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "polyclone/benchmark/sequence.hpp"
#include "polyclone/error.hpp"
#include "synth.hpp"

using namespace polyclone;
using namespace polyclone::bench;

namespace {

using Seq = std::vector<std::string>;

Seq random_seq(std::mt19937_64& rng, std::size_t max_len, int alphabet) {
    Seq s(rng() % (max_len + 1));
    for (auto& t : s) t = std::string(1, static_cast<char>('a' + rng() % alphabet));
    return s;
}

}  // namespace

TEST(NormalizeSeq, IdentifiersBecomeSentinel) {
    const std::vector<Token> tokens = {{TokenCategory::Keyword, "int", 1, 1},
                                       {TokenCategory::Identifier, "a", 1, 5},
                                       {TokenCategory::Other, "=", 1, 7},
                                       {TokenCategory::Identifier, "b", 1, 9}};
    EXPECT_EQ(normalize_seq(tokens), (Seq{"int", "ID", "=", "ID"}));
    const std::vector<Token> keywords = {{TokenCategory::Keyword, "return", 1, 1},
                                         {TokenCategory::Keyword, "this", 1, 8}};
    EXPECT_EQ(normalize_seq(keywords), (Seq{"return", "this"}));
}

TEST(LevTs, Examples) {
    const Seq xyz = {"x", "y", "z"};
    const Seq xz = {"x", "z"};
    EXPECT_EQ(lev_ts(xyz, Seq{}), 3u);
    EXPECT_EQ(lev_ts(Seq{}, xyz), 3u);
    EXPECT_EQ(lev_ts(xyz, xz), 1u);
    EXPECT_EQ(lev_ts(xyz, xyz), 0u);
    EXPECT_NEAR(lev_simi(xyz, xz), 2.0 / 3.0, 1e-12);
    EXPECT_DOUBLE_EQ(lev_simi(xyz, xyz), 1.0);
    EXPECT_DOUBLE_EQ(lev_simi(Seq{"a", "b"}, Seq{"c", "d"}), 0.0);
    EXPECT_THROW(lev_simi(Seq{}, Seq{}), Error);
}

TEST(LevTs, MatchesRecursiveOracleAndMetricAxioms) {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 3000; ++i) {
        const auto a = random_seq(rng, 9, 4);
        const auto b = random_seq(rng, 9, 4);
        const auto c = random_seq(rng, 9, 4);
        const auto ab = lev_ts(a, b);
        ASSERT_EQ(ab, oracle::levenshtein(a, b));
        EXPECT_EQ(ab, lev_ts(b, a));
        EXPECT_EQ(lev_ts(a, a), 0u);
        EXPECT_EQ(ab == 0, a == b);
        EXPECT_LE(ab, std::max(a.size(), b.size()));
        EXPECT_LE(lev_ts(a, c), ab + lev_ts(b, c));
    }
}

TEST(LevSimi, RenamedJavaScoresOne) {
    const auto& java = fixtures::lang("java");
    std::mt19937_64 rng(31);
    for (int i = 0; i < 10; ++i) {
        const auto src = synth::java_class(rng, "R");
        const auto renamed = synth::rename(src, rng, false);
        ASSERT_NE(src, renamed);
        const auto a = normalize_seq(parse_file(src, java).tokens);
        const auto b = normalize_seq(parse_file(renamed, java).tokens);
        EXPECT_DOUBLE_EQ(lev_simi(a, b), 1.0);
    }
}
