#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "polyclone/detector.hpp"
#include "polyclone/error.hpp"

using namespace polyclone;

namespace {

TokenBag bag(std::string file, std::uint32_t s, std::uint32_t e, std::uint32_t g, std::vector<std::string> texts) {
    return make_bag({std::move(file), s, e, g}, texts);
}

std::vector<std::string> repeat(const std::string& prefix, int n) {
    std::vector<std::string> out;
    for (int i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
    return out;
}

DetectorConfig all_levels(double theta = 0.7) {
    DetectorConfig cfg;
    cfg.theta = theta;
    cfg.mode = GranularityMode::All;
    cfg.report_coarsest_only = false;
    cfg.min_tokens = 1;
    return cfg;
}

std::vector<TokenBag> random_group(std::mt19937_64& rng, std::size_t n, std::uint32_t levels) {
    std::vector<TokenBag> bags;
    for (std::size_t i = 0; i < n; ++i) {
        const auto g = static_cast<std::uint32_t>(rng() % levels);
        bags.push_back(oracle::random_bag(rng, "f" + std::to_string(i % 17), static_cast<std::uint32_t>(i + 1), g,
                                          4 + rng() % 8, 3 + rng() % 25));
    }
    return bags;
}

}  // namespace

TEST(OverlapSimilarity, HandCountedHalf) {
    const auto a = bag("a", 1, 1, 0, {"x", "y", "z", "w", "v"});
    const auto b = bag("b", 1, 1, 0, {"x", "y", "z", "p", "q", "r"});
    EXPECT_DOUBLE_EQ(overlap_similarity(a, b), 0.5);
    EXPECT_EQ(oracle::intersection(a, b), 3u);
}

TEST(OverlapSimilarity, IdentityAndDisjoint) {
    const auto a = bag("a", 1, 1, 0, {"x", "x", "y"});
    EXPECT_DOUBLE_EQ(overlap_similarity(a, a), 1.0);
    EXPECT_DOUBLE_EQ(overlap_similarity(a, bag("b", 1, 1, 0, {"p", "q"})), 0.0);
}

TEST(OverlapSimilarity, MultisetSemantics) {
    const auto a = bag("a", 1, 1, 0, {"x", "x", "x", "y"});
    const auto b = bag("b", 1, 1, 0, {"x", "y", "y", "y"});
    EXPECT_DOUBLE_EQ(overlap_similarity(a, b), 0.5);
    EXPECT_EQ(multiset_overlap(a.counts, b.counts), 2u);
}

TEST(OverlapSimilarity, RandomProperties) {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 5000; ++i) {
        const auto a = oracle::random_bag(rng, "a", 1, 0, 6, 12);
        const auto b = oracle::random_bag(rng, "b", 1, 0, 6, 12);
        const double ab = overlap_similarity(a, b);
        EXPECT_DOUBLE_EQ(ab, overlap_similarity(b, a));
        EXPECT_GE(ab, 0.0);
        EXPECT_LE(ab, 1.0);
        EXPECT_DOUBLE_EQ(ab, oracle::similarity(a, b));
        EXPECT_EQ(ab == 1.0, a.counts == b.counts);
    }
}

TEST(CandidateIndex, PrefixLengthAtThetaOne) {
    const std::vector<TokenBag> group = {bag("a", 1, 1, 0, {"x", "y", "z"}), bag("b", 1, 1, 0, {"z", "y", "x"}),
                                         bag("c", 1, 1, 0, {"x", "y", "q"})};
    const CandidateIndex index(group, 1.0);
    EXPECT_EQ(index.prefix_length(3), 1u);
    const auto cands = index.probe(0);
    EXPECT_NE(std::find(cands.begin(), cands.end(), 1u), cands.end());
    DetectorConfig cfg = all_levels(1.0);
    const auto pairs = detect(group, cfg);
    ASSERT_EQ(pairs.size(), 1u);
    EXPECT_EQ(pairs[0].left.file, "a");
    EXPECT_EQ(pairs[0].right.file, "b");
}

TEST(CandidateIndex, SingletonHasNoCandidates) {
    const std::vector<TokenBag> group = {bag("a", 1, 1, 0, {"x", "y"})};
    const CandidateIndex index(group, 0.7);
    EXPECT_TRUE(index.probe(0).empty());
}

TEST(CandidateIndex, NeverMissesATrueMatch) {
    std::mt19937_64 rng(23);
    for (int round = 0; round < 200; ++round) {
        const auto group = random_group(rng, 1 + rng() % 60, 1);
        const double theta = 0.3 + 0.7 * std::uniform_real_distribution<double>(0, 1)(rng);
        const CandidateIndex index(group, theta);
        for (std::uint32_t i = 0; i < group.size(); ++i) {
            const auto cands = index.probe(i);
            EXPECT_TRUE(std::is_sorted(cands.begin(), cands.end()));
            for (std::uint32_t j = 0; j < group.size(); ++j) {
                if (i == j || oracle::similarity(group[i], group[j]) < theta) continue;
                EXPECT_TRUE(std::binary_search(cands.begin(), cands.end(), j))
                    << "round " << round << " theta " << theta << " missing " << i << "," << j;
            }
        }
    }
}

TEST(CandidateIndex, MatchesReportEachQualifyingPairOnce) {
    std::mt19937_64 rng(29);
    CandidateIndex::Scratch scratch;
    for (int round = 0; round < 200; ++round) {
        const auto group = random_group(rng, 1 + rng() % 60, 1);
        const double theta = 0.3 + 0.7 * std::uniform_real_distribution<double>(0, 1)(rng);
        const CandidateIndex index(group, theta);
        std::set<std::pair<std::uint32_t, std::uint32_t>> found;
        for (std::uint32_t i = 0; i < group.size(); ++i) {
            for (const auto& [j, shared] : index.matches(i, scratch)) {
                EXPECT_EQ(shared, oracle::intersection(group[i], group[j]));
                EXPECT_TRUE(found.insert(std::minmax(i, j)).second) << "pair reported twice";
            }
        }
        std::set<std::pair<std::uint32_t, std::uint32_t>> expected;
        for (std::uint32_t i = 0; i < group.size(); ++i)
            for (std::uint32_t j = i + 1; j < group.size(); ++j)
                if (oracle::similarity(group[i], group[j]) >= theta) expected.emplace(i, j);
        EXPECT_EQ(found, expected) << "round " << round << " theta " << theta;
    }
}

TEST(Detect, IdenticalFilesFormOnePair) {
    const auto words = repeat("w", 30);
    const std::vector<TokenBag> bags = {bag("x.java", 1, 40, 0, words), bag("y.java", 1, 40, 0, words)};
    const auto pairs = detect(bags, DetectorConfig{});
    ASSERT_EQ(pairs.size(), 1u);
    EXPECT_DOUBLE_EQ(pairs[0].similarity, 1.0);
    EXPECT_EQ(pairs[0].granularity, 0u);
}

TEST(Detect, ThresholdIsInclusive) {
    // 69 of 100 shared tokens: below 0.7. 70 of 100: reported.
    auto a = repeat("s", 100);
    auto b69 = repeat("s", 69);
    auto b70 = repeat("s", 70);
    for (auto* v : {&b69, &b70}) {
        while (v->size() < 100) v->push_back("u" + std::to_string(v->size()));
    }
    DetectorConfig cfg = all_levels(0.7);
    EXPECT_TRUE(detect(std::vector<TokenBag>{bag("a", 1, 1, 0, a), bag("b", 1, 1, 0, b69)}, cfg).empty());
    EXPECT_EQ(detect(std::vector<TokenBag>{bag("a", 1, 1, 0, a), bag("b", 1, 1, 0, b70)}, cfg).size(), 1u);
}

TEST(Detect, NoCrossGranularityPairs) {
    const auto words = repeat("w", 25);
    const std::vector<TokenBag> bags = {bag("a", 1, 30, 0, words), bag("b", 5, 9, 1, words)};
    EXPECT_TRUE(detect(bags, all_levels()).empty());
}

TEST(Detect, IntraFilePairsAllowed) {
    const auto words = repeat("w", 25);
    const std::vector<TokenBag> bags = {bag("a", 1, 10, 1, words), bag("a", 20, 30, 1, words)};
    EXPECT_EQ(detect(bags, all_levels()).size(), 1u);
}

TEST(Detect, MatchesOracleAndIsPermutationInvariant) {
    std::mt19937_64 rng(41);
    for (int round = 0; round < 100; ++round) {
        auto bags = random_group(rng, 1 + rng() % 150, 3);
        const double theta = 0.5 + 0.1 * static_cast<double>(rng() % 5);
        const auto cfg = all_levels(theta);
        const auto expected = oracle::all_pairs(bags, theta);
        const auto got = detect(bags, cfg, 1 + round % 3);
        ASSERT_EQ(got.size(), expected.size()) << "round " << round;
        for (std::size_t i = 0; i < got.size(); ++i) {
            EXPECT_EQ(got[i].left, expected[i].left);
            EXPECT_EQ(got[i].right, expected[i].right);
            EXPECT_DOUBLE_EQ(got[i].similarity, expected[i].similarity);
        }
        std::shuffle(bags.begin(), bags.end(), rng);
        EXPECT_EQ(detect(bags, cfg), got);

        // Raising theta never adds pairs.
        const auto stricter = detect(bags, all_levels(std::min(1.0, theta + 0.15)));
        for (const auto& p : stricter) EXPECT_NE(std::find(got.begin(), got.end(), p), got.end());
    }
}

TEST(Detect, GranularityModes) {
    const auto words = repeat("w", 25);
    const std::vector<TokenBag> bags = {bag("a", 1, 30, 0, words), bag("b", 1, 30, 0, words),
                                        bag("a", 40, 50, 5, words), bag("b", 40, 50, 5, words)};
    DetectorConfig cfg;
    cfg.report_coarsest_only = false;
    EXPECT_EQ(detect(bags, cfg).size(), 1u);  // default range stops at 4
    EXPECT_EQ(detect(bags, DetectorConfig::with_granularity(cfg, "file")).size(), 1u);
    EXPECT_EQ(detect(bags, DetectorConfig::with_granularity(cfg, "all")).size(), 2u);
    EXPECT_EQ(detect(bags, DetectorConfig::with_granularity(cfg, "5..5")).size(), 1u);
    EXPECT_THROW(DetectorConfig::with_granularity(cfg, "3..1"), std::invalid_argument);
    EXPECT_THROW(DetectorConfig::with_granularity(cfg, "x"), std::invalid_argument);
}

TEST(SuppressNested, FunctionPairHidesBodyPair) {
    const auto fn = repeat("f", 30);
    const auto body = repeat("f", 25);
    const std::vector<TokenBag> bags = {bag("a", 10, 20, 0, fn), bag("b", 30, 40, 0, fn),
                                        bag("a", 11, 19, 1, body), bag("b", 31, 39, 1, body)};
    DetectorConfig cfg;
    const auto pairs = detect(bags, cfg);
    ASSERT_EQ(pairs.size(), 1u);
    EXPECT_EQ(pairs[0].granularity, 0u);
    cfg.report_coarsest_only = false;
    EXPECT_EQ(detect(bags, cfg).size(), 2u);
}

TEST(SuppressNested, UnrelatedAndOrphanPairsSurvive) {
    const auto words = repeat("w", 25);
    const auto other = repeat("o", 25);
    const std::vector<TokenBag> bags = {bag("a", 1, 50, 0, words), bag("b", 1, 50, 0, words),
                                        bag("c", 3, 9, 1, other), bag("d", 3, 9, 1, other),
                                        // nested in a and b, but a/b differ only at level 1 below
                                        bag("e", 1, 50, 0, repeat("e", 25)), bag("f", 1, 50, 0, repeat("z", 25)),
                                        bag("e", 2, 9, 1, repeat("k", 25)), bag("f", 2, 9, 1, repeat("k", 25))};
    const auto pairs = detect(bags, DetectorConfig{});
    EXPECT_EQ(pairs.size(), 3u);
}

TEST(SuppressNested, MatchesOracle) {
    std::mt19937_64 rng(77);
    for (int round = 0; round < 300; ++round) {
        std::vector<ClonePair> pairs;
        const int n = static_cast<int>(rng() % 25);
        for (int i = 0; i < n; ++i) {
            ClonePair p;
            p.granularity = static_cast<std::uint32_t>(rng() % 3);
            const auto s1 = static_cast<std::uint32_t>(1 + rng() % 20);
            const auto s2 = static_cast<std::uint32_t>(1 + rng() % 20);
            p.left = {"f" + std::to_string(rng() % 2), s1, s1 + static_cast<std::uint32_t>(rng() % 15), p.granularity};
            p.right = {"g" + std::to_string(rng() % 2), s2, s2 + static_cast<std::uint32_t>(rng() % 15), p.granularity};
            p.similarity = 1.0;
            pairs.push_back(p);
        }
        canonicalize(pairs);
        auto got = suppress_nested(pairs);
        canonicalize(got);
        auto expected = oracle::suppress(pairs);
        canonicalize(expected);
        EXPECT_EQ(got, expected) << "round " << round;
    }
}

TEST(Report, RoundTripAndHeader) {
    std::vector<ClonePair> pairs;
    ClonePair p;
    p.left = {"dir/a,1.java", 1, 9, 0};
    p.right = {"b.java", 2, 8, 0};
    p.similarity = 0.87654;
    pairs.push_back(p);
    std::stringstream buf;
    write_report(pairs, buf, DetectorConfig{});
    const auto text = buf.str();
    EXPECT_EQ(text.substr(0, text.find('\n')), "#polyclone v1 theta=0.7 minTokens=20");
    EXPECT_NE(text.find(",0.8765\n"), std::string::npos);
    const auto back = read_report(buf);
    ASSERT_EQ(back.size(), 1u);
    EXPECT_EQ(back[0].left, p.left);
    EXPECT_EQ(back[0].right, p.right);
    EXPECT_NEAR(back[0].similarity, 0.8765, 1e-12);

    std::istringstream bad("#polyclone v1 theta=0.7 minTokens=20\na,1,2,b\n");
    EXPECT_THROW(read_report(bad), Error);
}
