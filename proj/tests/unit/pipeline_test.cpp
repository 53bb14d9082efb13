#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <random>

#include "fixtures.hpp"
#include "polyclone/benchmark/precision.hpp"
#include "polyclone/pipeline.hpp"
#include "polyclone/tokenbag.hpp"
#include "synth.hpp"

using namespace polyclone;

namespace {

using Sources = std::vector<std::pair<std::string, std::string>>;

RunOptions quiet() {
    RunOptions o;
    o.timing = false;
    return o;
}

const std::string kGarbage =
    "}}} ))) class class ;; @@ %% ) ( ] [ alpha beta gamma delta ))) (( epsilon zeta eta theta iota kappa "
    "lambda mu nu xi omicron pi rho sigma tau upsilon phi chi psi omega )))\n";

}  // namespace

TEST(Pipeline, IdenticalFilesAreOneFileLevelPair) {
    std::mt19937_64 rng(1);
    const auto src = synth::java_class(rng, "Twin");
    const auto result = run_sources({{"a/Twin.java", src}, {"b/Twin.java", src}}, fixtures::lang("java"), quiet());
    ASSERT_FALSE(result.pairs.empty());
    EXPECT_EQ(result.pairs.size(), 1u);
    EXPECT_EQ(result.pairs[0].granularity, 0u);
    EXPECT_DOUBLE_EQ(result.pairs[0].similarity, 1.0);
    EXPECT_EQ(exit_code_for(result.manifest), 0);
}

TEST(Pipeline, BinaryOnlyInputIsFatal) {
    const std::string binary("\x00\x01\x02garbage\xff", 11);
    const auto result = run_sources({{"x.java", binary}}, fixtures::lang("java"), quiet());
    EXPECT_TRUE(result.pairs.empty());
    EXPECT_EQ(result.manifest.skipped, 1u);
    EXPECT_EQ(exit_code_for(result.manifest), 1);
}

TEST(Pipeline, DegradedTwinsStillPairAtFileLevel) {
    std::mt19937_64 rng(2);
    Sources sources = {{"ok.java", synth::java_class(rng, "Ok")}, {"bad1.java", kGarbage}, {"bad2.java", kGarbage}};
    const auto result = run_sources(sources, fixtures::lang("java"), quiet());
    EXPECT_EQ(result.manifest.degraded, 2u);
    EXPECT_EQ(exit_code_for(result.manifest), 2);
    ASSERT_EQ(result.pairs.size(), 1u);
    EXPECT_EQ(result.pairs[0].left.file, "bad1.java");
    EXPECT_EQ(result.pairs[0].right.file, "bad2.java");
    EXPECT_EQ(result.pairs[0].granularity, 0u);
}

TEST(Pipeline, LineNumbersReferToOriginalFile) {
    const std::string body =
        "    int f(int[] xs) {\n"
        "        int acc = 0;\n"
        "        for (int i = 0; i < xs.length; i++) { acc += xs[i] * 2 + i; }\n"
        "        return acc;\n"
        "    }\n";
    const std::string a = "class A {\n" + body + "}\n";
    const std::string b = "class B {\n\n\n\n// moved down\n/* a\n block */\n" + body + "}\n";
    auto opts = quiet();
    opts.detector = DetectorConfig::with_granularity(opts.detector, "all");
    opts.detector.report_coarsest_only = false;
    opts.detector.min_tokens = 10;
    const auto result = run_sources({{"A.java", a}, {"B.java", b}}, fixtures::lang("java"), opts);
    // The method spans lines 2-6 in A and lines 8-12 in B.
    const auto method = std::find_if(result.pairs.begin(), result.pairs.end(), [](const ClonePair& p) {
        return p.left.file == "A.java" && p.left.start_line == 2 && p.left.end_line == 6;
    });
    ASSERT_NE(method, result.pairs.end());
    EXPECT_EQ(method->right.file, "B.java");
    EXPECT_EQ(method->right.start_line, 8u);
    EXPECT_EQ(method->right.end_line, 12u);
}

TEST(Pipeline, DirectoryRunMatchesInMemoryRunAndIsDeterministic) {
    fixtures::TempDir dir("pipe");
    std::mt19937_64 rng(3);
    Sources sources;
    for (int i = 0; i < 12; ++i) {
        auto src = synth::java_class(rng, "C" + std::to_string(i));
        const auto name = "pkg" + std::to_string(i % 3) + "/C" + std::to_string(i) + ".java";
        sources.emplace_back(name, src);
        sources.emplace_back("copy/" + name, i % 2 ? synth::reformat(src, rng) : synth::delete_statements(src, 0.1, rng));
    }
    for (const auto& [rel, text] : sources) fixtures::write_file(dir / ("in/" + rel), text);
    std::sort(sources.begin(), sources.end());

    const auto& java = fixtures::lang("java");
    const auto memory = run_sources(sources, java, quiet());
    auto opts = quiet();
    const auto on_disk = run_directory(dir / "in", java, opts, dir / "bags.msb");
    EXPECT_EQ(on_disk.pairs, memory.pairs);
    EXPECT_EQ(on_disk.manifest.to_json(), memory.manifest.to_json());
    EXPECT_GE(on_disk.pairs.size(), 12u);

    opts.jobs = 3;
    const auto threaded = run_directory(dir / "in", java, opts, dir / "bags2.msb");
    EXPECT_EQ(threaded.pairs, on_disk.pairs);
    EXPECT_EQ(fixtures::read_file(dir / "bags.msb"), fixtures::read_file(dir / "bags2.msb"));

    std::ifstream in(dir / "bags.msb");
    EXPECT_EQ(read_bags(in).size(), on_disk.manifest.bags);
}

TEST(Pipeline, InterruptBeforeStartYieldsPartialManifest) {
    fixtures::TempDir dir("intr");
    fixtures::write_file(dir / "in/A.java", "class A { int x; }\n");
    std::atomic<bool> stop{true};
    auto opts = quiet();
    opts.interrupt = &stop;
    const auto result = run_directory(dir / "in", fixtures::lang("java"), opts, dir / "bags.msb");
    EXPECT_TRUE(result.manifest.interrupted);
    EXPECT_EQ(exit_code_for(result.manifest), 1);
    EXPECT_NE(result.manifest.to_json().find("\"interrupted\": true"), std::string::npos);
}

TEST(Pipeline, PlantedCrossProblemClonesCountAsFalsePositives) {
    // Unit folder with problems pa and pb. pa has two near-identical files,
    // pb has one file planted as an exact copy of a pa file.
    std::mt19937_64 rng(9);
    const auto shared = synth::java_class(rng, "Main");
    const auto unrelated = synth::java_class(rng, "Main", {2, 3, 3, 5, 400});
    const Sources sources = {{"pa/s1.java", shared},
                             {"pa/s2.java", synth::reformat(shared, rng)},
                             {"pb/s1.java", shared},
                             {"pb/s2.java", unrelated}};
    auto opts = quiet();
    opts.detector = DetectorConfig::with_granularity(opts.detector, "file");
    const auto result = run_sources(sources, fixtures::lang("java"), opts);
    const auto score = bench::score_pair({"pa", "pb", 0.1, bench::PrecisionGroup::I}, result.pairs);
    // Three identical files: one intra-problem pair and two cross-problem pairs.
    EXPECT_EQ(score.true_positives, 1u);
    EXPECT_EQ(score.false_positives, 2u);
}
