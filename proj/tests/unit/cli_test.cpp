#include <gtest/gtest.h>

#include <json.hpp>
#include <random>

#include "fixtures.hpp"
#include "synth.hpp"

namespace {

std::string cli() { return std::string("\"") + POLYCLONE_CLI_PATH + "\""; }

std::string q(const std::filesystem::path& p) { return "\"" + p.string() + "\""; }

int run_cli(const std::string& args, const std::filesystem::path& out_file) {
    return fixtures::run(cli() + " " + args + " > " + q(out_file) + " 2>&1");
}

}  // namespace

TEST(Cli, LanguagesListsShippedConfigs) {
    fixtures::TempDir dir("cli-lang");
    ASSERT_EQ(run_cli("languages --json --lang-dir " + q(fixtures::lang_dir()), dir / "out.json"), 0);
    const auto doc = nlohmann::json::parse(fixtures::read_file(dir / "out.json"));
    ASSERT_TRUE(doc.is_array());
    EXPECT_GE(doc.size(), 2u);
}

TEST(Cli, LanguagesFlagsInvalidConfig) {
    fixtures::TempDir dir("cli-lang-bad");
    fixtures::write_file(dir / "langs/broken.json", "{ nope");
    fixtures::write_file(dir / "langs/java.json", fixtures::read_file(fixtures::lang_dir() / "java.json"));
    ASSERT_EQ(run_cli("languages --lang-dir " + q(dir / "langs"), dir / "out.txt"), 0);
    const auto text = fixtures::read_file(dir / "out.txt");
    EXPECT_NE(text.find("INVALID"), std::string::npos);
    EXPECT_NE(text.find("java"), std::string::npos);
}

TEST(Cli, DetectIdenticalFilesExitsZero) {
    fixtures::TempDir dir("cli-detect");
    std::mt19937_64 rng(1);
    const auto src = synth::java_class(rng, "T");
    fixtures::write_file(dir / "in/a/T.java", src);
    fixtures::write_file(dir / "in/b/T.java", src);
    ASSERT_EQ(run_cli("detect " + q(dir / "in") + " --out " + q(dir / "o") + " --no-timing", dir / "log"), 0);
    const auto report = fixtures::read_file(dir / "o/clones.csv");
    EXPECT_EQ(report.rfind("#polyclone v1 theta=0.7 minTokens=20\n", 0), 0u);
    EXPECT_NE(report.find("a/T.java,"), std::string::npos);
    const auto manifest = nlohmann::json::parse(fixtures::read_file(dir / "o/manifest.json"));
    EXPECT_EQ(manifest["languageId"], "java");
    EXPECT_FALSE(manifest.contains("timingMs"));

    // Byte-identical outputs on a second run.
    ASSERT_EQ(run_cli("detect " + q(dir / "in") + " --out " + q(dir / "o2") + " --no-timing --lang java",
                        dir / "log2"),
              0);
    for (const char* f : {"clones.csv", "manifest.json", "bags.msb"}) {
        EXPECT_EQ(fixtures::read_file(dir / "o" / f), fixtures::read_file(dir / "o2" / f)) << f;
    }
}

TEST(Cli, DetectBinariesExitsOneWithEmptyReport) {
    fixtures::TempDir dir("cli-bin");
    fixtures::write_file(dir / "in/x.java", std::string("\x00\x01\x02\x03", 4));
    EXPECT_EQ(run_cli("detect " + q(dir / "in") + " --lang java --out " + q(dir / "o"), dir / "log"), 1);
    const auto report = fixtures::read_file(dir / "o/clones.csv");
    EXPECT_EQ(std::count(report.begin(), report.end(), '\n'), 1);
}

TEST(Cli, DetectWithUnparsableFileExitsTwo) {
    fixtures::TempDir dir("cli-degraded");
    std::mt19937_64 rng(2);
    fixtures::write_file(dir / "in/Ok.java", synth::java_class(rng, "Ok"));
    fixtures::write_file(dir / "in/Bad.java",
                        "}}} ))) class class ;; @@ %% ) ( ] [ alpha beta gamma delta ))) (( epsilon zeta eta theta "
                        "iota kappa lambda mu nu xi omicron pi rho sigma tau upsilon phi chi psi omega )))\n");
    EXPECT_EQ(run_cli("detect " + q(dir / "in") + " --out " + q(dir / "o"), dir / "log"), 2);
    const auto manifest = nlohmann::json::parse(fixtures::read_file(dir / "o/manifest.json"));
    EXPECT_EQ(manifest["files"]["degraded"], 1);
}

TEST(Cli, UsageErrors) {
    fixtures::TempDir dir("cli-usage");
    EXPECT_NE(run_cli("detect", dir / "log"), 0);
    EXPECT_NE(run_cli("detect " + q(dir.path()) + " --lang klingon", dir / "log"), 0);
    EXPECT_NE(run_cli("detect " + q(dir.path()) + " --granularity 3..1 --lang java", dir / "log"), 0);
}

TEST(Cli, BenchRoundTrip) {
    fixtures::TempDir dir("cli-bench");
    std::mt19937_64 rng(5);
    synth::write_oj_corpus((dir / "corpus").string(), rng, {8, 4, "JAVA"});

    ASSERT_EQ(run_cli("bench build-recall --lang java --corpus " + q(dir / "corpus") + " --out " + q(dir / "recall"),
                        dir / "log"),
              0)
        << fixtures::read_file(dir / "log");
    const auto summary = nlohmann::json::parse(fixtures::read_file(dir / "recall/summary.json"));
    EXPECT_GT(summary["pairs"].get<int>(), 0);

    ASSERT_EQ(run_cli("bench score-recall --lang java --dataset " + q(dir / "recall"), dir / "score.json"), 0);
    const auto score = nlohmann::json::parse(fixtures::read_file(dir / "score.json"));
    ASSERT_EQ(score["buckets"].size(), 5u);
    // Every problem has a reformatted copy: top bucket, detected at file level.
    const auto& top = score["buckets"][4];
    EXPECT_GE(top["detected"].get<int>(), 8);

    ASSERT_EQ(run_cli("bench build-precision --lang java --seed 7 --pairs-per-group 2 --corpus " +
                            q(dir / "corpus") + " --out " + q(dir / "prec"),
                        dir / "log"),
              0);
    ASSERT_EQ(run_cli("bench score-precision --lang java --dataset " + q(dir / "prec"), dir / "pscore.json"), 0)
        << fixtures::read_file(dir / "pscore.json");
    const auto pscore = nlohmann::json::parse(fixtures::read_file(dir / "pscore.json"));
    EXPECT_EQ(pscore["groups"].size(), 3u);
}
