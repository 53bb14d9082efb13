#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "polyclone/preprocess.hpp"

using namespace polyclone;

namespace {

const CommentRules& java_rules() { return fixtures::lang("java").comments; }

}  // namespace

TEST(Preprocess, LineCommentAndBlankRunCollapse) {
    EXPECT_EQ(preprocess("int a; // note\n\n\n\nint b;", java_rules()).text, "int a;\n\nint b;");
}

TEST(Preprocess, CommentMarkersInsideStringsSurvive) {
    const std::string src = "s = \"// not a comment\";";
    EXPECT_EQ(preprocess(src, java_rules()).text, src);
    const std::string escaped = "s = \"a\\\" /* b */\";";
    EXPECT_EQ(preprocess(escaped, java_rules()).text, escaped);
}

TEST(Preprocess, BlockCommentRemoved) {
    EXPECT_EQ(preprocess("/* a */ x = 1;", java_rules()).text, " x = 1;");
}

TEST(Preprocess, MultiLineBlockCommentKeepsLineCount) {
    const auto out = preprocess("a /* one\ntwo\nthree */ b\nc", java_rules(), {false}).text;
    EXPECT_EQ(out, "a\n\n b\nc");
}

TEST(Preprocess, BlockCommentBetweenTokensLeavesSeparator) {
    EXPECT_EQ(preprocess("a/*x*/b", java_rules()).text, "a b");
}

TEST(Preprocess, UnterminatedBlockCommentIsReported) {
    const auto r = preprocess("x;\n/* open\nmore", java_rules());
    ASSERT_EQ(r.unterminated_block_comments.size(), 1u);
    EXPECT_EQ(r.unterminated_block_comments[0], 2u);
}

TEST(Preprocess, PythonTripleQuotedStringsAreProtected) {
    const auto& py = fixtures::lang("python").comments;
    const std::string src = "x = '''a # b\n# c'''\ny = 1  # tail\n";
    EXPECT_EQ(preprocess(src, py).text, "x = '''a # b\n# c'''\ny = 1\n");
}

TEST(Preprocess, WithoutCollapseLineCountIsPreserved) {
    const std::string src = "a;\n\n\n\n// c\nb;\n";
    const auto out = preprocess(src, java_rules(), {false}).text;
    EXPECT_EQ(std::count(out.begin(), out.end(), '\n'), std::count(src.begin(), src.end(), '\n'));
}

TEST(Preprocess, IdempotentOnRandomInputs) {
    std::mt19937_64 rng(7);
    const std::vector<std::string> pieces = {"a", " ", "\n", "//", "/*", "*/", "\"", "\\", "'", "x;", "\n\n"};
    std::uniform_int_distribution<std::size_t> pick(0, pieces.size() - 1);
    for (int round = 0; round < 2000; ++round) {
        std::string src;
        const int n = static_cast<int>(rng() % 30);
        for (int i = 0; i < n; ++i) src += pieces[pick(rng)];
        const auto once = preprocess(src, java_rules()).text;
        EXPECT_EQ(preprocess(once, java_rules()).text, once) << "input: " << src;
    }
}
