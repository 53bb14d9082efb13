#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "polyclone/error.hpp"
#include "polyclone/language.hpp"

using namespace polyclone;

namespace {

std::string minimal(const std::string& extra_fields) {
    return R"({"languageId": "toy", "grammarRef": "lexical", "keywords": ["if", "while", "if"],)" + extra_fields +
           R"( "commentStripping": {"lineComment": ["//"], "blockComment": [], "stringDelimiters": ["\""]}})";
}

ErrorCode code_of(const std::string& text) {
    try {
        parse_language_config(text);
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorCode::Io;
}

}  // namespace

TEST(LanguageConfig, ShippedJavaHasFiftyKeywords) {
    const auto& java = fixtures::lang("java");
    EXPECT_EQ(java.language_id, "java");
    EXPECT_EQ(java.keywords.size(), 50u);
    ASSERT_EQ(java.file_extensions.size(), 1u);
    EXPECT_EQ(java.file_extensions[0], ".java");
    EXPECT_TRUE(java.is_keyword("while"));
    EXPECT_FALSE(java.is_keyword("String"));
}

TEST(LanguageConfig, DuplicateKeywordsCollapse) {
    const auto cfg = parse_language_config(minimal(R"( "fileExtensions": [".toy"],)"));
    EXPECT_EQ(cfg.keywords.size(), 2u);
}

TEST(LanguageConfig, MissingExtensionsIsMissingField) {
    EXPECT_EQ(code_of(minimal("")), ErrorCode::MissingField);
}

TEST(LanguageConfig, EmptyExtensionsRejected) {
    EXPECT_EQ(code_of(minimal(R"( "fileExtensions": [],)")), ErrorCode::EmptyExtensionList);
}

TEST(LanguageConfig, UnknownKeyAndBadJsonAreMalformed) {
    EXPECT_EQ(code_of(minimal(R"( "fileExtensions": [".toy"], "bogus": 1,)")), ErrorCode::MalformedConfig);
    EXPECT_EQ(code_of("{not json"), ErrorCode::MalformedConfig);
}

TEST(LanguageConfig, KeywordFileIsResolvedRelativeToConfig) {
    const auto& py = fixtures::lang("python");
    EXPECT_TRUE(py.is_keyword("lambda"));
    EXPECT_TRUE(py.is_keyword("def"));
    EXPECT_FALSE(py.is_keyword("#"));
}

TEST(LanguageConfig, ExtensionMatchingIsSuffixBased) {
    const auto& c = fixtures::lang("c");
    EXPECT_TRUE(c.matches_extension("dir/x.c"));
    EXPECT_TRUE(c.matches_extension("x.h"));
    EXPECT_FALSE(c.matches_extension("x.cpp"));
}

TEST(LanguageDir, MalformedEntryIsReportedNotThrown) {
    fixtures::TempDir dir("langdir");
    fixtures::write_file(dir / "good.json", minimal(R"( "fileExtensions": [".toy"],)"));
    fixtures::write_file(dir / "bad.json", "{\"languageId\": 3}");
    const auto entries = scan_language_dir(dir.path());
    ASSERT_EQ(entries.size(), 2u);
    EXPECT_FALSE(entries[0].config.has_value());  // bad.json sorts first
    EXPECT_FALSE(entries[0].error.empty());
    ASSERT_TRUE(entries[1].config.has_value());
    EXPECT_EQ(entries[1].config->language_id, "toy");
    EXPECT_THROW(find_language(dir.path(), "nope"), Error);
}

TEST(LanguageDir, ShipsAtLeastTwoParsedLanguages) {
    std::size_t grammar_backed = 0;
    for (const auto& e : scan_language_dir(fixtures::lang_dir())) {
        ASSERT_TRUE(e.config.has_value()) << e.path << ": " << e.error;
        if (e.config->grammar_ref != "lexical") ++grammar_backed;
    }
    EXPECT_GE(grammar_backed, 2u);
}
