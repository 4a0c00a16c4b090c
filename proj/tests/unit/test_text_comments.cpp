#include <gtest/gtest.h>

#include "aprkit/comments.hpp"
#include "aprkit/language.hpp"
#include "aprkit/text.hpp"

using aprkit::Language;
using aprkit::corpus::remove_comments;

TEST(Text, NormalizeCollapsesAndTrims)
{
    EXPECT_EQ(aprkit::normalize_whitespace("  a\t\tb \n c  "), "a b c");
    EXPECT_EQ(aprkit::normalize_whitespace(" \n\t "), "");
    EXPECT_EQ(aprkit::strip_all_whitespace(" a b\tc\r\n"), "abc");
}

TEST(Text, SplitLinesIgnoresFinalNewline)
{
    EXPECT_EQ(aprkit::split_lines("a\nb\n"), (std::vector<std::string> { "a", "b" }));
    EXPECT_EQ(aprkit::split_lines("a\n\nb"), (std::vector<std::string> { "a", "", "b" }));
    EXPECT_TRUE(aprkit::split_lines("").empty());
}

TEST(Text, SplitWordsNeverYieldsEmpty)
{
    EXPECT_EQ(aprkit::split_words("  x  y\n"), (std::vector<std::string> { "x", "y" }));
    EXPECT_TRUE(aprkit::split_words("   ").empty());
}

TEST(Language, RoundTripAndUnknown)
{
    for (auto lang : { Language::Java, Language::Python, Language::C, Language::JavaScript })
        EXPECT_EQ(aprkit::parse_language(aprkit::to_string(lang)), lang);
    EXPECT_THROW(aprkit::parse_language("Cobol"), aprkit::unknown_language);
    EXPECT_FALSE(aprkit::try_parse_language("").has_value());
}

TEST(Comments, LineCommentInC)
{
    EXPECT_EQ(remove_comments("int x = 1; // set", Language::C), "int x = 1;");
}

TEST(Comments, HashInsidePythonString)
{
    EXPECT_EQ(remove_comments("s = \"# not a comment\"", Language::Python), "s = \"# not a comment\"");
}

TEST(Comments, BlockCommentsAndBlankedLines)
{
    EXPECT_EQ(remove_comments("a/*m*/b\n/*full line*/\nc", Language::C), "ab\nc");
}

TEST(Comments, PythonHashComment)
{
    EXPECT_EQ(remove_comments("x = 1  # one\n# gone\ny = 2", Language::Python), "x = 1\ny = 2");
}

TEST(Comments, JavaStringAndCharLiterals)
{
    EXPECT_EQ(remove_comments("String s = \"// no\"; char c = '/'; // yes", Language::Java),
              "String s = \"// no\"; char c = '/';");
    EXPECT_EQ(remove_comments("String s = \"a\\\"/*b*/\";", Language::Java), "String s = \"a\\\"/*b*/\";");
}

TEST(Comments, JavaScriptRegexAndTemplate)
{
    EXPECT_EQ(remove_comments("var r = /\\/\\/x/g; // c", Language::JavaScript), "var r = /\\/\\/x/g;");
    EXPECT_EQ(remove_comments("var t = `// ${a}`;", Language::JavaScript), "var t = `// ${a}`;");
    EXPECT_EQ(remove_comments("var q = a / b; // div", Language::JavaScript), "var q = a / b;");
}

TEST(Comments, BlankInputLinesKept)
{
    EXPECT_EQ(remove_comments("a;\n\nb;", Language::C), "a;\n\nb;");
}

TEST(Comments, UnterminatedBlockRunsToEnd)
{
    EXPECT_EQ(remove_comments("a; /* open\nstill comment", Language::C), "a;");
}

TEST(Comments, UnknownTagRejected)
{
    EXPECT_THROW(remove_comments("x", "Rust"), aprkit::unknown_language);
    EXPECT_EQ(remove_comments("x # y", "Python"), "x");
}
