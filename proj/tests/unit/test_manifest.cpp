#include <gtest/gtest.h>

#include <fstream>

#include "aprkit/manifest.hpp"
#include "aprkit/text.hpp"
#include "fixtures.hpp"

using namespace aprkit::bench;
namespace fs = std::filesystem;

namespace {

fs::path write_manifest(const fixtures::TempDir& tmp, const std::string& text)
{
    auto p = tmp.path() / "m.json";
    std::ofstream(p) << text;
    return p;
}

struct Row {
    const char* benchmark;
    BenchmarkStats stats;
};

}  // namespace

TEST(Manifest, ToyProjectsLoad)
{
    auto m = load_manifest(fixtures::dir() / "toy" / "manifest.json");
    EXPECT_EQ(m.benchmark, "toy");
    ASSERT_EQ(m.bugs.size(), 6u);
    const auto& first = m.bugs[0];
    EXPECT_EQ(first.bug.id, "c-compile");
    EXPECT_EQ(first.bug.language, aprkit::Language::C);
    EXPECT_TRUE(first.bug.workdir.is_absolute());
    EXPECT_TRUE(fs::exists(first.bug.workdir / "sum.c"));
    ASSERT_EQ(first.bug.hunks.size(), 1u);
    EXPECT_EQ(first.bug.timeout, std::chrono::seconds(60));
    ASSERT_EQ(first.hunk_sources.size(), 1u);
    EXPECT_NE(first.hunk_sources[0].find("i < n"), std::string::npos);
    EXPECT_FALSE(first.hunk_contexts[0].empty());
    EXPECT_EQ(first.developer_fixes[0], "for (int i = 1; i <= n; i++)");
}

TEST(Manifest, LocalizeFromFixedTree)
{
    fixtures::TempDir tmp;
    fs::create_directories(tmp.path() / "buggy");
    fs::create_directories(tmp.path() / "fixed");
    fs::copy(fixtures::dir() / "localize" / "flatten_buggy.py", tmp.path() / "buggy" / "flatten.py");
    fs::copy(fixtures::dir() / "localize" / "flatten_fixed.py", tmp.path() / "fixed" / "flatten.py");
    auto p = write_manifest(tmp, R"({"benchmark": "qb", "language": "Python", "bugs": [
        {"id": "FLATTEN", "workdir": "buggy",
         "localize": {"fixed": "fixed", "files": ["flatten.py"], "context": "auto"},
         "test_cmd": "true"}]})");
    auto m = load_manifest(p);
    ASSERT_EQ(m.bugs.size(), 1u);
    const auto& b = m.bugs[0];
    EXPECT_EQ(b.bug.language, aprkit::Language::Python);
    ASSERT_EQ(b.bug.hunks.size(), 1u);
    EXPECT_EQ(b.bug.hunks[0].start, 7u);
    EXPECT_EQ(aprkit::normalize_whitespace(b.hunk_sources[0]), "yield flatten(x)");
    ASSERT_TRUE(b.developer_fixes[0].has_value());
    EXPECT_EQ(aprkit::normalize_whitespace(*b.developer_fixes[0]), "yield x");
    EXPECT_NE(b.hunk_contexts[0].find("def flatten(arr):"), std::string::npos);
}

TEST(Manifest, ErrorsNameTheProblem)
{
    fixtures::TempDir tmp;
    auto expect_error = [&](const std::string& text, const std::string& needle) {
        auto p = write_manifest(tmp, text);
        try {
            load_manifest(p);
            ADD_FAILURE() << "accepted: " << text;
        } catch (const manifest_error& e) {
            EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
        }
    };
    expect_error("{", "m.json");
    expect_error(R"({"bugs": []})", "benchmark");
    expect_error(R"({"benchmark": "x", "bugs": [{"id": "a", "language": "Go", "workdir": ".", "hunks": []}]})", "Go");
    expect_error(R"({"benchmark": "x", "language": "C", "bugs": [{"id": "a", "workdir": ".",
                   "hunks": [{"file": "none.c", "start": 1, "end": 1}]}]})", "none.c");
    EXPECT_THROW(load_manifest(tmp.path() / "missing.json"), manifest_error);
}

TEST(Manifest, StatsArithmetic)
{
    EXPECT_TRUE((BenchmarkStats { 395, 2, 393, 331 }.consistent()));
    EXPECT_FALSE((BenchmarkStats { 395, 2, 394, 331 }.consistent()));
    EXPECT_FALSE((BenchmarkStats { 10, 0, 10, 11 }.consistent()));
}

TEST(Manifest, BenchmarkTableRows)
{
    const Row rows[] = {
        { "Defects4J (v1.2)", { 395, 2, 393, 331 } },  { "Defects4J (v2.0)", { 444, 0, 444, 357 } },
        { "Bears", { 251, 0, 251, 83 } },              { "QuixBugs (Java)", { 40, 0, 40, 37 } },
        { "QuixBugs (Python)", { 40, 0, 40, 40 } },    { "Codeflaws", { 3903, 7, 3896, 3863 } },
        { "ManyBugs", { 185, 4, 181, 130 } },          { "BugAID", { 12, 0, 12, 10 } },
    };
    auto ms = load_manifests(fixtures::data() / "manifests");
    ASSERT_EQ(ms.size(), 8u);
    BenchmarkStats total;
    for (std::size_t i = 0; i < ms.size(); ++i) {
        SCOPED_TRACE(ms[i].benchmark);
        EXPECT_EQ(ms[i].benchmark, rows[i].benchmark);
        ASSERT_TRUE(ms[i].stats.has_value());
        const auto& s = *ms[i].stats;
        EXPECT_EQ(s.bugs, rows[i].stats.bugs);
        EXPECT_EQ(s.removed, rows[i].stats.removed);
        EXPECT_EQ(s.remained, rows[i].stats.remained);
        EXPECT_EQ(s.attempted, rows[i].stats.attempted);
        EXPECT_TRUE(s.consistent());
        total.bugs += s.bugs;
        total.removed += s.removed;
        total.remained += s.remained;
        total.attempted += s.attempted;
    }
    EXPECT_EQ(total.bugs, 5270u);
    EXPECT_EQ(total.removed, 13u);
    EXPECT_EQ(total.remained, 5257u);
    EXPECT_EQ(total.attempted, 4851u);
}
