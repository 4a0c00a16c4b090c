#include <gtest/gtest.h>

#include <fstream>

#include "json.hpp"

#include "aprkit/manifest.hpp"
#include "aprkit/ranking.hpp"
#include "aprkit/subprocess.hpp"
#include "aprkit/validation.hpp"
#include "fixtures.hpp"

using namespace aprkit::validation;
namespace fs = std::filesystem;

namespace {

void write(const fs::path& p, const std::string& text)
{
    fs::create_directories(p.parent_path());
    std::ofstream(p, std::ios::binary) << text;
}

aprkit::ranking::RankedPatchList ranked(const std::vector<std::string>& texts)
{
    aprkit::ranking::RankedPatchList l;
    for (const auto& t : texts)
        l.patches.push_back({ t, 0, l.patches.size() + 1, -0.1 * static_cast<double>(l.patches.size()), false });
    return l;
}

// Project whose single file "step.sh" holds the candidate; build runs it.
BugUnderRepair script_bug(const fs::path& root)
{
    write(root / "proj" / "step.sh", "true\n");
    BugUnderRepair b;
    b.id = "script/1";
    b.language = aprkit::Language::C;
    b.workdir = root / "proj";
    b.hunks = { { "step.sh", 1, 1 } };
    b.build_cmd = "sh step.sh";
    b.timeout = std::chrono::seconds(20);
    return b;
}

ValidatorOptions scratch(const fixtures::TempDir& tmp)
{
    ValidatorOptions o;
    o.scratch_root = tmp.path() / "scratch";
    return o;
}

}  // namespace

TEST(ApplyPatch, ReplaceOneLine)
{
    fixtures::TempDir tmp;
    write(tmp.path() / "f.txt", "a\nb\nc");
    Hunk h[] = { { "f.txt", 2, 2 } };
    auto files = apply_patch(tmp.path(), h, "B");
    EXPECT_EQ(files.size(), 1u);
    EXPECT_EQ(fixtures::slurp(tmp.path() / "f.txt"), "a\nB\nc");
}

TEST(ApplyPatch, EmptyPatchDeletes)
{
    fixtures::TempDir tmp;
    write(tmp.path() / "f.txt", "a\nb\nc\n");
    Hunk h[] = { { "f.txt", 2, 2 } };
    apply_patch(tmp.path(), h, "");
    EXPECT_EQ(fixtures::slurp(tmp.path() / "f.txt"), "a\nc\n");
}

TEST(ApplyPatch, SamePatchIntoTwoFiles)
{
    fixtures::TempDir tmp;
    write(tmp.path() / "A.java", "class A {\n    x = 1;\n}\n");
    write(tmp.path() / "sub/B.java", "class B {\n  void f() {\n    y = 2;\n  }\n}\n");
    Hunk h[] = { { "A.java", 2, 2 }, { "sub/B.java", 3, 3 } };
    auto files = apply_patch(tmp.path(), h, "inside_letter = true;");
    EXPECT_EQ(files.size(), 2u);
    EXPECT_EQ(fixtures::slurp(tmp.path() / "A.java"), "class A {\n    inside_letter = true;\n}\n");
    EXPECT_EQ(fixtures::slurp(tmp.path() / "sub/B.java"), "class B {\n  void f() {\n    inside_letter = true;\n  }\n}\n");
}

TEST(ApplyPatch, TwoHunksSameFileBottomUp)
{
    fixtures::TempDir tmp;
    write(tmp.path() / "f.py", "a\nb\nc\nd\n");
    Hunk h[] = { { "f.py", 1, 1 }, { "f.py", 3, 4 } };
    apply_patch(tmp.path(), h, "X\nY");
    EXPECT_EQ(fixtures::slurp(tmp.path() / "f.py"), "X\nY\nb\nX\nY\n");
}

TEST(ApplyPatch, InsertionBeforeLine)
{
    fixtures::TempDir tmp;
    write(tmp.path() / "f.c", "int f() {\n    return 1;\n}\n");
    Hunk h[] = { { "f.c", 2, 1 } };
    apply_patch(tmp.path(), h, "x++;");
    EXPECT_EQ(fixtures::slurp(tmp.path() / "f.c"), "int f() {\n    x++;\n    return 1;\n}\n");
}

TEST(ApplyPatch, IndentedLinesKeptVerbatim)
{
    fixtures::TempDir tmp;
    write(tmp.path() / "f.py", "def f():\n    if a:\n        b()\n");
    Hunk h[] = { { "f.py", 2, 3 } };
    apply_patch(tmp.path(), h, "if not a:\n        c()");
    EXPECT_EQ(fixtures::slurp(tmp.path() / "f.py"), "def f():\n    if not a:\n        c()\n");
}

TEST(ApplyPatch, Errors)
{
    fixtures::TempDir tmp;
    write(tmp.path() / "f.txt", "a\nb\n");
    Hunk missing[] = { { "nope.txt", 1, 1 } };
    EXPECT_THROW(apply_patch(tmp.path(), missing, "x"), application_error);
    Hunk range[] = { { "f.txt", 2, 5 } };
    EXPECT_THROW(apply_patch(tmp.path(), range, "x"), application_error);
    Hunk overlap[] = { { "f.txt", 1, 2 }, { "f.txt", 2, 2 } };
    EXPECT_THROW(apply_patch(tmp.path(), overlap, "x"), application_error);
}

TEST(Verdicts, NamesRoundTrip)
{
    for (auto v : { Verdict::compile_error, Verdict::trigger_fail, Verdict::regression_fail, Verdict::timeout,
                    Verdict::plausible, Verdict::compiled, Verdict::harness_error })
        EXPECT_EQ(parse_verdict(to_string(v)), v);
    EXPECT_FALSE(parse_verdict("maybe").has_value());
    EXPECT_EQ(parse_mode("first-plausible"), Mode::first_plausible);
    EXPECT_EQ(parse_mode("compile_only"), Mode::compile_only);
    EXPECT_FALSE(parse_mode("all").has_value());
}

TEST(FailedTests, ParsesBothStyles)
{
    auto ids = failed_tests("ok a\nFAIL: test_one\nFAILED tests/x.py::test_two - assert\nFAILURES\n");
    EXPECT_EQ(ids, (std::vector<std::string> { "test_one", "tests/x.py::test_two" }));
}

TEST(Subprocess, CapturesAndTimesOut)
{
    fixtures::TempDir tmp;
    auto r = aprkit::proc::run_shell("echo hi; echo err >&2; exit 3", tmp.path(), std::chrono::seconds(5));
    EXPECT_EQ(r.exit_code, 3);
    EXPECT_NE(r.output.find("hi"), std::string::npos);
    EXPECT_NE(r.output.find("err"), std::string::npos);
    auto slow = aprkit::proc::run_shell("sleep 10", tmp.path(), std::chrono::milliseconds(300));
    EXPECT_TRUE(slow.timed_out);
    EXPECT_LT(slow.elapsed, std::chrono::seconds(5));
}

TEST(Validate, CandidatesAreIsolated)
{
    fixtures::TempDir tmp;
    auto bug = script_bug(tmp.path());
    bug.build_cmd = "test ! -e marker && sh step.sh";
    auto report = validate_ranked(bug, ranked({ "touch marker; exit 1", "touch marker; true", "true" }),
                                  Mode::exhaustive, scratch(tmp));
    ASSERT_EQ(report.outcomes.size(), 3u);
    EXPECT_EQ(report.outcomes[0].verdict, Verdict::compile_error);
    EXPECT_EQ(report.outcomes[1].verdict, Verdict::plausible);
    EXPECT_EQ(report.outcomes[2].verdict, Verdict::plausible);
    EXPECT_FALSE(fs::exists(bug.workdir / "marker"));
    EXPECT_EQ(fixtures::slurp(bug.workdir / "step.sh"), "true\n");
    EXPECT_TRUE(fs::is_empty(tmp.path() / "scratch"));
}

TEST(Validate, TimeoutIsDeadline)
{
    fixtures::TempDir tmp;
    auto bug = script_bug(tmp.path());
    bug.timeout = std::chrono::seconds(1);
    bug.test_cmd = "sleep 0.7";
    bug.trigger_cmds = { "sleep 0.7" };
    auto slow = validate_candidate(bug, "sleep 10", 1, Mode::first_plausible, scratch(tmp));
    EXPECT_EQ(slow.verdict, Verdict::timeout);
    EXPECT_LT(slow.wall_time, std::chrono::seconds(5));
    auto split = validate_candidate(bug, "true", 1, Mode::first_plausible, scratch(tmp));
    EXPECT_EQ(split.verdict, Verdict::timeout);
}

TEST(Validate, StagesInOrder)
{
    fixtures::TempDir tmp;
    auto bug = script_bug(tmp.path());
    bug.trigger_cmds = { "test -e built" };
    bug.test_cmd = "test -e tested";
    EXPECT_EQ(validate_candidate(bug, "exit 1", 1, Mode::first_plausible, scratch(tmp)).verdict,
              Verdict::compile_error);
    EXPECT_EQ(validate_candidate(bug, "true", 1, Mode::first_plausible, scratch(tmp)).verdict, Verdict::trigger_fail);
    EXPECT_EQ(validate_candidate(bug, "touch built", 1, Mode::first_plausible, scratch(tmp)).verdict,
              Verdict::regression_fail);
    EXPECT_EQ(validate_candidate(bug, "touch built tested", 1, Mode::first_plausible, scratch(tmp)).verdict,
              Verdict::plausible);
    EXPECT_EQ(validate_candidate(bug, "true", 1, Mode::compile_only, scratch(tmp)).verdict, Verdict::compiled);
}

TEST(Validate, FlakyExclusionsReachTheSuite)
{
    fixtures::TempDir tmp;
    auto bug = script_bug(tmp.path());
    bug.flaky_exclusions = { "t_flaky", "t_other" };
    bug.test_cmd = "test \"{exclude}\" = \"t_flaky t_other\" && test \"$APRKIT_EXCLUDE\" = \"t_flaky t_other\"";
    EXPECT_EQ(validate_candidate(bug, "true", 1, Mode::first_plausible, scratch(tmp)).verdict, Verdict::plausible);
}

TEST(Validate, NonSelectiveSuiteClassification)
{
    fixtures::TempDir tmp;
    auto bug = script_bug(tmp.path());
    bug.selective_tests = false;
    bug.trigger_tests = { "t_trigger" };
    bug.flaky_exclusions = { "t_flaky" };
    bug.test_cmd = "sh step.sh";
    bug.build_cmd.clear();
    auto verdict = [&](const std::string& script) {
        return validate_candidate(bug, script, 1, Mode::first_plausible, scratch(tmp)).verdict;
    };
    EXPECT_EQ(verdict("true"), Verdict::plausible);
    EXPECT_EQ(verdict("echo 'FAIL: t_trigger'; echo 'FAIL: t_x'; exit 1"), Verdict::trigger_fail);
    EXPECT_EQ(verdict("echo 'FAILED t_x'; exit 1"), Verdict::regression_fail);
    EXPECT_EQ(verdict("echo 'FAIL: t_flaky'; exit 1"), Verdict::plausible);
    EXPECT_EQ(verdict("exit 1"), Verdict::regression_fail);
}

TEST(Validate, ApplicationFailureIsHarnessError)
{
    fixtures::TempDir tmp;
    auto bug = script_bug(tmp.path());
    bug.hunks = { { "step.sh", 5, 5 } };
    auto o = validate_candidate(bug, "true", 1, Mode::first_plausible, scratch(tmp));
    EXPECT_EQ(o.verdict, Verdict::harness_error);
    EXPECT_FALSE(o.detail.empty());
}

TEST(ValidateRanked, FirstPlausibleStopsExhaustiveContinues)
{
    fixtures::TempDir tmp;
    auto bug = script_bug(tmp.path());
    auto list = ranked({ "exit 1", "exit 2", "true", "exit 3", "true" });
    auto first = validate_ranked(bug, list, Mode::first_plausible, scratch(tmp));
    EXPECT_EQ(first.outcomes.size(), 3u);
    EXPECT_EQ(first.npc, 3u);
    auto all = validate_ranked(bug, list, Mode::exhaustive, scratch(tmp));
    EXPECT_EQ(all.outcomes.size(), 5u);
    EXPECT_EQ(all.plausible_positions(), (std::vector<std::size_t> { 3, 5 }));
    auto limited = validate_ranked(bug, list, Mode::exhaustive, scratch(tmp), 2);
    EXPECT_EQ(limited.outcomes.size(), 2u);
    EXPECT_FALSE(limited.npc.has_value());
}

TEST(ValidateRanked, NoPlausibleMeansNoNpc)
{
    fixtures::TempDir tmp;
    auto bug = script_bug(tmp.path());
    auto r = validate_ranked(bug, ranked({ "exit 1", "exit 1" }), Mode::first_plausible, scratch(tmp));
    EXPECT_EQ(r.outcomes.size(), 2u);
    EXPECT_FALSE(r.npc.has_value());
    EXPECT_FALSE(r.time_to_plausible.has_value());
}

TEST(ValidateRanked, ToyProjectsGiveExpectedVerdicts)
{
    fixtures::TempDir tmp;
    auto manifest = aprkit::bench::load_manifest(fixtures::dir() / "toy" / "manifest.json");
    auto expected = nlohmann::json::parse(fixtures::slurp(fixtures::dir() / "toy" / "expected.json"));
    ASSERT_EQ(manifest.bugs.size(), expected.size());
    for (const auto& mb : manifest.bugs) {
        SCOPED_TRACE(mb.bug.id);
        const auto& want = expected.at(mb.bug.id);
        auto report = validate_ranked(mb.bug, ranked(want.at("candidates").get<std::vector<std::string>>()),
                                      Mode::first_plausible, scratch(tmp));
        std::vector<std::string> got;
        for (const auto& o : report.outcomes)
            got.push_back(to_string(o.verdict));
        EXPECT_EQ(got, want.at("verdicts").get<std::vector<std::string>>());
        EXPECT_EQ(report.npc, want.at("npc").get<std::size_t>());
    }
}
