#include <gtest/gtest.h>

#include <fstream>

#include "aprkit/subprocess.hpp"
#include "fixtures.hpp"

namespace {

aprkit::proc::RunResult cli(const std::string& args, const std::filesystem::path& cwd)
{
    return aprkit::proc::run_shell(fixtures::cli().string() + " " + args, cwd, std::chrono::seconds(120));
}

}  // namespace

TEST(Cli, RankSucceeds)
{
    fixtures::TempDir tmp;
    std::ofstream(tmp.path() / "cands.jsonl") << "{\"checkpoint\":0,\"rank\":1,\"text\":\"a + b\",\"score\":-0.1}\n"
                                                 "{\"checkpoint\":1,\"rank\":1,\"text\":\"a  +  b\",\"score\":-0.2}\n";
    std::ofstream(tmp.path() / "src.txt") << "a - b\n";
    auto r = cli("rank --candidates cands.jsonl --source src.txt --out ranked.jsonl --bug b1", tmp.path());
    EXPECT_EQ(r.exit_code, 0) << r.output;
    auto out = fixtures::slurp(tmp.path() / "ranked.jsonl");
    EXPECT_EQ(std::count(out.begin(), out.end(), '\n'), 2);
}

TEST(Cli, UsageErrorsExitTwo)
{
    fixtures::TempDir tmp;
    EXPECT_EQ(cli("rank --no-such-flag", tmp.path()).exit_code, 2);
    EXPECT_EQ(cli("bench run --out x", tmp.path()).exit_code, 2);
    EXPECT_EQ(cli("validate --mode sometimes --manifest m --bug b --ranked r --out o", tmp.path()).exit_code, 2);
}

TEST(Cli, DomainErrorsExitOne)
{
    fixtures::TempDir tmp;
    EXPECT_EQ(cli("bench run --manifest missing.json --out out", tmp.path()).exit_code, 1);
    std::ofstream(tmp.path() / "same.txt") << "x\n";
    EXPECT_EQ(cli("localize --buggy same.txt --fixed same.txt", tmp.path()).exit_code, 1);
}

TEST(Cli, PreprocessWritesStats)
{
    fixtures::TempDir tmp;
    std::ofstream(tmp.path() / "in.jsonl")
        << "{\"source\":\"a - b\",\"context\":\"\",\"target\":\"a + b\",\"language\":\"Java\"}\n"
           "{\"source\":\"a  - b\",\"context\":\"\",\"target\":\"a + b\",\"language\":\"Java\"}\n"
           "{\"source\":\"x\",\"context\":\"\",\"target\":\"\",\"language\":\"C\"}\n";
    auto r = cli("preprocess --in in.jsonl --out out.jsonl --stats stats.json", tmp.path());
    ASSERT_EQ(r.exit_code, 0) << r.output;
    auto out = fixtures::slurp(tmp.path() / "out.jsonl");
    EXPECT_EQ(std::count(out.begin(), out.end(), '\n'), 1);
    EXPECT_NE(fixtures::slurp(tmp.path() / "stats.json").find("after_dedup"), std::string::npos);
}

TEST(Cli, LocalizePrintsHunk)
{
    fixtures::TempDir tmp;
    auto dir = fixtures::dir() / "localize";
    auto r = cli("localize --buggy " + (dir / "flatten_buggy.py").string() + " --fixed " + (dir / "flatten_fixed.py").string(),
                 tmp.path());
    EXPECT_EQ(r.exit_code, 0) << r.output;
    EXPECT_NE(r.output.find("yield flatten(x)"), std::string::npos);
}

TEST(Cli, BenchRunAndReport)
{
    fixtures::TempDir tmp;
    auto manifest = (fixtures::dir() / "toy" / "manifest.json").string();
    auto r = cli("bench run --manifest " + manifest + " -k 2 -t 5 --seed 1 --jobs 2 --out run", tmp.path());
    ASSERT_EQ(r.exit_code, 0) << r.output;
    for (const char* f : { "report.jsonl", "timing.jsonl", "summary.txt" })
        EXPECT_TRUE(std::filesystem::exists(tmp.path() / "run" / f)) << f;
    auto rep = cli("report --in run/report.jsonl --timing run/timing.jsonl", tmp.path());
    EXPECT_EQ(rep.exit_code, 0) << rep.output;
    EXPECT_NE(rep.output.find("toy"), std::string::npos);
}
