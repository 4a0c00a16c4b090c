#include <gtest/gtest.h>

#include <sstream>

#include "aprkit/ranking.hpp"
#include "oracles.hpp"

using aprkit::CandidatePatch;
using namespace aprkit::ranking;

namespace {

CandidatePatch cand(std::string text, std::size_t ckpt, std::size_t rank, double score)
{
    return { std::move(text), ckpt, rank, score, false };
}

std::vector<std::string> texts(const RankedPatchList& l)
{
    std::vector<std::string> out;
    for (const auto& p : l.patches)
        out.push_back(p.text);
    return out;
}

RankedPatchList list(std::vector<std::pair<std::string, double>> entries, bool inject = false)
{
    RankedPatchList l;
    if (inject)
        l.patches.push_back({ "", std::nullopt, 1, aprkit::injected_score, true });
    for (auto& [t, s] : entries)
        l.patches.push_back(cand(t, 0, l.patches.size() + 1, s));
    return l;
}

void expect_matches_oracle(const RankedPatchList& got, const std::vector<oracle::Ranked>& want)
{
    ASSERT_EQ(got.patches.size(), want.size());
    for (std::size_t i = 0; i < want.size(); ++i) {
        const auto& p = got.patches[i];
        EXPECT_EQ(p.text, want[i].text) << "position " << i + 1;
        EXPECT_EQ(p.checkpoint, want[i].checkpoint) << "position " << i + 1;
        EXPECT_EQ(p.injected, want[i].injected) << "position " << i + 1;
        if (!want[i].injected)
            EXPECT_EQ(p.score, want[i].score) << "position " << i + 1;
        EXPECT_EQ(p.rank, i + 1);
    }
}

}  // namespace

TEST(Normalize, Examples)
{
    EXPECT_EQ(normalize_patch_text("a\t b\n"), "a b");
    EXPECT_EQ(normalize_patch_text("   "), "");
    EXPECT_EQ(normalize_patch_text("x  =  1 ;"), "x = 1 ;");
}

TEST(Combine, SingletonGetsInjectedEmpty)
{
    std::vector<std::vector<CandidatePatch>> k { { cand("fix A", 0, 1, -0.1) } };
    auto out = combine(k, "buggy");
    EXPECT_EQ(texts(out), (std::vector<std::string> { "", "fix A" }));
    EXPECT_TRUE(out.patches[0].injected);
    EXPECT_FALSE(out.patches[0].checkpoint.has_value());
    EXPECT_EQ(out.patches[1].rank, 2u);
}

TEST(Combine, TwoCheckpointsInterleaveByRank)
{
    std::vector<std::vector<CandidatePatch>> k {
        { cand("p1", 0, 1, -0.5), cand("p2", 0, 2, -0.6) },
        { cand("p2", 1, 1, -0.3), cand("p3", 1, 2, -0.7) },
    };
    auto out = combine(k, "src");
    EXPECT_EQ(texts(out), (std::vector<std::string> { "", "p2", "p1", "p3" }));
    EXPECT_EQ(out.patches[1].checkpoint, 1u);
    EXPECT_DOUBLE_EQ(out.patches[1].score, -0.3);
}

TEST(Combine, AllEqualToSource)
{
    std::vector<std::vector<CandidatePatch>> k { { cand("x  = 1;", 0, 1, -0.1) }, { cand("x = 1;", 1, 1, -0.2) } };
    EXPECT_EQ(texts(combine(k, "x =\n1;")), (std::vector<std::string> { "" }));
}

TEST(Combine, GeneratedEmptyKeepsItsPlace)
{
    std::vector<std::vector<CandidatePatch>> k { { cand("a", 0, 1, -0.1), cand("  ", 0, 2, -0.2) } };
    auto out = combine(k, "src");
    EXPECT_EQ(texts(out), (std::vector<std::string> { "a", "" }));
    EXPECT_FALSE(out.patches[1].injected);
}

TEST(Combine, EmptySourceGetsNoInjection)
{
    std::vector<std::vector<CandidatePatch>> k { { cand("a", 0, 1, -0.1) } };
    EXPECT_EQ(texts(combine(k, " \n")), (std::vector<std::string> { "a" }));
}

TEST(Combine, NoCandidates)
{
    std::vector<std::vector<CandidatePatch>> k(3);
    EXPECT_EQ(texts(combine(k, "src")), (std::vector<std::string> { "" }));
}

TEST(Combine, RepeatedListsCollapse)
{
    std::vector<CandidatePatch> one { cand("a", 0, 1, -0.1), cand("b", 0, 2, -0.2) };
    std::vector<std::vector<CandidatePatch>> k { one, one, one };
    for (std::size_t c = 0; c < 3; ++c) {
        for (auto& p : k[c])
            p.checkpoint = c;
    }
    auto out = combine(k, "src");
    EXPECT_EQ(texts(out), (std::vector<std::string> { "", "a", "b" }));
    EXPECT_EQ(out.patches[1].checkpoint, 0u);
}

TEST(Combine, MatchesOracleOnRandomBeams)
{
    oracle::BeamGenerator gen(2024);
    for (int trial = 0; trial < 300; ++trial) {
        auto k = gen.uniform(1, 5);
        auto t = gen.uniform(1, 20);
        auto beams = gen.beams(k, t);
        auto source = gen.text();
        auto got = combine(beams, source);
        SCOPED_TRACE("trial " + std::to_string(trial));
        expect_matches_oracle(got, oracle::combine(beams, source));
        EXPECT_LE(got.patches.size(), k * t + 1);
        EXPECT_EQ(got.source_text, source);
    }
}

TEST(Reduce, ExampleKeepsBestScore)
{
    std::vector<RankedPatchList> h {
        list({ { "A", -0.2 }, { "B", -0.9 } }, true),
        list({ { "B", -0.4 }, { "C", -0.1 } }, true),
    };
    auto out = reduce_multi_hunk(h);
    ASSERT_EQ(texts(out), (std::vector<std::string> { "", "B" }));
    EXPECT_TRUE(out.patches[0].injected);
    EXPECT_DOUBLE_EQ(out.patches[1].score, -0.4);
}

TEST(Reduce, IdenticalListsUnchanged)
{
    auto l = list({ { "a", -0.1 }, { "b", -0.5 }, { "c", -0.7 } }, true);
    std::vector<RankedPatchList> h { l, l };
    EXPECT_EQ(texts(reduce_multi_hunk(h)), texts(l));
}

TEST(Reduce, DisjointGivesEmptyPatchOnly)
{
    std::vector<RankedPatchList> h { list({ { "a", -0.1 } }), list({ { "b", -0.1 } }) };
    auto out = reduce_multi_hunk(h);
    ASSERT_EQ(texts(out), (std::vector<std::string> { "" }));
    EXPECT_TRUE(out.patches[0].injected);
}

TEST(Reduce, TiesKeepFirstHunkOrder)
{
    std::vector<RankedPatchList> h {
        list({ { "x", -0.5 }, { "y", -0.5 } }),
        list({ { "y", -0.5 }, { "x", -0.5 } }),
    };
    EXPECT_EQ(texts(reduce_multi_hunk(h)), (std::vector<std::string> { "x", "y" }));
}

TEST(Reduce, SourceTextsJoined)
{
    auto a = list({ { "z", -0.1 } });
    auto b = list({ { "z", -0.2 } });
    a.source_text = "first";
    b.source_text = "second";
    std::vector<RankedPatchList> h { a, b };
    EXPECT_EQ(reduce_multi_hunk(h).source_text, "first\nsecond");
}

TEST(Reduce, MatchesOracleOnRandomLists)
{
    oracle::BeamGenerator gen(77);
    for (int trial = 0; trial < 200; ++trial) {
        auto hunks = gen.uniform(1, 4);
        std::vector<RankedPatchList> lists;
        std::vector<std::vector<oracle::Ranked>> olists;
        for (std::size_t h = 0; h < hunks; ++h) {
            auto beams = gen.beams(gen.uniform(1, 3), gen.uniform(1, 8));
            lists.push_back(combine(beams, gen.text()));
            olists.push_back(oracle::from_patches(lists.back().patches));
        }
        SCOPED_TRACE("trial " + std::to_string(trial));
        expect_matches_oracle(reduce_multi_hunk(lists), oracle::reduce(olists));
    }
}

TEST(RankedIo, RoundTrip)
{
    std::vector<std::vector<CandidatePatch>> k { { cand("a b", 0, 1, -0.25), cand("c", 0, 2, -1.5) },
                                                 { cand("d", 1, 1, -0.125) } };
    auto l = combine(k, "src");
    std::stringstream s;
    write_ranked(s, l, std::string("bug-1"));
    auto back = read_ranked(s);
    EXPECT_EQ(back.patches, l.patches);
}

TEST(RankedIo, InjectedHasNoScore)
{
    std::vector<std::vector<CandidatePatch>> k { { cand("a", 0, 1, -0.25) } };
    std::stringstream s;
    write_ranked(s, combine(k, "src"));
    std::string first;
    std::getline(s, first);
    EXPECT_EQ(first.find("score"), std::string::npos);
    EXPECT_EQ(first.find("checkpoint"), std::string::npos);
}

TEST(CandidatesIo, RoundTripAndGaps)
{
    std::vector<std::vector<CandidatePatch>> k { { cand("a", 0, 1, -0.5) }, {}, { cand("b", 2, 1, -0.1), cand("c", 2, 2, -0.2) } };
    std::stringstream s;
    write_candidates(s, k);
    auto back = read_candidates(s);
    EXPECT_EQ(back, k);
}

TEST(CandidatesIo, MalformedRejected)
{
    std::stringstream s("{\"checkpoint\": 0, \"text\": 3, \"score\": 1}\n");
    EXPECT_THROW(read_candidates(s), format_error);
}
