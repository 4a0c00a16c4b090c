#include <benchmark/benchmark.h>

#include "aprkit/comments.hpp"
#include "aprkit/corpus.hpp"
#include "aprkit/metrics.hpp"
#include "aprkit/ranking.hpp"
#include "aprkit/tokenizer.hpp"
#include "oracles.hpp"

namespace {

void BM_Combine(benchmark::State& state)
{
    oracle::BeamGenerator gen(1);
    auto beams = gen.beams(5, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(aprkit::ranking::combine(beams, "return a - b;"));
}
BENCHMARK(BM_Combine)->Arg(20)->Arg(100);

void BM_RemoveComments(benchmark::State& state)
{
    std::string code;
    for (int i = 0; i < 200; ++i)
        code += "int x" + std::to_string(i) + " = \"// s\"; /* block */ // line\n";
    for (auto _ : state)
        benchmark::DoNotOptimize(aprkit::corpus::remove_comments(code, aprkit::Language::Java));
    state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * code.size()));
}
BENCHMARK(BM_RemoveComments);

void BM_Preprocess(benchmark::State& state)
{
    aprkit::WhitespaceTokenizer tok;
    std::vector<aprkit::BugFixInstance> corpus;
    for (int i = 0; i < state.range(0); ++i)
        corpus.push_back({ "x = " + std::to_string(i % 700) + "; // c", "void f() {}", "x = " + std::to_string(i) + ";",
                           aprkit::Language::C });
    for (auto _ : state)
        benchmark::DoNotOptimize(aprkit::corpus::preprocess(corpus, tok));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Preprocess)->Arg(1000)->Arg(10000);

void BM_Bleu(benchmark::State& state)
{
    std::vector<std::string> refs { "if ( x >= 0 ) { return x ; } else { return - x ; }" };
    for (auto _ : state)
        benchmark::DoNotOptimize(aprkit::bench::bleu("if ( x > 0 ) { return x ; } return - x ;", refs));
}
BENCHMARK(BM_Bleu);

}  // namespace
BENCHMARK_MAIN();
