#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "aprkit/corpus.hpp"
#include "aprkit/encoding.hpp"
#include "aprkit/evaluation.hpp"
#include "aprkit/localize.hpp"
#include "aprkit/manifest.hpp"
#include "aprkit/protocol.hpp"
#include "aprkit/ranking.hpp"
#include "aprkit/text.hpp"
#include "aprkit/validation.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

// Failures of the pipeline itself (bad input files, unreachable generators).
struct domain_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

unsigned hardware_jobs()
{
    auto n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : n;
}

std::ifstream open_in(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw domain_error("cannot open " + path);
    return in;
}

std::ofstream open_out(const std::string& path)
{
    auto parent = fs::path(path).parent_path();
    if (!parent.empty())
        fs::create_directories(parent);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw domain_error("cannot write " + path);
    return out;
}

std::string slurp(const std::string& path)
{
    auto in = open_in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const CLI::Validator mode_check(
    [](std::string& text) {
        return aprkit::validation::parse_mode(text) ? std::string() : "unknown mode " + text;
    },
    "MODE");

aprkit::validation::Mode mode_from(const std::string& text)
{
    auto m = aprkit::validation::parse_mode(text);
    if (!m)
        throw domain_error("unknown mode " + text);
    return *m;
}

struct PreprocessArgs {
    std::string in, out, stats;
    std::size_t max_in = 512, max_out = 256;
    unsigned jobs = hardware_jobs();
};

int run_preprocess(const PreprocessArgs& a)
{
    auto in = open_in(a.in);
    auto corpus = aprkit::corpus::read_corpus(in);
    aprkit::WhitespaceTokenizer tokenizer;
    aprkit::corpus::PreprocessOptions opts { a.max_in, a.max_out, a.jobs };
    auto result = aprkit::corpus::preprocess(std::move(corpus), tokenizer, opts);
    auto out = open_out(a.out);
    aprkit::corpus::write_corpus(out, result.corpus);
    if (!a.stats.empty()) {
        auto stats = open_out(a.stats);
        aprkit::corpus::write_stats(stats, result.stats);
    }
    for (const auto& d : result.stats.diagnostics)
        std::cerr << "aprkit: " << d << '\n';
    return 0;
}

struct EncodeArgs {
    std::string in, out;
    std::size_t max_in = 512, max_out = 256;
    bool inference = false;
};

int run_encode(const EncodeArgs& a)
{
    auto in = open_in(a.in);
    auto corpus = aprkit::corpus::read_corpus(in);
    aprkit::WhitespaceTokenizer tokenizer;
    auto out = open_out(a.out);
    std::size_t rejected = 0;
    for (const auto& inst : corpus) {
        const auto prefix = std::string(aprkit::to_string(inst.language));
        const auto lines = aprkit::split_lines(inst.source);
        if (a.inference) {
            aprkit::encoding::write_encoded(
                out, aprkit::encoding::encode_for_inference(prefix, lines, inst.context, tokenizer, a.max_in));
            continue;
        }
        auto enc = aprkit::encoding::encode_for_training(inst, tokenizer, a.max_in, a.max_out);
        if (auto* s = std::get_if<aprkit::encoding::EncodedSample>(&enc))
            aprkit::encoding::write_encoded(out, *s);
        else
            ++rejected;
    }
    if (rejected)
        std::cerr << "aprkit: " << rejected << " instance(s) rejected for length\n";
    return 0;
}

struct GenerateArgs {
    std::string source, context, language = "Java", generators = "mock", out;
    std::size_t k = 5, t = 100, max_in = 512;
    std::uint64_t seed = 0;
};

int run_generate(const GenerateArgs& a)
{
    const auto lang = aprkit::parse_language(a.language);
    const auto source = slurp(a.source);
    const auto context = a.context.empty() ? std::string() : slurp(a.context);
    aprkit::generation::EnsembleConfig ensemble { a.k, a.t };
    auto gens = aprkit::bench::make_generators(a.generators, ensemble, a.seed);
    auto sample = aprkit::encoding::encode_for_inference(aprkit::to_string(lang), aprkit::split_lines(source), context,
                                                         *gens.tokenizer, a.max_in);
    auto ptrs = gens.pointers();
    auto result = aprkit::generation::generate_ensemble(sample, ptrs, ensemble);
    for (const auto& e : result.errors)
        std::cerr << "aprkit: " << e << '\n';
    auto out = open_out(a.out);
    aprkit::ranking::write_candidates(out, result.per_checkpoint);
    return 0;
}

struct RankArgs {
    std::vector<std::string> candidates, sources;
    std::string out, bug;
};

int run_rank(const RankArgs& a)
{
    if (a.candidates.size() != a.sources.size())
        throw domain_error("give one --source per --candidates file");
    std::vector<aprkit::ranking::RankedPatchList> lists;
    for (std::size_t h = 0; h < a.candidates.size(); ++h) {
        auto in = open_in(a.candidates[h]);
        auto per_checkpoint = aprkit::ranking::read_candidates(in);
        lists.push_back(aprkit::ranking::combine(per_checkpoint, slurp(a.sources[h])));
    }
    auto ranked = lists.size() == 1 ? lists.front() : aprkit::ranking::reduce_multi_hunk(lists);
    auto out = open_out(a.out);
    aprkit::ranking::write_ranked(out, ranked, a.bug.empty() ? std::nullopt : std::optional(a.bug));
    return 0;
}

struct ValidateArgs {
    std::string manifest, bug, ranked, out, mode = "first-plausible";
    std::size_t limit = 0;
};

int run_validate(const ValidateArgs& a)
{
    auto manifest = aprkit::bench::load_manifest(a.manifest);
    const aprkit::bench::ManifestBug* target = nullptr;
    for (const auto& b : manifest.bugs) {
        if (b.bug.id == a.bug)
            target = &b;
    }
    if (!target)
        throw domain_error("bug " + a.bug + " not in " + a.manifest);
    auto in = open_in(a.ranked);
    auto ranked = aprkit::ranking::read_ranked(in);
    const auto mode = mode_from(a.mode);
    auto report = aprkit::validation::validate_ranked(target->bug, ranked, mode, {},
                                                      a.limit ? std::optional(a.limit) : std::nullopt);
    auto out = open_out(a.out);
    ordered_json header;
    header["kind"] = "run";
    header["config"] = { { "manifest", fs::path(a.manifest).filename().string() },
                         { "bug", a.bug },
                         { "mode", aprkit::validation::to_string(mode) },
                         { "limit", a.limit } };
    out << header.dump() << '\n';
    for (const auto& o : report.outcomes) {
        ordered_json rec;
        rec["kind"] = "candidate";
        rec["position"] = o.candidate_position;
        rec["verdict"] = aprkit::validation::to_string(o.verdict);
        rec["wall_ms"] = o.wall_time.count();
        out << rec.dump() << '\n';
    }
    ordered_json tail;
    tail["kind"] = "bug";
    tail["bug"] = report.bug_id;
    std::vector<std::string> verdicts;
    for (const auto& o : report.outcomes)
        verdicts.push_back(aprkit::validation::to_string(o.verdict));
    tail["verdicts"] = verdicts;
    tail["npc"] = report.npc ? ordered_json(*report.npc) : ordered_json(nullptr);
    tail["time_to_plausible_ms"]
        = report.time_to_plausible ? ordered_json(report.time_to_plausible->count()) : ordered_json(nullptr);
    tail["timeouts"] = report.timeout_count;
    out << tail.dump() << '\n';
    return 0;
}

struct BenchArgs {
    std::string manifest, generators = "mock", mode = "first-plausible", out, labels;
    std::size_t k = 5, t = 100, max_in = 512, max_out = 256, limit = 0;
    std::uint64_t seed = 0;
    unsigned jobs = hardware_jobs();
    std::vector<std::size_t> thresholds = aprkit::bench::default_thresholds;
};

int run_bench(const BenchArgs& a)
{
    std::vector<aprkit::bench::Manifest> manifests;
    try {
        manifests = aprkit::bench::load_manifests(a.manifest);
    } catch (const aprkit::bench::manifest_error& e) {
        throw domain_error(e.what());
    }
    aprkit::bench::RunConfig config;
    config.seed = a.seed;
    config.ensemble = { a.k, a.t };
    config.max_in = a.max_in;
    config.max_out = a.max_out;
    config.mode = mode_from(a.mode);
    config.generators = a.generators;
    config.thresholds = a.thresholds;
    if (a.limit)
        config.candidate_limit = a.limit;
    config.jobs = a.jobs;

    std::optional<aprkit::bench::LabelSet> labels;
    if (!a.labels.empty()) {
        auto in = open_in(a.labels);
        labels = aprkit::bench::read_labels(in);
    }

    auto gens = aprkit::bench::make_generators(a.generators, config.ensemble, a.seed);
    auto report = aprkit::bench::run_bench(manifests, config, gens);

    fs::create_directories(a.out);
    const auto* label_ptr = labels ? &*labels : nullptr;
    {
        auto out = open_out((fs::path(a.out) / "report.jsonl").string());
        aprkit::bench::write_report(out, report, label_ptr);
    }
    {
        auto out = open_out((fs::path(a.out) / "timing.jsonl").string());
        aprkit::bench::write_timing(out, report);
    }
    {
        auto out = open_out((fs::path(a.out) / "summary.txt").string());
        auto summary = aprkit::bench::summarize(report.bugs, report.manifests, config, label_ptr);
        aprkit::bench::write_summary(out, summary, report.bugs, config);
    }
    for (const auto& b : report.bugs) {
        if (!b.error.empty())
            std::cerr << "aprkit: " << b.bug << ": " << b.error << '\n';
        for (const auto& e : b.generator_errors)
            std::cerr << "aprkit: " << b.bug << ": " << e << '\n';
    }
    return 0;
}

struct ReportArgs {
    std::string in, timing, labels, out;
};

int run_report(const ReportArgs& a)
{
    auto in = open_in(a.in);
    auto loaded = aprkit::bench::read_report(in);
    if (!a.timing.empty()) {
        auto t = open_in(a.timing);
        aprkit::bench::merge_timing(t, loaded.bugs);
    }
    std::optional<aprkit::bench::LabelSet> labels;
    if (!a.labels.empty()) {
        auto l = open_in(a.labels);
        labels = aprkit::bench::read_labels(l);
    }
    auto config = aprkit::bench::RunConfig::from_json(loaded.header.at("config"));
    auto manifests = aprkit::bench::manifests_from_header(loaded.header);
    auto summary = aprkit::bench::summarize(loaded.bugs, manifests, config, labels ? &*labels : nullptr);
    if (a.out.empty()) {
        aprkit::bench::write_summary(std::cout, summary, loaded.bugs, config);
    } else {
        auto out = open_out(a.out);
        aprkit::bench::write_summary(out, summary, loaded.bugs, config);
    }
    return 0;
}

struct LocalizeArgs {
    std::string buggy, fixed;
};

int run_localize(const LocalizeArgs& a)
{
    auto hunks = aprkit::bench::localize_files(a.buggy, a.fixed);
    for (const auto& h : hunks) {
        ordered_json rec;
        rec["file"] = h.file.string();
        rec["start"] = h.start;
        rec["end"] = h.end;
        rec["buggy"] = h.buggy_lines;
        rec["fix"] = h.fix_lines;
        std::cout << rec.dump() << '\n';
    }
    return 0;
}

struct ServeArgs {
    int checkpoint = 0;
    std::uint64_t seed = 0;
    std::size_t max_in = 512, max_out = 256;
    bool http = false;
    std::string host = "127.0.0.1", port_file;
    int port = 0;
};

int run_serve(const ServeArgs& a)
{
    aprkit::protocol::MockBackend backend(a.checkpoint, aprkit::bench::checkpoint_seed(a.seed, a.checkpoint),
                                          a.max_in, a.max_out);
    if (!a.http) {
        aprkit::protocol::serve_stdio(backend, std::cin, std::cout);
        return 0;
    }
    aprkit::protocol::serve_http(backend, a.host, a.port, [&](int port) {
        if (!a.port_file.empty()) {
            auto tmp = a.port_file + ".tmp";
            {
                std::ofstream f(tmp);
                f << port << '\n';
            }
            fs::rename(tmp, a.port_file);
        }
        std::cerr << "aprkit: serving on http://" << a.host << ':' << port << '\n';
    });
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    std::signal(SIGPIPE, SIG_IGN);

    CLI::App app { "aprkit: repair-candidate generation, ranking and validation" };
    app.require_subcommand(1);
    app.set_version_flag("--version", "aprkit 0.1.0");
    int status = 0;

    PreprocessArgs pre;
    auto* pre_cmd = app.add_subcommand("preprocess", "Clean a bug-fix corpus");
    pre_cmd->add_option("--in", pre.in, "Input corpus (JSONL)")->required();
    pre_cmd->add_option("--out", pre.out, "Cleaned corpus (JSONL)")->required();
    pre_cmd->add_option("--stats", pre.stats, "Per-stage counts (JSON)");
    pre_cmd->add_option("--max-in", pre.max_in)->capture_default_str();
    pre_cmd->add_option("--max-out", pre.max_out)->capture_default_str();
    pre_cmd->add_option("--jobs", pre.jobs)->check(CLI::PositiveNumber);
    pre_cmd->callback([&] { status = run_preprocess(pre); });

    EncodeArgs enc;
    auto* enc_cmd = app.add_subcommand("encode", "Tokenize a corpus for training export");
    enc_cmd->add_option("--in", enc.in)->required();
    enc_cmd->add_option("--out", enc.out)->required();
    enc_cmd->add_option("--max-in", enc.max_in)->capture_default_str();
    enc_cmd->add_option("--max-out", enc.max_out)->capture_default_str();
    enc_cmd->add_flag("--inference", enc.inference, "Truncate instead of rejecting; no targets");
    enc_cmd->callback([&] { status = run_encode(enc); });

    GenerateArgs gen;
    auto* gen_cmd = app.add_subcommand("generate", "Run the checkpoint ensemble on one hunk");
    gen_cmd->add_option("--source", gen.source, "File holding the buggy lines")->required();
    gen_cmd->add_option("--context", gen.context, "File holding the enclosing function");
    gen_cmd->add_option("--language", gen.language)->capture_default_str();
    gen_cmd->add_option("--generators", gen.generators, "mock, or ';'-separated exec:CMD / http://HOST:PORT")
        ->capture_default_str();
    gen_cmd->add_option("-k", gen.k)->capture_default_str()->check(CLI::PositiveNumber);
    gen_cmd->add_option("-t,--beam", gen.t)->capture_default_str()->check(CLI::PositiveNumber);
    gen_cmd->add_option("--max-in", gen.max_in)->capture_default_str();
    gen_cmd->add_option("--seed", gen.seed)->capture_default_str();
    gen_cmd->add_option("--out", gen.out)->required();
    gen_cmd->callback([&] { status = run_generate(gen); });

    RankArgs rank;
    auto* rank_cmd = app.add_subcommand("rank", "Merge checkpoint beams into a validation order");
    rank_cmd->add_option("--candidates", rank.candidates, "Candidates (JSONL), one file per hunk")->required();
    rank_cmd->add_option("--source", rank.sources, "Buggy hunk text, one file per hunk")->required();
    rank_cmd->add_option("--out", rank.out)->required();
    rank_cmd->add_option("--bug", rank.bug, "Bug id recorded in each line");
    rank_cmd->callback([&] { status = run_rank(rank); });

    ValidateArgs val;
    auto* val_cmd = app.add_subcommand("validate", "Validate a ranked list against one bug");
    val_cmd->add_option("--manifest", val.manifest)->required();
    val_cmd->add_option("--bug", val.bug)->required();
    val_cmd->add_option("--ranked", val.ranked)->required();
    val_cmd->add_option("--out", val.out)->required();
    val_cmd->add_option("--mode", val.mode, "first-plausible | exhaustive | compile-only")
        ->capture_default_str()
        ->check(mode_check);
    val_cmd->add_option("--limit", val.limit, "Validate at most this many candidates");
    val_cmd->callback([&] { status = run_validate(val); });

    BenchArgs bench;
    auto* bench_cmd = app.add_subcommand("bench", "Benchmark runs");
    bench_cmd->require_subcommand(1);
    auto* run_cmd = bench_cmd->add_subcommand("run", "Generate, rank and validate every manifest bug");
    run_cmd->add_option("--manifest", bench.manifest, "Manifest file or directory")->required();
    run_cmd->add_option("--generators", bench.generators)->capture_default_str();
    run_cmd->add_option("--mode", bench.mode)->capture_default_str()->check(mode_check);
    run_cmd->add_option("--out", bench.out)->required();
    run_cmd->add_option("-k", bench.k)->capture_default_str()->check(CLI::PositiveNumber);
    run_cmd->add_option("-t,--beam", bench.t)->capture_default_str()->check(CLI::PositiveNumber);
    run_cmd->add_option("--max-in", bench.max_in)->capture_default_str();
    run_cmd->add_option("--max-out", bench.max_out)->capture_default_str();
    run_cmd->add_option("--limit", bench.limit, "Validate at most this many candidates per bug");
    run_cmd->add_option("--seed", bench.seed)->capture_default_str();
    run_cmd->add_option("--jobs", bench.jobs)->check(CLI::PositiveNumber);
    run_cmd->add_option("--thresholds", bench.thresholds, "Top-X cut-offs, e.g. 1,5,10")->delimiter(',')->capture_default_str();
    run_cmd->add_option("--labels", bench.labels, "Correctness labels (JSONL)");
    run_cmd->callback([&] { status = run_bench(bench); });

    ReportArgs rep;
    auto* rep_cmd = app.add_subcommand("report", "Summary tables from a structured report");
    rep_cmd->add_option("--in", rep.in, "report.jsonl")->required();
    rep_cmd->add_option("--timing", rep.timing, "timing.jsonl");
    rep_cmd->add_option("--labels", rep.labels, "Correctness labels (JSONL)");
    rep_cmd->add_option("--out", rep.out, "Write here instead of stdout");
    rep_cmd->callback([&] { status = run_report(rep); });

    LocalizeArgs loc;
    auto* loc_cmd = app.add_subcommand("localize", "Hunks of a developer fix");
    loc_cmd->add_option("--buggy", loc.buggy)->required();
    loc_cmd->add_option("--fixed", loc.fixed)->required();
    loc_cmd->callback([&] { status = run_localize(loc); });

    ServeArgs serve;
    auto* serve_cmd = app.add_subcommand("serve-mock", "Serve a mock checkpoint over the generator protocol");
    serve_cmd->add_option("--checkpoint", serve.checkpoint)->capture_default_str();
    serve_cmd->add_option("--seed", serve.seed)->capture_default_str();
    serve_cmd->add_option("--max-in", serve.max_in)->capture_default_str();
    serve_cmd->add_option("--max-out", serve.max_out)->capture_default_str();
    serve_cmd->add_flag("--http", serve.http, "Serve POST /rpc instead of stdio");
    serve_cmd->add_option("--host", serve.host)->capture_default_str();
    serve_cmd->add_option("--port", serve.port, "0 picks a free port")->capture_default_str();
    serve_cmd->add_option("--port-file", serve.port_file, "Write the bound port here");
    serve_cmd->callback([&] { status = run_serve(serve); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e, std::cerr, std::cerr);
        std::cerr << '\n' << app.help() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "aprkit: error: " << e.what() << '\n';
        return 1;
    }
    return status;
}
