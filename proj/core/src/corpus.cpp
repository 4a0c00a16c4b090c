#include "aprkit/corpus.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <thread>
#include <unordered_set>

#include "json.hpp"

#include "aprkit/encoding.hpp"
#include "aprkit/text.hpp"

namespace aprkit::corpus {

namespace {

// Runs fn(i) for i in [0, count) across `jobs` threads in contiguous chunks.
template <typename Fn>
void parallel_for(std::size_t count, unsigned jobs, Fn&& fn)
{
    if (jobs <= 1 || count < 2 * jobs) {
        for (std::size_t i = 0; i < count; ++i)
            fn(i);
        return;
    }
    std::vector<std::jthread> workers;
    const std::size_t chunk = (count + jobs - 1) / jobs;
    for (unsigned w = 0; w < jobs; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(count, begin + chunk);
        if (begin >= end)
            break;
        workers.emplace_back([&fn, begin, end] {
            for (std::size_t i = begin; i < end; ++i)
                fn(i);
        });
    }
}

void filter_in_place(std::vector<BugFixInstance>& corpus, const std::vector<char>& keep)
{
    std::size_t out = 0;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        if (keep[i]) {
            if (out != i)
                corpus[out] = std::move(corpus[i]);
            ++out;
        }
    }
    corpus.resize(out);
}

}  // namespace

std::string dedup_key(const BugFixInstance& instance)
{
    std::string key = strip_all_whitespace(instance.source);
    key.push_back('\n');
    key.append(strip_all_whitespace(instance.context));
    key.push_back('\n');
    key.append(strip_all_whitespace(instance.target));
    return key;
}

PreprocessResult preprocess(std::vector<BugFixInstance> corpus, const Tokenizer& tokenizer,
                            const PreprocessOptions& options)
{
    PreprocessResult result;
    auto& stats = result.stats;
    stats.ingested = corpus.size();

    // 1. comment removal
    parallel_for(corpus.size(), options.jobs, [&](std::size_t i) {
        auto& inst = corpus[i];
        inst.source = remove_comments(inst.source, inst.language);
        inst.target = remove_comments(inst.target, inst.language);
    });
    stats.after_comment_removal = corpus.size();

    // 2. dedup, sequential so that the first occurrence wins
    {
        std::unordered_set<std::string> seen;
        std::vector<char> keep(corpus.size(), 0);
        for (std::size_t i = 0; i < corpus.size(); ++i)
            keep[i] = seen.insert(dedup_key(corpus[i])).second ? 1 : 0;
        filter_in_place(corpus, keep);
    }
    stats.after_dedup = corpus.size();

    // 3. identical source and target, which covers both-empty and
    //    comment-only differences since comments are already gone
    {
        std::vector<char> keep(corpus.size(), 0);
        parallel_for(corpus.size(), options.jobs, [&](std::size_t i) {
            keep[i] = strip_all_whitespace(corpus[i].source) != strip_all_whitespace(corpus[i].target);
        });
        filter_in_place(corpus, keep);
    }
    stats.after_identity_drop = corpus.size();

    // 4. empty target
    {
        std::vector<char> keep(corpus.size(), 0);
        for (std::size_t i = 0; i < corpus.size(); ++i)
            keep[i] = !strip_all_whitespace(corpus[i].target).empty();
        filter_in_place(corpus, keep);
    }
    stats.after_empty_target_drop = corpus.size();

    // 5. size filter; context is never a reason to reject
    {
        std::vector<char> keep(corpus.size(), 0);
        std::vector<std::string> errors(corpus.size());
        parallel_for(corpus.size(), options.jobs, [&](std::size_t i) {
            const auto& inst = corpus[i];
            try {
                auto lines = split_lines(inst.source);
                auto head = encoding::head_length(to_string(inst.language), lines, tokenizer);
                auto target = encoding::target_length(inst.target, tokenizer);
                keep[i] = head <= options.max_in && target <= options.max_out;
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        });
        for (std::size_t i = 0; i < errors.size(); ++i) {
            if (errors[i].empty())
                continue;
            ++stats.tokenizer_failures;
            stats.diagnostics.push_back("instance " + std::to_string(i) + ": " + errors[i]);
        }
        filter_in_place(corpus, keep);
    }
    stats.after_size_filter = corpus.size();

    result.corpus = std::move(corpus);
    return result;
}

std::vector<BugFixInstance> read_corpus(std::istream& in)
{
    std::vector<BugFixInstance> corpus;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty())
            continue;
        try {
            auto j = nlohmann::json::parse(line);
            BugFixInstance inst;
            inst.source = j.at("source").get<std::string>();
            inst.context = j.value("context", std::string {});
            inst.target = j.value("target", std::string {});
            inst.language = parse_language(j.at("language").get<std::string>());
            corpus.push_back(std::move(inst));
        } catch (const std::exception& e) {
            throw corpus_format_error("corpus line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return corpus;
}

void write_corpus(std::ostream& out, const std::vector<BugFixInstance>& corpus)
{
    for (const auto& inst : corpus) {
        nlohmann::ordered_json j;
        j["source"] = inst.source;
        j["context"] = inst.context;
        j["target"] = inst.target;
        j["language"] = std::string(to_string(inst.language));
        out << j.dump() << '\n';
    }
}

void write_stats(std::ostream& out, const CorpusStats& stats)
{
    nlohmann::ordered_json j;
    j["ingested"] = stats.ingested;
    j["after_comment_removal"] = stats.after_comment_removal;
    j["after_dedup"] = stats.after_dedup;
    j["after_identity_drop"] = stats.after_identity_drop;
    j["after_empty_target_drop"] = stats.after_empty_target_drop;
    j["after_size_filter"] = stats.after_size_filter;
    j["tokenizer_failures"] = stats.tokenizer_failures;
    j["diagnostics"] = stats.diagnostics;
    out << j.dump(2) << '\n';
}

}  // namespace aprkit::corpus
