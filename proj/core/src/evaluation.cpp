#include "aprkit/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <istream>
#include <ostream>
#include <set>
#include <thread>
#include <unordered_map>

#include "aprkit/encoding.hpp"
#include "aprkit/mock_generator.hpp"
#include "aprkit/protocol.hpp"
#include "aprkit/text.hpp"

namespace aprkit::bench {

using nlohmann::json;
using nlohmann::ordered_json;
using namespace std::chrono;

namespace {

template <typename T>
json optional_json(const std::optional<T>& v)
{
    return v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> optional_from(const json& rec, const char* key)
{
    if (!rec.contains(key) || rec[key].is_null())
        return std::nullopt;
    return rec[key].get<T>();
}

}  // namespace

ordered_json RunConfig::to_json() const
{
    ordered_json j;
    j["seed"] = seed;
    j["k"] = ensemble.k;
    j["t"] = ensemble.t;
    j["max_in"] = max_in;
    j["max_out"] = max_out;
    j["mode"] = validation::to_string(mode);
    j["generators"] = generators;
    j["thresholds"] = thresholds;
    j["candidate_limit"] = candidate_limit ? ordered_json(*candidate_limit) : ordered_json(nullptr);
    return j;
}

RunConfig RunConfig::from_json(const json& rec)
{
    RunConfig c;
    c.seed = rec.value("seed", std::uint64_t { 0 });
    c.ensemble.k = rec.value("k", std::size_t { 5 });
    c.ensemble.t = rec.value("t", std::size_t { 100 });
    c.max_in = rec.value("max_in", std::size_t { 512 });
    c.max_out = rec.value("max_out", std::size_t { 256 });
    if (auto m = validation::parse_mode(rec.value("mode", "first-plausible")))
        c.mode = *m;
    c.generators = rec.value("generators", "mock");
    if (rec.contains("thresholds"))
        c.thresholds = rec["thresholds"].get<std::vector<std::size_t>>();
    c.candidate_limit = optional_from<std::size_t>(rec, "candidate_limit");
    return c;
}

std::vector<generation::PatchGenerator*> GeneratorSet::pointers() const
{
    std::vector<generation::PatchGenerator*> out;
    for (const auto& g : owned)
        out.push_back(g.get());
    return out;
}

std::uint64_t checkpoint_seed(std::uint64_t seed, std::size_t index)
{
    // splitmix64 finalizer
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(index) + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

GeneratorSet make_generators(const std::string& spec, const generation::EnsembleConfig& ensemble, std::uint64_t seed)
{
    ensemble.validate();
    GeneratorSet set;
    if (spec == "mock") {
        for (std::size_t i = 0; i < ensemble.k; ++i)
            set.owned.push_back(std::make_unique<generation::MockGenerator>(checkpoint_seed(seed, i)));
        set.tokenizer = std::make_unique<WhitespaceTokenizer>();
        return set;
    }
    std::vector<std::string> endpoints;
    std::size_t begin = 0;
    while (begin <= spec.size()) {
        auto end = spec.find(';', begin);
        if (end == std::string::npos)
            end = spec.size();
        auto part = std::string(trim(std::string_view(spec).substr(begin, end - begin)));
        if (!part.empty())
            endpoints.push_back(part);
        begin = end + 1;
    }
    if (endpoints.size() != ensemble.k) {
        throw std::invalid_argument("generator spec lists " + std::to_string(endpoints.size())
                                    + " endpoints but k = " + std::to_string(ensemble.k));
    }
    std::shared_ptr<protocol::Transport> first;
    for (const auto& e : endpoints) {
        auto transport = protocol::make_transport(e);
        if (!first)
            first = transport;
        set.owned.push_back(std::make_unique<protocol::RemoteGenerator>(transport));
    }
    set.tokenizer = std::make_unique<protocol::RemoteTokenizer>(first);
    return set;
}

ranking::RankedPatchList incremental_checkpoint_analysis(std::span<const std::vector<CandidatePatch>> per_checkpoint,
                                                         std::string_view source, std::size_t j)
{
    if (j < 1 || j > per_checkpoint.size())
        throw std::invalid_argument("j must be in 1.." + std::to_string(per_checkpoint.size()));
    return ranking::combine(per_checkpoint.subspan(0, j), source);
}

ranking::RankedPatchList rank_hunks(const std::vector<std::vector<std::vector<CandidatePatch>>>& per_hunk,
                                    const std::vector<std::string>& sources, const std::vector<bool>& use)
{
    std::vector<ranking::RankedPatchList> lists;
    for (std::size_t h = 0; h < per_hunk.size(); ++h) {
        std::vector<std::vector<CandidatePatch>> selected(per_hunk[h].size());
        for (std::size_t i = 0; i < per_hunk[h].size(); ++i) {
            if (i < use.size() && use[i])
                selected[i] = per_hunk[h][i];
        }
        lists.push_back(ranking::combine(selected, sources[h]));
    }
    if (lists.size() == 1)
        return std::move(lists.front());
    return ranking::reduce_multi_hunk(lists);
}

ordered_json BugResult::to_json() const
{
    ordered_json j;
    j["bug"] = bug;
    j["benchmark"] = benchmark;
    j["language"] = std::string(aprkit::to_string(language));
    j["hunks"] = hunks;
    j["candidates"] = candidates;
    j["developer_fix"] = developer_fix ? ordered_json(*developer_fix) : ordered_json(nullptr);
    j["npc"] = npc ? ordered_json(*npc) : ordered_json(nullptr);
    j["plausible_positions"] = plausible_positions;
    j["identical_position"] = identical_position ? ordered_json(*identical_position) : ordered_json(nullptr);
    j["timeouts"] = timeouts;
    ordered_json validated_json = ordered_json::array();
    for (const auto& v : validated) {
        ordered_json c;
        c["position"] = v.position;
        c["text"] = v.text;
        c["injected"] = v.injected;
        c["sources"] = v.sources;
        c["verdict"] = validation::to_string(v.verdict);
        validated_json.push_back(std::move(c));
    }
    j["validated"] = std::move(validated_json);
    auto positions = [](const std::vector<std::optional<std::size_t>>& v) {
        ordered_json a = ordered_json::array();
        for (const auto& p : v)
            a.push_back(p ? ordered_json(*p) : ordered_json(nullptr));
        return a;
    };
    j["incremental"] = positions(incremental);
    j["per_checkpoint"] = positions(per_checkpoint);
    j["generator_errors"] = generator_errors;
    j["error"] = error;
    return j;
}

BugResult BugResult::from_json(const json& rec)
{
    BugResult r;
    r.bug = rec.at("bug").get<std::string>();
    r.benchmark = rec.value("benchmark", "");
    r.language = parse_language(rec.value("language", "Java"));
    r.hunks = rec.value("hunks", std::size_t { 0 });
    r.candidates = rec.value("candidates", std::size_t { 0 });
    r.developer_fix = optional_from<std::string>(rec, "developer_fix");
    r.npc = optional_from<std::size_t>(rec, "npc");
    if (rec.contains("plausible_positions"))
        r.plausible_positions = rec["plausible_positions"].get<std::vector<std::size_t>>();
    r.identical_position = optional_from<std::size_t>(rec, "identical_position");
    r.timeouts = rec.value("timeouts", std::size_t { 0 });
    if (rec.contains("validated")) {
        for (const auto& c : rec["validated"]) {
            ValidatedCandidate v;
            v.position = c.at("position").get<std::size_t>();
            v.text = c.at("text").get<std::string>();
            v.injected = c.value("injected", false);
            v.sources = c.value("sources", std::vector<std::size_t> {});
            auto verdict = validation::parse_verdict(c.at("verdict").get<std::string>());
            if (!verdict)
                throw std::invalid_argument("unknown verdict " + c["verdict"].dump());
            v.verdict = *verdict;
            r.validated.push_back(std::move(v));
        }
    }
    auto positions = [&](const char* key) {
        std::vector<std::optional<std::size_t>> out;
        if (rec.contains(key)) {
            for (const auto& p : rec[key])
                out.push_back(p.is_null() ? std::nullopt : std::optional(p.get<std::size_t>()));
        }
        return out;
    };
    r.incremental = positions("incremental");
    r.per_checkpoint = positions("per_checkpoint");
    r.generator_errors = rec.value("generator_errors", std::vector<std::string> {});
    r.error = rec.value("error", "");
    return r;
}

LabelSet read_labels(std::istream& in)
{
    LabelSet labels;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty())
            continue;
        try {
            auto rec = json::parse(line);
            labels[rec.at("bug").get<std::string>()][rec.at("position").get<std::size_t>()]
                = rec.at("label").get<std::string>();
        } catch (const json::exception& e) {
            throw std::invalid_argument("labels line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return labels;
}

std::optional<std::size_t> correct_position(const BugResult& bug, const LabelSet* labels)
{
    const std::map<std::size_t, std::string>* bug_labels = nullptr;
    if (labels) {
        if (auto it = labels->find(bug.bug); it != labels->end())
            bug_labels = &it->second;
    }
    for (const auto& v : bug.validated) {
        if (v.verdict != validation::Verdict::plausible)
            continue;
        if (bug.developer_fix && normalize_whitespace(v.text) == *bug.developer_fix)
            return v.position;
        if (bug_labels) {
            if (auto it = bug_labels->find(v.position); it != bug_labels->end() && it->second == "correct")
                return v.position;
        }
    }
    return std::nullopt;
}

ordered_json Summary::to_json() const
{
    ordered_json j;
    ordered_json bench = ordered_json::array();
    for (const auto& b : benchmarks) {
        ordered_json r;
        r["benchmark"] = b.name;
        if (b.stats) {
            r["stats"] = { { "bugs", b.stats->bugs },
                           { "removed", b.stats->removed },
                           { "remained", b.stats->remained },
                           { "attempted", b.stats->attempted } };
        }
        r["run"] = b.run;
        r["plausible"] = b.plausible;
        r["identical"] = b.identical;
        r["correct"] = b.correct;
        bench.push_back(std::move(r));
    }
    j["benchmarks"] = std::move(bench);
    j["bugs"] = bugs;
    j["plausible"] = plausible;
    j["identical"] = identical;
    j["correct"] = correct;
    auto keyed = [](const auto& m) {
        ordered_json o = ordered_json::object();
        for (const auto& [k, v] : m) {
            if constexpr (std::is_same_v<std::decay_t<decltype(k)>, std::string>)
                o[k] = v;
            else
                o[std::to_string(k)] = v;
        }
        return o;
    };
    j["plausible_within"] = keyed(plausible_within);
    j["correct_within"] = keyed(correct_within);
    j["compilable_rate"] = keyed(compilable_rate);
    j["plausible_sources"] = keyed(plausible_sources);
    j["correct_sources"] = keyed(correct_sources);
    j["incremental_plausible"] = incremental_plausible;
    j["per_checkpoint_plausible"] = per_checkpoint_plausible;
    j["validated"] = validated;
    j["timeouts"] = timeouts;
    return j;
}

Summary summarize(const std::vector<BugResult>& bugs, const std::vector<Manifest>& manifests, const RunConfig& config,
                  const LabelSet* labels)
{
    Summary s;
    std::map<std::string, std::size_t> index;
    for (const auto& m : manifests) {
        if (index.contains(m.benchmark))
            continue;
        index[m.benchmark] = s.benchmarks.size();
        s.benchmarks.push_back({ m.benchmark, m.stats });
    }

    std::vector<std::size_t> first_plausible;
    std::vector<std::size_t> first_correct;
    std::vector<validation::BugValidationReport> reports;
    auto credit = [](std::map<std::string, std::size_t>& sources, const ValidatedCandidate& v) {
        if (v.injected) {
            ++sources["manual"];
            return;
        }
        for (auto ck : v.sources)
            ++sources[std::to_string(ck)];
    };
    auto find = [](const BugResult& b, std::size_t pos) -> const ValidatedCandidate* {
        for (const auto& v : b.validated) {
            if (v.position == pos)
                return &v;
        }
        return nullptr;
    };

    const auto k = config.ensemble.k;
    bool have_incremental = false;
    for (const auto& b : bugs)
        have_incremental = have_incremental || !b.incremental.empty();
    if (have_incremental) {
        s.incremental_plausible.assign(k, 0);
        s.per_checkpoint_plausible.assign(k, 0);
    }

    for (const auto& b : bugs) {
        auto [it, fresh] = index.try_emplace(b.benchmark, s.benchmarks.size());
        if (fresh)
            s.benchmarks.push_back({ b.benchmark, std::nullopt });
        auto& bench = s.benchmarks[it->second];
        ++bench.run;
        ++s.bugs;
        s.validated += b.validated.size();
        s.timeouts += b.timeouts;

        if (b.npc) {
            ++bench.plausible;
            ++s.plausible;
            first_plausible.push_back(*b.npc);
            if (auto* v = find(b, *b.npc))
                credit(s.plausible_sources, *v);
        }
        if (b.identical_position) {
            ++bench.identical;
            ++s.identical;
        }
        if (auto pos = correct_position(b, labels)) {
            ++bench.correct;
            ++s.correct;
            first_correct.push_back(*pos);
            if (auto* v = find(b, *pos))
                credit(s.correct_sources, *v);
        }
        for (std::size_t j = 0; j < std::min(k, b.incremental.size()); ++j) {
            if (b.incremental[j])
                ++s.incremental_plausible[j];
        }
        for (std::size_t i = 0; i < std::min(k, b.per_checkpoint.size()); ++i) {
            if (b.per_checkpoint[i])
                ++s.per_checkpoint_plausible[i];
        }

        validation::BugValidationReport r;
        r.bug_id = b.bug;
        for (const auto& v : b.validated) {
            validation::ValidationOutcome o;
            o.verdict = v.verdict;
            o.candidate_position = v.position;
            o.injected = v.injected;
            r.outcomes.push_back(o);
        }
        reports.push_back(std::move(r));
    }

    s.plausible_within = ranking_thresholds(first_plausible, config.thresholds);
    s.correct_within = ranking_thresholds(first_correct, config.thresholds);
    if (config.mode != validation::Mode::first_plausible) {
        for (auto x : config.thresholds)
            s.compilable_rate[x] = compilable_rate(reports, x);
    }
    return s;
}

BugResult run_bug(const Manifest& manifest, const ManifestBug& mb, const RunConfig& config, GeneratorSet& generators,
                  const validation::ValidatorOptions& options)
{
    const auto& bug = mb.bug;
    BugResult r;
    r.bug = bug.id;
    r.benchmark = manifest.benchmark;
    r.language = bug.language;
    r.hunks = bug.hunks.size();

    {
        std::optional<std::string> fix;
        bool known = !mb.developer_fixes.empty();
        for (const auto& f : mb.developer_fixes) {
            if (!f) {
                known = false;
                break;
            }
            auto norm = normalize_whitespace(*f);
            if (fix && *fix != norm) {
                known = false;
                break;
            }
            fix = norm;
        }
        if (known)
            r.developer_fix = fix;
    }

    try {
        const auto prefix = std::string(aprkit::to_string(bug.language));
        const auto pointers = generators.pointers();
        std::vector<std::vector<std::vector<CandidatePatch>>> per_hunk;
        for (std::size_t h = 0; h < bug.hunks.size(); ++h) {
            const auto lines = split_lines(mb.hunk_sources[h]);
            auto sample = encoding::encode_for_inference(prefix, lines, mb.hunk_contexts[h], *generators.tokenizer,
                                                         config.max_in);
            auto out = generation::generate_ensemble(sample, pointers, config.ensemble, true);
            for (const auto& e : out.errors)
                r.generator_errors.push_back(bug.hunks.size() > 1 ? "hunk " + std::to_string(h) + ": " + e : e);
            per_hunk.push_back(std::move(out.per_checkpoint));
        }

        const auto k = config.ensemble.k;
        const auto ranked = rank_hunks(per_hunk, mb.hunk_sources, std::vector<bool>(k, true));
        r.candidates = ranked.patches.size();

        std::unordered_map<std::string, std::set<std::size_t>> origin;
        for (const auto& hunk : per_hunk) {
            for (std::size_t i = 0; i < hunk.size(); ++i) {
                for (const auto& c : hunk[i])
                    origin[ranking::normalize_patch_text(c.text)].insert(i);
            }
        }

        auto report = validation::validate_ranked(bug, ranked, config.mode, options, config.candidate_limit);
        std::unordered_map<std::string, validation::Verdict> verdict_of;
        for (std::size_t i = 0; i < report.outcomes.size(); ++i) {
            const auto& o = report.outcomes[i];
            const auto& p = ranked.patches[o.candidate_position - 1];
            ValidatedCandidate v;
            v.position = o.candidate_position;
            v.text = p.text;
            v.injected = p.injected;
            if (!p.injected) {
                if (auto it = origin.find(p.text); it != origin.end())
                    v.sources.assign(it->second.begin(), it->second.end());
            }
            v.verdict = o.verdict;
            v.wall_time = o.wall_time;
            verdict_of[p.text] = o.verdict;
            r.validated.push_back(std::move(v));
        }
        r.npc = report.npc;
        r.time_to_plausible = report.time_to_plausible;
        r.plausible_positions = report.plausible_positions();
        r.timeouts = report.timeout_count;
        if (r.developer_fix) {
            for (const auto& v : r.validated) {
                if (v.verdict == validation::Verdict::plausible && v.text == *r.developer_fix) {
                    r.identical_position = v.position;
                    break;
                }
            }
        }

        if (config.mode == validation::Mode::exhaustive) {
            auto first_plausible = [&](const ranking::RankedPatchList& list) -> std::optional<std::size_t> {
                for (const auto& p : list.patches) {
                    auto it = verdict_of.find(p.text);
                    if (it != verdict_of.end() && it->second == validation::Verdict::plausible)
                        return p.rank;
                }
                return std::nullopt;
            };
            for (std::size_t j = 1; j <= k; ++j) {
                std::vector<bool> use(k, false);
                std::fill(use.begin(), use.begin() + static_cast<std::ptrdiff_t>(j), true);
                r.incremental.push_back(first_plausible(rank_hunks(per_hunk, mb.hunk_sources, use)));
            }
            for (std::size_t i = 0; i < k; ++i) {
                std::vector<bool> use(k, false);
                use[i] = true;
                r.per_checkpoint.push_back(first_plausible(rank_hunks(per_hunk, mb.hunk_sources, use)));
            }
        }
    } catch (const std::exception& e) {
        r.error = e.what();
    }
    return r;
}

EvaluationReport run_bench(const std::vector<Manifest>& manifests, const RunConfig& config, GeneratorSet& generators,
                           const validation::ValidatorOptions& options)
{
    config.ensemble.validate();
    if (generators.owned.size() != config.ensemble.k)
        throw std::invalid_argument("generator count differs from k");

    EvaluationReport report;
    report.config = config;
    report.manifests = manifests;

    std::vector<std::pair<const Manifest*, const ManifestBug*>> work;
    for (const auto& m : manifests) {
        for (const auto& b : m.bugs)
            work.emplace_back(&m, &b);
    }
    report.bugs.resize(work.size());

    std::atomic<std::size_t> next { 0 };
    auto worker = [&] {
        for (auto i = next.fetch_add(1); i < work.size(); i = next.fetch_add(1))
            report.bugs[i] = run_bug(*work[i].first, *work[i].second, config, generators, options);
    };
    const auto jobs = std::max<std::size_t>(1, std::min<std::size_t>(config.jobs, work.size()));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t i = 0; i < jobs; ++i)
            pool.emplace_back(worker);
    }
    return report;
}

namespace {

ordered_json header_json(const EvaluationReport& report)
{
    ordered_json h;
    h["kind"] = "run";
    h["config"] = report.config.to_json();
    h["bleu"] = { { "order", bleu_order }, { "smoothing", "add-k" }, { "k", bleu_smoothing_k }, { "tokenize", "13a" } };
    ordered_json ms = ordered_json::array();
    for (const auto& m : report.manifests) {
        ordered_json r;
        r["benchmark"] = m.benchmark;
        r["bugs_listed"] = m.bugs.size();
        if (m.stats) {
            r["stats"] = { { "bugs", m.stats->bugs },
                           { "removed", m.stats->removed },
                           { "remained", m.stats->remained },
                           { "attempted", m.stats->attempted } };
        }
        ms.push_back(std::move(r));
    }
    h["manifests"] = std::move(ms);
    return h;
}

}  // namespace

void write_report(std::ostream& out, const EvaluationReport& report, const LabelSet* labels)
{
    out << header_json(report).dump() << '\n';
    for (const auto& b : report.bugs) {
        ordered_json rec;
        rec["kind"] = "bug";
        rec.update(b.to_json());
        out << rec.dump() << '\n';
    }
    ordered_json tail;
    tail["kind"] = "summary";
    tail.update(summarize(report.bugs, report.manifests, report.config, labels).to_json());
    out << tail.dump() << '\n';
}

LoadedReport read_report(std::istream& in)
{
    LoadedReport loaded;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty())
            continue;
        try {
            auto rec = json::parse(line);
            auto kind = rec.value("kind", "");
            if (kind == "run")
                loaded.header = rec;
            else if (kind == "bug")
                loaded.bugs.push_back(BugResult::from_json(rec));
        } catch (const std::exception& e) {
            throw std::invalid_argument("report line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    if (loaded.header.is_null())
        throw std::invalid_argument("report has no run header");
    return loaded;
}

std::vector<Manifest> manifests_from_header(const json& header)
{
    std::vector<Manifest> out;
    if (!header.contains("manifests"))
        return out;
    for (const auto& m : header["manifests"]) {
        Manifest stub;
        stub.benchmark = m.at("benchmark").get<std::string>();
        if (m.contains("stats")) {
            const auto& s = m["stats"];
            stub.stats = BenchmarkStats { s.at("bugs").get<std::size_t>(), s.at("removed").get<std::size_t>(),
                                          s.at("remained").get<std::size_t>(), s.at("attempted").get<std::size_t>() };
        }
        out.push_back(std::move(stub));
    }
    return out;
}

void write_timing(std::ostream& out, const EvaluationReport& report)
{
    for (const auto& b : report.bugs) {
        ordered_json rec;
        rec["bug"] = b.bug;
        std::vector<long long> wall;
        for (const auto& v : b.validated)
            wall.push_back(v.wall_time.count());
        rec["wall_ms"] = wall;
        rec["time_to_plausible_ms"]
            = b.time_to_plausible ? ordered_json(b.time_to_plausible->count()) : ordered_json(nullptr);
        out << rec.dump() << '\n';
    }
}

void merge_timing(std::istream& in, std::vector<BugResult>& bugs)
{
    std::unordered_map<std::string, BugResult*> by_id;
    for (auto& b : bugs)
        by_id[b.bug] = &b;
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty())
            continue;
        auto rec = json::parse(line);
        auto it = by_id.find(rec.at("bug").get<std::string>());
        if (it == by_id.end())
            continue;
        auto& b = *it->second;
        auto wall = rec.value("wall_ms", std::vector<long long> {});
        for (std::size_t i = 0; i < std::min(wall.size(), b.validated.size()); ++i)
            b.validated[i].wall_time = milliseconds(wall[i]);
        if (auto t = optional_from<long long>(rec, "time_to_plausible_ms"))
            b.time_to_plausible = milliseconds(*t);
    }
}

namespace {

struct Spread {
    double min = 0, max = 0, median = 0, mean = 0;
};

Spread spread(std::vector<double> v)
{
    Spread s;
    if (v.empty())
        return s;
    std::sort(v.begin(), v.end());
    s.min = v.front();
    s.max = v.back();
    auto n = v.size();
    s.median = n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
    double sum = 0;
    for (double x : v)
        sum += x;
    s.mean = sum / static_cast<double>(n);
    return s;
}

std::string cell(const std::string& s, int width)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-*s", width, s.c_str());
    return buf;
}

std::string num(double v, int precision = 2)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", precision, v);
    return buf;
}

}  // namespace

void write_summary(std::ostream& out, const Summary& s, const std::vector<BugResult>& bugs, const RunConfig& config)
{
    out << "run: mode=" << validation::to_string(config.mode) << " k=" << config.ensemble.k
        << " t=" << config.ensemble.t << " seed=" << config.seed << " generators=" << config.generators << "\n\n";

    out << "Benchmarks\n";
    out << cell("benchmark", 22) << cell("bugs", 8) << cell("removed", 9) << cell("remained", 10)
        << cell("attempted", 11) << "arithmetic\n";
    for (const auto& b : s.benchmarks) {
        if (!b.stats)
            continue;
        out << cell(b.name, 22) << cell(std::to_string(b.stats->bugs), 8) << cell(std::to_string(b.stats->removed), 9)
            << cell(std::to_string(b.stats->remained), 10) << cell(std::to_string(b.stats->attempted), 11)
            << (b.stats->consistent() ? "ok" : "MISMATCH") << '\n';
    }

    out << "\nResults\n";
    out << cell("benchmark", 22) << cell("run", 6) << cell("plausible", 11) << cell("identical", 11) << "correct\n";
    for (const auto& b : s.benchmarks) {
        if (b.run == 0)
            continue;
        out << cell(b.name, 22) << cell(std::to_string(b.run), 6) << cell(std::to_string(b.plausible), 11)
            << cell(std::to_string(b.identical), 11) << b.correct << '\n';
    }
    out << cell("total", 22) << cell(std::to_string(s.bugs), 6) << cell(std::to_string(s.plausible), 11)
        << cell(std::to_string(s.identical), 11) << s.correct << '\n';

    out << "\nRanking thresholds\n";
    out << cell("top-X", 8) << cell("plausible", 11) << "correct\n";
    for (const auto& [x, n] : s.plausible_within) {
        auto c = s.correct_within.count(x) ? s.correct_within.at(x) : 0;
        out << cell(std::to_string(x), 8) << cell(std::to_string(n), 11) << c << '\n';
    }

    if (!s.compilable_rate.empty()) {
        out << "\nCompilable rate\n";
        out << cell("top-X", 8) << "rate\n";
        for (const auto& [x, r] : s.compilable_rate)
            out << cell(std::to_string(x), 8) << num(r * 100.0) << "%\n";
    }

    std::vector<double> npcs;
    std::vector<double> secs;
    std::vector<double> validated;
    bool timed = false;
    for (const auto& b : bugs) {
        validated.push_back(static_cast<double>(b.validated.size()));
        if (b.npc)
            npcs.push_back(static_cast<double>(*b.npc));
        if (b.time_to_plausible) {
            secs.push_back(static_cast<double>(b.time_to_plausible->count()) / 1000.0);
            timed = timed || b.time_to_plausible->count() > 0;
        }
    }
    out << "\nValidation cost\n";
    out << cell("measure", 26) << cell("min", 10) << cell("max", 10) << cell("median", 10) << "mean\n";
    auto row = [&](const std::string& name, const std::vector<double>& v) {
        auto sp = spread(v);
        out << cell(name, 26) << cell(num(sp.min), 10) << cell(num(sp.max), 10) << cell(num(sp.median), 10)
            << num(sp.mean) << '\n';
    };
    row("NPC", npcs);
    if (timed)
        row("time to plausible (s)", secs);
    row("candidates validated", validated);
    out << "total validated: " << s.validated << ", timeouts: " << s.timeouts << '\n';

    if (!s.plausible_sources.empty() || !s.correct_sources.empty()) {
        out << "\nCheckpoint contribution\n";
        out << cell("source", 10) << cell("plausible", 11) << "correct\n";
        std::set<std::string> keys;
        for (const auto& [k, v] : s.plausible_sources)
            keys.insert(k);
        for (const auto& [k, v] : s.correct_sources)
            keys.insert(k);
        for (const auto& k : keys) {
            auto p = s.plausible_sources.count(k) ? s.plausible_sources.at(k) : 0;
            auto c = s.correct_sources.count(k) ? s.correct_sources.at(k) : 0;
            out << cell(k, 10) << cell(std::to_string(p), 11) << c << '\n';
        }
    }

    if (!s.incremental_plausible.empty()) {
        out << "\nCheckpoints (plausible bugs)\n";
        out << cell("index", 8) << cell("alone", 8) << "first j\n";
        for (std::size_t i = 0; i < s.incremental_plausible.size(); ++i) {
            out << cell(std::to_string(i), 8) << cell(std::to_string(s.per_checkpoint_plausible[i]), 8)
                << s.incremental_plausible[i] << '\n';
        }
    }
}

}  // namespace aprkit::bench
