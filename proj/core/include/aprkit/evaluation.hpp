#pragma once

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "aprkit/generation.hpp"
#include "aprkit/manifest.hpp"
#include "aprkit/metrics.hpp"
#include "aprkit/ranking.hpp"
#include "aprkit/tokenizer.hpp"
#include "aprkit/validation.hpp"

namespace aprkit::bench {

/// Everything that determines a run's structured output.
struct RunConfig {
    std::uint64_t seed = 0;
    generation::EnsembleConfig ensemble;
    std::size_t max_in = 512;
    std::size_t max_out = 256;
    validation::Mode mode = validation::Mode::first_plausible;
    std::string generators = "mock";
    std::vector<std::size_t> thresholds = default_thresholds;
    std::optional<std::size_t> candidate_limit;
    unsigned jobs = 1;

    /// Worker count is left out: it never changes results.
    nlohmann::ordered_json to_json() const;
    static RunConfig from_json(const nlohmann::json& rec);
};

/// The k generators of an ensemble plus the tokenizer used to encode inputs.
struct GeneratorSet {
    std::vector<std::unique_ptr<generation::PatchGenerator>> owned;
    std::unique_ptr<Tokenizer> tokenizer;

    std::vector<generation::PatchGenerator*> pointers() const;
};

/// "mock" gives k mock checkpoints seeded from `seed` and the checkpoint
/// index, with the whitespace tokenizer. Otherwise `spec` lists k endpoints
/// separated by ';', each "exec:<command>" or "http://host:port"; the first
/// one also serves tokenization. Throws std::invalid_argument on a count
/// mismatch.
GeneratorSet make_generators(const std::string& spec, const generation::EnsembleConfig& ensemble, std::uint64_t seed);

/// Seed of mock checkpoint `index` in a run seeded with `seed`.
std::uint64_t checkpoint_seed(std::uint64_t seed, std::size_t index);

/// Combine over the first j checkpoint lists only.
ranking::RankedPatchList incremental_checkpoint_analysis(std::span<const std::vector<CandidatePatch>> per_checkpoint,
                                                         std::string_view source, std::size_t j);

/// Per-hunk combine over the checkpoints selected by `use`, then multi-hunk
/// reduction when there is more than one hunk.
ranking::RankedPatchList rank_hunks(const std::vector<std::vector<std::vector<CandidatePatch>>>& per_hunk,
                                    const std::vector<std::string>& sources, const std::vector<bool>& use);

struct ValidatedCandidate {
    std::size_t position = 0;
    std::string text;
    bool injected = false;
    std::vector<std::size_t> sources;  // checkpoints that generated this text
    validation::Verdict verdict = validation::Verdict::harness_error;
    std::chrono::milliseconds wall_time { 0 };
};

struct BugResult {
    std::string bug;
    std::string benchmark;
    Language language = Language::Java;
    std::size_t hunks = 0;
    std::size_t candidates = 0;
    std::optional<std::string> developer_fix;
    std::vector<ValidatedCandidate> validated;
    std::optional<std::size_t> npc;
    std::vector<std::size_t> plausible_positions;
    std::optional<std::size_t> identical_position;
    // Exhaustive runs only: first plausible position using checkpoints
    // 0..j-1 (incremental) and using checkpoint i alone (per_checkpoint).
    std::vector<std::optional<std::size_t>> incremental;
    std::vector<std::optional<std::size_t>> per_checkpoint;
    std::size_t timeouts = 0;
    std::vector<std::string> generator_errors;
    std::string error;
    std::optional<std::chrono::milliseconds> time_to_plausible;

    /// Times are left out so that the record is reproducible.
    nlohmann::ordered_json to_json() const;
    static BugResult from_json(const nlohmann::json& rec);
};

/// bug id -> candidate position -> label, e.g. "correct".
using LabelSet = std::map<std::string, std::map<std::size_t, std::string>>;

/// Records {"bug", "position", "label"} per line.
LabelSet read_labels(std::istream& in);

struct Summary {
    struct Benchmark {
        std::string name;
        std::optional<BenchmarkStats> stats;
        std::size_t run = 0;
        std::size_t plausible = 0;
        std::size_t identical = 0;
        std::size_t correct = 0;
    };
    std::vector<Benchmark> benchmarks;
    std::size_t bugs = 0;
    std::size_t plausible = 0;
    std::size_t identical = 0;
    std::size_t correct = 0;
    std::map<std::size_t, std::size_t> correct_within;    // threshold -> bugs
    std::map<std::size_t, std::size_t> plausible_within;  // threshold -> bugs
    std::map<std::size_t, double> compilable_rate;       // top-X -> rate
    std::map<std::string, std::size_t> correct_sources;    // "0".."k-1", "manual"
    std::map<std::string, std::size_t> plausible_sources;
    std::vector<std::size_t> incremental_plausible;     // j = 1..k
    std::vector<std::size_t> per_checkpoint_plausible;  // i = 0..k-1
    std::size_t timeouts = 0;
    std::size_t validated = 0;

    nlohmann::ordered_json to_json() const;
};

/// First candidate counted as correct: identical to the developer fix or
/// labelled "correct", and plausible.
std::optional<std::size_t> correct_position(const BugResult& bug, const LabelSet* labels);

Summary summarize(const std::vector<BugResult>& bugs, const std::vector<Manifest>& manifests, const RunConfig& config,
                  const LabelSet* labels = nullptr);

struct EvaluationReport {
    RunConfig config;
    std::vector<Manifest> manifests;
    std::vector<BugResult> bugs;
};

/// Generates, ranks and validates every bug of every manifest. Bugs run on
/// config.jobs workers; results keep manifest order.
EvaluationReport run_bench(const std::vector<Manifest>& manifests, const RunConfig& config, GeneratorSet& generators,
                           const validation::ValidatorOptions& options = {});

/// Processes a single bug.
BugResult run_bug(const Manifest& manifest, const ManifestBug& bug, const RunConfig& config,
                  GeneratorSet& generators, const validation::ValidatorOptions& options = {});

/// report.jsonl: a run header, one record per bug, then the summary.
/// Contains no wall-clock data.
void write_report(std::ostream& out, const EvaluationReport& report, const LabelSet* labels = nullptr);

/// Header, bug records and labels read back from write_report output.
struct LoadedReport {
    nlohmann::json header;
    std::vector<BugResult> bugs;
};
LoadedReport read_report(std::istream& in);

/// timing.jsonl: per-bug candidate wall times and time to first plausible.
void write_timing(std::ostream& out, const EvaluationReport& report);
void merge_timing(std::istream& in, std::vector<BugResult>& bugs);

/// Manifest stand-ins (name and stats only) recorded in a report header.
std::vector<Manifest> manifests_from_header(const nlohmann::json& header);

/// Human-readable tables. `bugs` may carry times (fresh run) or not.
void write_summary(std::ostream& out, const Summary& summary, const std::vector<BugResult>& bugs,
                   const RunConfig& config);

}  // namespace aprkit::bench
