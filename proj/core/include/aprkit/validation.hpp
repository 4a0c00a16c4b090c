#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "aprkit/language.hpp"
#include "aprkit/ranking.hpp"

namespace aprkit::validation {

/// Lines start..end of `file`, 1-based and inclusive. end < start marks an
/// insertion point: patch lines go in before line `start`.
struct Hunk {
    std::filesystem::path file;
    std::size_t start = 1;
    std::size_t end = 0;

    bool insertion() const { return end < start; }
    bool operator==(const Hunk&) const = default;
};

struct BugUnderRepair {
    std::string id;
    Language language = Language::Java;
    std::filesystem::path workdir;  // pristine buggy checkout, never modified
    std::vector<Hunk> hunks;
    std::string build_cmd;
    std::string test_cmd;
    std::vector<std::string> trigger_cmds;
    // Test ids of the triggering tests, used to classify failures when the
    // suite cannot run single tests.
    std::vector<std::string> trigger_tests;
    std::vector<std::string> flaky_exclusions;
    std::chrono::seconds timeout { 300 };
    bool selective_tests = true;
};

enum class Verdict {
    compile_error,
    trigger_fail,
    regression_fail,
    timeout,
    plausible,
    compiled,       // compile-only mode: build succeeded, tests not run
    harness_error,  // patch could not be applied, copied or spawned
};

std::string to_string(Verdict v);
std::optional<Verdict> parse_verdict(std::string_view text);

struct ValidationOutcome {
    Verdict verdict = Verdict::harness_error;
    std::chrono::milliseconds wall_time { 0 };
    std::size_t candidate_position = 0;
    bool injected = false;
    std::string detail;  // failing stage output tail or harness message
};

struct BugValidationReport {
    std::string bug_id;
    std::vector<ValidationOutcome> outcomes;
    std::optional<std::size_t> npc;
    std::optional<std::chrono::milliseconds> time_to_plausible;
    std::size_t timeout_count = 0;
    std::size_t harness_errors = 0;

    std::vector<std::size_t> plausible_positions() const;
};

enum class Mode { first_plausible, exhaustive, compile_only };

std::string to_string(Mode m);
/// Accepts "first-plausible", "exhaustive", "compile-only" (underscores too).
std::optional<Mode> parse_mode(std::string_view text);

class application_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Writes `patch_text` over every hunk of a working copy, bottom-up within
/// each file so earlier line numbers stay valid. An empty patch deletes the
/// hunk. Patch lines without leading whitespace get the indentation of the
/// first replaced line (or, for insertions, of the line they precede).
/// Returns the modified files. Throws application_error on a missing file,
/// out-of-range or overlapping spans.
std::vector<std::filesystem::path> apply_patch(const std::filesystem::path& workdir_copy, std::span<const Hunk> hunks,
                                               std::string_view patch_text);

/// APRKIT_WORKDIR when set, otherwise <tmp>/aprkit.
std::filesystem::path default_scratch_root();

struct ValidatorOptions {
    std::filesystem::path scratch_root = default_scratch_root();
    // Debugging aid: leave candidate copies on disk.
    bool keep_workdirs = false;
};

/// Copies the pristine checkout, applies the patch and runs
/// build -> triggers -> full suite. The per-bug timeout is a deadline for
/// all stages of one candidate together.
ValidationOutcome validate_candidate(const BugUnderRepair& bug, std::string_view patch_text, std::size_t position = 1,
                                     Mode mode = Mode::first_plausible, const ValidatorOptions& options = {});

/// Validates candidates in list order. first_plausible stops at the first
/// plausible candidate; exhaustive and compile_only go through the list,
/// or its first `limit` entries.
BugValidationReport validate_ranked(const BugUnderRepair& bug, const ranking::RankedPatchList& ranked, Mode mode,
                                    const ValidatorOptions& options = {},
                                    std::optional<std::size_t> limit = std::nullopt);

/// Test ids reported as failing by lines of the form "FAIL: <id>" or
/// "FAILED <id>".
std::vector<std::string> failed_tests(std::string_view output);

}  // namespace aprkit::validation
