#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "aprkit/generation.hpp"

namespace aprkit::ranking {

class format_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Collapses whitespace runs to one space and trims; all-blank input gives "".
std::string normalize_patch_text(std::string_view text);

/// Validation-ordered candidates for one bug. `rank` of each entry is its
/// 1-based position in this list.
struct RankedPatchList {
    std::vector<CandidatePatch> patches;
    std::string source_text;

    bool operator==(const RankedPatchList&) const = default;
};

/// Merges k per-checkpoint beams into one list:
///   1. normalize texts
///   2. order by (rank asc, score desc, checkpoint asc)
///   3. drop entries equal to the normalized source
///   4. drop later duplicates
///   5. prepend an injected empty patch if no empty entry is left
/// Step 5 is skipped when the source itself is empty, since "" would then
/// be a copy of the buggy code.
RankedPatchList combine(std::span<const std::vector<CandidatePatch>> per_checkpoint, std::string_view source_text);

/// Keeps the texts present in every hunk's list and orders them by the best
/// score seen in any hunk, descending. An injected empty patch counts as +inf.
/// Remaining ties keep the order of the first hunk's list. An empty
/// intersection gives a list holding only the injected empty patch.
/// A single list is returned re-keyed the same way.
RankedPatchList reduce_multi_hunk(std::span<const RankedPatchList> per_hunk);

/// {"bug"?, "position", "text", "checkpoint"?, "score"?} per line. The
/// injected empty patch has neither checkpoint nor score.
void write_ranked(std::ostream& out, const RankedPatchList& list, const std::optional<std::string>& bug = {});
RankedPatchList read_ranked(std::istream& in);

/// Reads raw generator output, {"checkpoint", "text", "score", "rank"?} per
/// line, into per-checkpoint lists ordered by rank (file order when absent).
/// Checkpoints without records yield empty lists.
std::vector<std::vector<CandidatePatch>> read_candidates(std::istream& in);
void write_candidates(std::ostream& out, std::span<const std::vector<CandidatePatch>> per_checkpoint);

}  // namespace aprkit::ranking
