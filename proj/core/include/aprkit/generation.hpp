#pragma once

#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aprkit/encoding.hpp"

namespace aprkit {

/// A generated (or injected) replacement for a buggy hunk.
struct CandidatePatch {
    std::string text;
    // Originating checkpoint; empty for the injected empty patch.
    std::optional<std::size_t> checkpoint;
    // 1-based rank inside its checkpoint's beam; after ranking, the global position.
    std::size_t rank = 0;
    // Sequence log-likelihood as reported by the generator, higher is better.
    double score = 0.0;
    bool injected = false;

    bool operator==(const CandidatePatch&) const = default;
};

inline constexpr double injected_score = std::numeric_limits<double>::infinity();

}  // namespace aprkit

namespace aprkit::generation {

/// k checkpoints, beam size t per checkpoint.
struct EnsembleConfig {
    std::size_t k = 5;
    std::size_t t = 100;

    /// Throws std::invalid_argument unless k >= 1 and t >= 1.
    void validate() const;
};

/// One checkpoint's beam search. Implementations must be deterministic for a
/// fixed handle and input and handle one request at a time.
class PatchGenerator {
public:
    virtual ~PatchGenerator() = default;

    /// Up to `beam` candidates; order and checkpoint stamping are normalized
    /// by generate_ensemble().
    virtual std::vector<CandidatePatch> generate(const encoding::EncodedSample& sample, std::size_t beam) = 0;

    virtual std::string describe() const = 0;
};

struct EnsembleOutput {
    std::vector<std::vector<CandidatePatch>> per_checkpoint;
    // One entry per failed or misbehaving checkpoint, e.g. "checkpoint 2: ...".
    std::vector<std::string> errors;

    std::size_t total() const;
};

/// Fans the sample out to all k generators (concurrently when `concurrent`)
/// and returns exactly k lists, each sorted by descending score with ranks
/// 1..len and checkpoint indices stamped. A failing generator yields an empty
/// list plus an error entry; the ensemble never aborts for that reason.
/// Throws std::invalid_argument if generators.size() != config.k.
EnsembleOutput generate_ensemble(const encoding::EncodedSample& sample, std::span<PatchGenerator* const> generators,
                                 const EnsembleConfig& config, bool concurrent = true);

}  // namespace aprkit::generation
