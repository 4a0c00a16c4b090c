#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "aprkit/generation.hpp"

namespace aprkit::generation {

struct ScoredText {
    std::string text;
    double score = 0.0;

    bool operator==(const ScoredText&) const = default;
};

/// Splits a model input `prefix buggy : context` at the first standalone ':'
/// after the prefix.
struct ParsedInput {
    std::string prefix;
    std::string buggy;
    std::string context;
};
ParsedInput parse_model_input(std::string_view input_text);

/// Deterministic stand-in for a trained checkpoint. Candidates come from
/// rule-based edits of the buggy segment, in this group order:
///   operator flips, identifier swaps with context identifiers,
///   integer literal +/-1, statement deletion (including the empty patch),
///   and finally the unchanged buggy text.
/// Within a group the order is shuffled from (seed, input). Scores decrease
/// strictly with rank. Works on the input text alone, so the in-process
/// and wire-protocol mocks agree exactly.
std::vector<ScoredText> mock_generate_text(std::string_view input_text, std::size_t t, std::uint64_t seed);

/// CandidatePatch view of mock_generate_text, ranks 1..len.
std::vector<CandidatePatch> mock_generate(const encoding::EncodedSample& sample, std::size_t t, std::uint64_t seed);

class MockGenerator final : public PatchGenerator {
public:
    explicit MockGenerator(std::uint64_t seed)
        : seed_(seed)
    {
    }

    std::vector<CandidatePatch> generate(const encoding::EncodedSample& sample, std::size_t beam) override
    {
        return mock_generate(sample, beam, seed_);
    }

    std::string describe() const override { return "mock:" + std::to_string(seed_); }

private:
    std::uint64_t seed_;
};

}  // namespace aprkit::generation
