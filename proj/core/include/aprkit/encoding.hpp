#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "aprkit/corpus.hpp"
#include "aprkit/tokenizer.hpp"

namespace aprkit::encoding {

inline constexpr std::size_t default_max_in = 512;
inline constexpr std::size_t default_max_out = 256;

/// Model input: `prefix buggy : context`, with buggy lines joined by single
/// spaces and all whitespace collapsed. Empty segments leave no doubled
/// spaces ("C x = 1; :", "Java : ctx").
std::string build_input(std::string_view prefix, std::span<const std::string> buggy_lines,
                        std::string_view context);

/// A tokenized model input.
///
/// input_ids = markers + prefix + buggy (n) + ':' + context (m) + markers,
/// each segment tokenized on its own so the bookkeeping is exact.
/// input_text is what a generator receives; it reflects any truncation.
struct EncodedSample {
    std::vector<TokenId> input_ids;
    std::optional<std::vector<TokenId>> target_ids;
    std::size_t n = 0;  // buggy tokens
    std::size_t m = 0;  // context tokens kept
    std::size_t prefix_tokens = 0;
    std::size_t delimiter_tokens = 0;
    std::size_t marker_tokens = 0;
    bool context_truncated = false;
    bool buggy_truncated = false;

    std::string prefix;
    std::string buggy_text;
    std::string context_text;
    std::string input_text;

    std::size_t overhead() const { return prefix_tokens + delimiter_tokens + marker_tokens; }
};

/// Never rejects. When the input is too long the context loses tokens from
/// its right end; if prefix + buggy alone do not fit, the context is dropped
/// and the buggy segment is right-truncated.
EncodedSample encode_for_inference(std::string_view prefix, std::span<const std::string> buggy_lines,
                                   std::string_view context, const Tokenizer& tokenizer,
                                   std::size_t max_in = default_max_in);

enum class RejectReason { input_too_long, target_too_long };

std::string_view to_string(RejectReason reason);

struct Rejection {
    RejectReason reason;
    std::size_t length = 0;
    std::size_t limit = 0;
};

using TrainingEncoding = std::variant<EncodedSample, Rejection>;

/// Tokens taken by markers + prefix + buggy + ':' (the part that is never
/// truncated during training).
std::size_t head_length(std::string_view prefix, std::span<const std::string> buggy_lines,
                        const Tokenizer& tokenizer);

/// Target tokens plus the end-of-sequence marker.
std::size_t target_length(std::string_view target, const Tokenizer& tokenizer);

/// Rejects instead of truncating buggy or target tokens; the target is
/// tokenized on its own, without prefix or context. Tokenizer exceptions
/// propagate.
TrainingEncoding encode_for_training(const BugFixInstance& instance, const Tokenizer& tokenizer,
                                     std::size_t max_in = default_max_in,
                                     std::size_t max_out = default_max_out);

/// One record per line: {"input_ids","target_ids","n","m","input"}.
void write_encoded(std::ostream& out, const EncodedSample& sample);

}  // namespace aprkit::encoding
