#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "aprkit/comments.hpp"
#include "aprkit/language.hpp"
#include "aprkit/tokenizer.hpp"

namespace aprkit {

/// One training triple. Fields are kept exactly as extracted.
struct BugFixInstance {
    std::string source;   // buggy hunk lines
    std::string context;  // enclosing function, may be empty
    std::string target;   // fixed hunk lines, may be empty before filtering
    Language language = Language::Java;

    bool operator==(const BugFixInstance&) const = default;
};

}  // namespace aprkit

namespace aprkit::corpus {

class corpus_format_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Instance counts after each preprocessing stage, in stage order.
struct CorpusStats {
    std::size_t ingested = 0;
    std::size_t after_comment_removal = 0;
    std::size_t after_dedup = 0;
    std::size_t after_identity_drop = 0;
    std::size_t after_empty_target_drop = 0;
    std::size_t after_size_filter = 0;

    // Diagnostics channel: instances rejected because the tokenizer failed.
    std::size_t tokenizer_failures = 0;
    std::vector<std::string> diagnostics;
};

/// Whitespace-insensitive identity of a (source, context, target) triple.
/// Fields are joined with '\n', which whitespace stripping guarantees is
/// absent from every field.
std::string dedup_key(const BugFixInstance& instance);

struct PreprocessOptions {
    std::size_t max_in = 512;
    std::size_t max_out = 256;
    // Workers for the per-instance stages; dedup always runs in input order.
    unsigned jobs = 1;
};

struct PreprocessResult {
    std::vector<BugFixInstance> corpus;
    CorpusStats stats;
};

/// Runs the cleaning stages in fixed order:
///   1. comment removal on source and target
///   2. dedup by dedup_key, first occurrence wins
///   3. drop source == target (ignoring whitespace)
///   4. drop empty targets
///   5. drop when prefix+source exceeds max_in or target exceeds max_out
///      (context never causes rejection; it is truncated at encode time)
PreprocessResult preprocess(std::vector<BugFixInstance> corpus, const Tokenizer& tokenizer,
                            const PreprocessOptions& options = {});

/// Line-delimited records {"source","context","target","language"}.
/// Throws corpus_format_error naming the offending line.
std::vector<BugFixInstance> read_corpus(std::istream& in);
void write_corpus(std::ostream& out, const std::vector<BugFixInstance>& corpus);

void write_stats(std::ostream& out, const CorpusStats& stats);

}  // namespace aprkit::corpus
