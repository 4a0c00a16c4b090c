#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aprkit/validation.hpp"

namespace aprkit::bench {

/// 1 when both texts agree after whitespace normalization, else 0.
int exact_match(std::string_view pred, std::string_view ref);

/// mteval-13a style tokenization followed by whitespace splitting.
std::vector<std::string> tokenize_13a(std::string_view line);

inline constexpr int bleu_order = 4;
inline constexpr double bleu_smoothing_k = 1.0;

/// Sufficient statistics of BLEU over a corpus.
struct BleuStats {
    std::size_t sys_len = 0;
    std::size_t ref_len = 0;
    std::vector<double> correct = std::vector<double>(bleu_order, 0.0);
    std::vector<double> total = std::vector<double>(bleu_order, 0.0);

    void add(std::string_view pred, std::span<const std::string> refs);
    double score() const;
};

/// BLEU in [0,100]: order 4, brevity penalty, add-one smoothing of the
/// orders above unigrams, closest reference length. Scores 0 when no n-gram
/// of any order matches.
double bleu(std::string_view pred, std::span<const std::string> refs);
double corpus_bleu(std::span<const std::string> preds, std::span<const std::vector<std::string>> refs);

/// em_rate * 100 + bleu.
double objective_metric(double exact_match_rate, double bleu_score);

/// Mean over bugs of compilable / validated among the first x candidates,
/// leaving out the injected empty patch. Bugs with nothing to count are
/// skipped; no bugs at all gives 0.
double compilable_rate(std::span<const validation::BugValidationReport> reports, std::size_t x);

/// For each threshold, how many positions are <= it.
std::map<std::size_t, std::size_t> ranking_thresholds(std::span<const std::size_t> positions,
                                                      std::span<const std::size_t> thresholds);

inline const std::vector<std::size_t> default_thresholds { 1, 5, 10, 100, 200 };

}  // namespace aprkit::bench
