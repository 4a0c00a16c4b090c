#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace aprkit::diff {

/// A maximal run of changed lines: a[a_start, a_start+a_count) was replaced
/// by b[b_start, b_start+b_count). Indices are 0-based.
struct ChangeBlock {
    std::size_t a_start = 0;
    std::size_t a_count = 0;
    std::size_t b_start = 0;
    std::size_t b_count = 0;

    bool operator==(const ChangeBlock&) const = default;
};

/// Shortest edit script between two line sequences (Myers), grouped into
/// change blocks in file order. Deletions are preferred over insertions
/// when both give an edit script of the same length.
std::vector<ChangeBlock> diff_lines(const std::vector<std::string>& a, const std::vector<std::string>& b);

}  // namespace aprkit::diff
