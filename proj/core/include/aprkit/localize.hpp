#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "aprkit/language.hpp"

namespace aprkit::bench {

class localization_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One change block of a developer fix, located in the buggy file.
/// Lines are 1-based; end < start marks an insertion before `start`.
struct HunkLocation {
    std::filesystem::path file;
    std::size_t start = 1;
    std::size_t end = 0;
    std::vector<std::string> buggy_lines;
    std::vector<std::string> fix_lines;  // developer's replacement

    std::string buggy_text() const;
    std::string fix_text() const;
    bool operator==(const HunkLocation&) const = default;
};

/// Every change block of the line diff becomes a hunk.
/// Throws localization_error when the two versions are identical.
std::vector<HunkLocation> localize_from_diff(std::string_view buggy, std::string_view fixed,
                                             const std::filesystem::path& file = {});

/// Reads both files; hunks carry `buggy_file`'s name relative to nothing.
std::vector<HunkLocation> localize_files(const std::filesystem::path& buggy_file,
                                         const std::filesystem::path& fixed_file);

/// Heuristic span [first, last] (1-based) of the function enclosing lines
/// start..end: indentation for Python, brace matching otherwise.
std::optional<std::pair<std::size_t, std::size_t>>
enclosing_function(const std::vector<std::string>& lines, std::size_t start, std::size_t end, Language language);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace aprkit::bench
