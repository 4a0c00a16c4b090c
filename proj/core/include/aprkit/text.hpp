#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace aprkit {

/// The whitespace set used everywhere (dedup keys, patch normalization,
/// word splitting): ASCII space, tab, CR, LF. Unicode spaces are content.
constexpr bool is_space(char c) noexcept
{
    return c == ' ' || c == '\t' || c == '\n' || c == '\r';
}

/// Removes every whitespace character.
std::string strip_all_whitespace(std::string_view text);

/// Collapses each maximal whitespace run to one space and trims both ends.
std::string normalize_whitespace(std::string_view text);

std::string_view trim(std::string_view text);

/// Whitespace-separated words; never yields empty words.
std::vector<std::string> split_words(std::string_view text);

/// Splits on '\n'. A trailing newline does not produce a trailing empty
/// line; "" yields no lines.
std::vector<std::string> split_lines(std::string_view text);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

/// Leading run of spaces and tabs.
std::string_view leading_indent(std::string_view line);

}  // namespace aprkit
