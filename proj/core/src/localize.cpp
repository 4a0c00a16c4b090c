#include "aprkit/localize.hpp"

#include <fstream>
#include <sstream>

#include "aprkit/line_diff.hpp"
#include "aprkit/text.hpp"

namespace aprkit::bench {

std::string HunkLocation::buggy_text() const
{
    return join(buggy_lines, "\n");
}

std::string HunkLocation::fix_text() const
{
    return join(fix_lines, "\n");
}

std::string read_text_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw localization_error("cannot read " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<HunkLocation> localize_from_diff(std::string_view buggy, std::string_view fixed,
                                             const std::filesystem::path& file)
{
    const auto a = split_lines(buggy);
    const auto b = split_lines(fixed);
    const auto blocks = diff::diff_lines(a, b);
    if (blocks.empty())
        throw localization_error("buggy and fixed versions are identical"
                                 + (file.empty() ? std::string() : ": " + file.string()));
    std::vector<HunkLocation> out;
    for (const auto& blk : blocks) {
        HunkLocation h;
        h.file = file;
        h.start = blk.a_start + 1;
        h.end = blk.a_start + blk.a_count;
        h.buggy_lines.assign(a.begin() + static_cast<std::ptrdiff_t>(blk.a_start),
                             a.begin() + static_cast<std::ptrdiff_t>(blk.a_start + blk.a_count));
        h.fix_lines.assign(b.begin() + static_cast<std::ptrdiff_t>(blk.b_start),
                           b.begin() + static_cast<std::ptrdiff_t>(blk.b_start + blk.b_count));
        out.push_back(std::move(h));
    }
    return out;
}

std::vector<HunkLocation> localize_files(const std::filesystem::path& buggy_file,
                                         const std::filesystem::path& fixed_file)
{
    return localize_from_diff(read_text_file(buggy_file), read_text_file(fixed_file), buggy_file.filename());
}

namespace {

std::size_t indent_width(std::string_view line)
{
    std::size_t w = 0;
    for (char c : leading_indent(line))
        w += c == '\t' ? 8 : 1;
    return w;
}

bool blank(std::string_view line)
{
    return trim(line).empty();
}

std::optional<std::pair<std::size_t, std::size_t>> python_function(const std::vector<std::string>& lines,
                                                                   std::size_t start, std::size_t end)
{
    std::size_t anchor = std::min(start, lines.size());
    std::size_t body_indent = anchor >= 1 && !blank(lines[anchor - 1]) ? indent_width(lines[anchor - 1]) : SIZE_MAX;
    for (std::size_t i = anchor; i >= 1; --i) {
        const auto& l = lines[i - 1];
        auto t = trim(l);
        if ((t.starts_with("def ") || t.starts_with("async def ")) && indent_width(l) < body_indent) {
            const auto def_indent = indent_width(l);
            std::size_t last = std::max(i, std::min(end, lines.size()));
            for (std::size_t j = i + 1; j <= lines.size(); ++j) {
                if (blank(lines[j - 1]))
                    continue;
                if (indent_width(lines[j - 1]) <= def_indent && j > end)
                    break;
                last = std::max(last, j);
            }
            return std::make_pair(i, last);
        }
    }
    return std::nullopt;
}

std::optional<std::pair<std::size_t, std::size_t>> brace_function(const std::vector<std::string>& lines,
                                                                  std::size_t start, std::size_t end)
{
    // Walk up to the nearest line whose unmatched '{' encloses the hunk and
    // that looks like a signature, then match braces downwards.
    std::size_t anchor = std::min(start, lines.size());
    for (std::size_t i = anchor; i >= 1; --i) {
        const auto& l = lines[i - 1];
        auto t = trim(l);
        if (t.empty() || t.starts_with("}") || t.starts_with("#"))
            continue;
        if (t.find('(') == std::string_view::npos)
            continue;
        bool keyword = t.starts_with("if") || t.starts_with("for") || t.starts_with("while")
            || t.starts_with("switch") || t.starts_with("else") || t.starts_with("return") || t.starts_with("catch");
        if (keyword)
            continue;
        int depth = 0;
        bool opened = false;
        for (std::size_t j = i; j <= lines.size(); ++j) {
            for (char c : lines[j - 1]) {
                if (c == '{') {
                    ++depth;
                    opened = true;
                } else if (c == '}') {
                    --depth;
                }
            }
            if (opened && depth <= 0) {
                if (j >= std::min(end, lines.size()))
                    return std::make_pair(i, j);
                break;
            }
        }
    }
    return std::nullopt;
}

}  // namespace

std::optional<std::pair<std::size_t, std::size_t>>
enclosing_function(const std::vector<std::string>& lines, std::size_t start, std::size_t end, Language language)
{
    if (lines.empty() || start < 1)
        return std::nullopt;
    if (language == Language::Python)
        return python_function(lines, start, end);
    return brace_function(lines, start, end);
}

}  // namespace aprkit::bench
