#include "aprkit/validation.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <unistd.h>

#include "aprkit/subprocess.hpp"
#include "aprkit/text.hpp"

namespace aprkit::validation {

namespace fs = std::filesystem;
using namespace std::chrono;

std::string to_string(Verdict v)
{
    switch (v) {
    case Verdict::compile_error:
        return "compile_error";
    case Verdict::trigger_fail:
        return "trigger_fail";
    case Verdict::regression_fail:
        return "regression_fail";
    case Verdict::timeout:
        return "timeout";
    case Verdict::plausible:
        return "plausible";
    case Verdict::compiled:
        return "compiled";
    case Verdict::harness_error:
        return "harness_error";
    }
    return "harness_error";
}

std::optional<Verdict> parse_verdict(std::string_view text)
{
    for (auto v : { Verdict::compile_error, Verdict::trigger_fail, Verdict::regression_fail, Verdict::timeout,
                    Verdict::plausible, Verdict::compiled, Verdict::harness_error }) {
        if (to_string(v) == text)
            return v;
    }
    return std::nullopt;
}

std::string to_string(Mode m)
{
    switch (m) {
    case Mode::first_plausible:
        return "first-plausible";
    case Mode::exhaustive:
        return "exhaustive";
    case Mode::compile_only:
        return "compile-only";
    }
    return "first-plausible";
}

std::optional<Mode> parse_mode(std::string_view text)
{
    std::string s(text);
    std::replace(s.begin(), s.end(), '_', '-');
    for (auto m : { Mode::first_plausible, Mode::exhaustive, Mode::compile_only }) {
        if (to_string(m) == s)
            return m;
    }
    return std::nullopt;
}

std::vector<std::size_t> BugValidationReport::plausible_positions() const
{
    std::vector<std::size_t> out;
    for (const auto& o : outcomes) {
        if (o.verdict == Verdict::plausible)
            out.push_back(o.candidate_position);
    }
    return out;
}

namespace {

struct FileText {
    std::vector<std::string> lines;
    bool trailing_newline = false;
};

FileText read_lines(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw application_error("cannot read " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    auto text = ss.str();
    FileText f;
    f.trailing_newline = !text.empty() && text.back() == '\n';
    f.lines = split_lines(text);
    return f;
}

void write_lines(const fs::path& path, const FileText& f)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw application_error("cannot write " + path.string());
    for (std::size_t i = 0; i < f.lines.size(); ++i) {
        out << f.lines[i];
        if (i + 1 < f.lines.size() || f.trailing_newline)
            out << '\n';
    }
}

std::string tail(std::string_view s, std::size_t n = 2000)
{
    return std::string(s.size() > n ? s.substr(s.size() - n) : s);
}

std::string sanitize(std::string_view id)
{
    std::string out;
    for (char c : id)
        out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.') ? c : '_';
    return out.empty() ? "bug" : out;
}

std::atomic<std::uint64_t> scratch_counter { 0 };

fs::path fresh_dir(const fs::path& root, std::string_view id)
{
    auto dir = root
        / (sanitize(id) + "-" + std::to_string(::getpid()) + "-" + std::to_string(scratch_counter.fetch_add(1)));
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string expand_exclusions(std::string cmd, const std::vector<std::string>& flaky)
{
    const std::string placeholder = "{exclude}";
    const auto list = join(flaky, " ");
    for (auto pos = cmd.find(placeholder); pos != std::string::npos; pos = cmd.find(placeholder, pos + list.size()))
        cmd.replace(pos, placeholder.size(), list);
    return cmd;
}

}  // namespace

std::vector<fs::path> apply_patch(const fs::path& workdir_copy, std::span<const Hunk> hunks,
                                  std::string_view patch_text)
{
    std::map<fs::path, std::vector<Hunk>> by_file;
    std::vector<fs::path> order;
    for (const auto& h : hunks) {
        auto [it, fresh] = by_file.try_emplace(h.file);
        if (fresh)
            order.push_back(h.file);
        it->second.push_back(h);
    }

    std::vector<std::string> patch_lines;
    if (!trim(patch_text).empty())
        patch_lines = split_lines(patch_text);

    std::vector<std::pair<fs::path, FileText>> staged;
    for (const auto& file : order) {
        auto path = workdir_copy / file;
        if (!fs::is_regular_file(path))
            throw application_error("no such file: " + file.string());
        auto text = read_lines(path);
        const auto n = text.lines.size();

        auto list = by_file[file];
        std::sort(list.begin(), list.end(), [](const Hunk& a, const Hunk& b) {
            if (a.start != b.start)
                return a.start < b.start;
            return a.insertion() && !b.insertion();
        });
        for (std::size_t i = 0; i < list.size(); ++i) {
            const auto& h = list[i];
            if (h.start < 1 || (h.insertion() ? h.start > n + 1 : h.end > n))
                throw application_error("hunk " + std::to_string(h.start) + ".." + std::to_string(h.end)
                                        + " out of range in " + file.string());
            if (i > 0) {
                const auto& prev = list[i - 1];
                bool clash = prev.insertion() ? (h.insertion() && h.start == prev.start) : prev.end >= h.start;
                if (clash)
                    throw application_error("overlapping hunks in " + file.string());
            }
        }

        for (auto it = list.rbegin(); it != list.rend(); ++it) {
            const auto& h = *it;
            std::string indent;
            if (h.start <= text.lines.size())
                indent = std::string(leading_indent(text.lines[h.start - 1]));
            else if (!text.lines.empty())
                indent = std::string(leading_indent(text.lines.back()));
            std::vector<std::string> replacement;
            for (const auto& l : patch_lines)
                replacement.push_back(!l.empty() && leading_indent(l).empty() ? indent + l : l);
            auto first = text.lines.begin() + static_cast<std::ptrdiff_t>(h.start - 1);
            auto last = h.insertion() ? first : text.lines.begin() + static_cast<std::ptrdiff_t>(h.end);
            auto pos = text.lines.erase(first, last);
            text.lines.insert(pos, replacement.begin(), replacement.end());
        }
        staged.emplace_back(path, std::move(text));
    }

    for (const auto& [path, text] : staged)
        write_lines(path, text);
    return order;
}

fs::path default_scratch_root()
{
    if (const char* env = std::getenv("APRKIT_WORKDIR"); env && *env)
        return fs::path(env);
    return fs::temp_directory_path() / "aprkit";
}

std::vector<std::string> failed_tests(std::string_view output)
{
    std::vector<std::string> out;
    for (const auto& raw : split_lines(output)) {
        auto line = trim(raw);
        std::string_view rest;
        if (line.starts_with("FAIL:"))
            rest = line.substr(5);
        else if (line.starts_with("FAILED "))
            rest = line.substr(7);
        else
            continue;
        auto words = split_words(rest);
        if (!words.empty())
            out.push_back(words.front());
    }
    return out;
}

ValidationOutcome validate_candidate(const BugUnderRepair& bug, std::string_view patch_text, std::size_t position,
                                     Mode mode, const ValidatorOptions& options)
{
    ValidationOutcome outcome;
    outcome.candidate_position = position;

    fs::path dir;
    try {
        dir = fresh_dir(options.scratch_root, bug.id);
        fs::copy(bug.workdir, dir, fs::copy_options::recursive | fs::copy_options::copy_symlinks);
    } catch (const std::exception& e) {
        outcome.detail = std::string("workdir copy failed: ") + e.what();
        if (!dir.empty() && !options.keep_workdirs) {
            std::error_code ec;
            fs::remove_all(dir, ec);
        }
        return outcome;
    }

    const auto start = steady_clock::now();
    const auto deadline = start + bug.timeout;
    auto finish = [&](Verdict v, std::string detail = {}) {
        outcome.verdict = v;
        outcome.detail = std::move(detail);
        outcome.wall_time = duration_cast<milliseconds>(steady_clock::now() - start);
        if (!options.keep_workdirs) {
            std::error_code ec;
            fs::remove_all(dir, ec);
        }
        return outcome;
    };

    try {
        apply_patch(dir, bug.hunks, patch_text);
    } catch (const application_error& e) {
        return finish(Verdict::harness_error, e.what());
    }

    const proc::Environment env { { "APRKIT_EXCLUDE", join(bug.flaky_exclusions, " ") } };
    auto run = [&](const std::string& cmd) -> std::optional<proc::RunResult> {
        auto left = duration_cast<milliseconds>(deadline - steady_clock::now());
        if (left <= milliseconds(0))
            return std::nullopt;
        return proc::run_shell(cmd, dir, left, env);
    };

    try {
        if (!bug.build_cmd.empty()) {
            auto r = run(bug.build_cmd);
            if (!r || r->timed_out)
                return finish(Verdict::timeout);
            if (!r->ok())
                return finish(Verdict::compile_error, tail(r->output));
        }
        if (mode == Mode::compile_only)
            return finish(Verdict::compiled);

        if (bug.selective_tests) {
            for (const auto& cmd : bug.trigger_cmds) {
                auto r = run(cmd);
                if (!r || r->timed_out)
                    return finish(Verdict::timeout);
                if (!r->ok())
                    return finish(Verdict::trigger_fail, tail(r->output));
            }
            if (!bug.test_cmd.empty()) {
                auto r = run(expand_exclusions(bug.test_cmd, bug.flaky_exclusions));
                if (!r || r->timed_out)
                    return finish(Verdict::timeout);
                if (!r->ok())
                    return finish(Verdict::regression_fail, tail(r->output));
            }
            return finish(Verdict::plausible);
        }

        if (bug.test_cmd.empty())
            return finish(Verdict::plausible);
        auto r = run(expand_exclusions(bug.test_cmd, bug.flaky_exclusions));
        if (!r || r->timed_out)
            return finish(Verdict::timeout);
        if (r->ok())
            return finish(Verdict::plausible);
        const std::set<std::string> flaky(bug.flaky_exclusions.begin(), bug.flaky_exclusions.end());
        const std::set<std::string> triggers(bug.trigger_tests.begin(), bug.trigger_tests.end());
        auto failing = failed_tests(r->output);
        bool any_reported = !failing.empty();
        std::erase_if(failing, [&](const std::string& id) { return flaky.contains(id); });
        for (const auto& id : failing) {
            if (triggers.contains(id))
                return finish(Verdict::trigger_fail, tail(r->output));
        }
        if (any_reported && failing.empty())
            return finish(Verdict::plausible);
        return finish(Verdict::regression_fail, tail(r->output));
    } catch (const proc::spawn_error& e) {
        return finish(Verdict::harness_error, e.what());
    }
}

BugValidationReport validate_ranked(const BugUnderRepair& bug, const ranking::RankedPatchList& ranked, Mode mode,
                                    const ValidatorOptions& options, std::optional<std::size_t> limit)
{
    BugValidationReport report;
    report.bug_id = bug.id;
    milliseconds elapsed { 0 };
    const auto count = std::min(ranked.patches.size(), limit.value_or(ranked.patches.size()));
    for (std::size_t i = 0; i < count; ++i) {
        const auto& patch = ranked.patches[i];
        auto outcome = validate_candidate(bug, patch.text, i + 1, mode, options);
        outcome.injected = patch.injected;
        elapsed += outcome.wall_time;
        if (outcome.verdict == Verdict::timeout)
            ++report.timeout_count;
        if (outcome.verdict == Verdict::harness_error)
            ++report.harness_errors;
        const bool plausible = outcome.verdict == Verdict::plausible;
        report.outcomes.push_back(std::move(outcome));
        if (plausible && !report.npc) {
            report.npc = i + 1;
            report.time_to_plausible = elapsed;
            if (mode == Mode::first_plausible)
                break;
        }
    }
    return report;
}

}  // namespace aprkit::validation
