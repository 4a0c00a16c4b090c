#include "aprkit/manifest.hpp"

#include <algorithm>
#include <fstream>

#include "json.hpp"

#include "aprkit/localize.hpp"
#include "aprkit/text.hpp"

namespace aprkit::bench {

namespace fs = std::filesystem;
using nlohmann::json;

bool BenchmarkStats::consistent() const
{
    return removed <= bugs && remained == bugs - removed && attempted <= remained;
}

namespace {

std::string slice(const std::vector<std::string>& lines, std::size_t first, std::size_t last)
{
    std::vector<std::string> part;
    for (std::size_t i = first; i <= last && i <= lines.size(); ++i) {
        if (i >= 1)
            part.push_back(lines[i - 1]);
    }
    return join(part, "\n");
}

std::string context_for(const json& spec, const std::vector<std::string>& lines, const validation::Hunk& h,
                        Language language)
{
    if (spec.is_null())
        return {};
    if (spec.is_string()) {
        if (spec.get<std::string>() != "auto")
            throw manifest_error("context must be \"auto\" or [first, last]");
        auto span = enclosing_function(lines, h.start, h.end, language);
        return span ? slice(lines, span->first, span->second) : std::string();
    }
    auto range = spec.get<std::vector<std::size_t>>();
    if (range.size() != 2 || range[0] < 1 || range[0] > range[1] || range[1] > lines.size())
        throw manifest_error("context span out of range");
    return slice(lines, range[0], range[1]);
}

std::vector<std::string> strings(const json& rec, const char* key)
{
    if (!rec.contains(key))
        return {};
    return rec[key].get<std::vector<std::string>>();
}

ManifestBug parse_bug(const json& rec, const fs::path& base, std::optional<Language> default_language)
{
    ManifestBug mb;
    auto& bug = mb.bug;
    bug.id = rec.at("id").get<std::string>();
    if (rec.contains("language"))
        bug.language = parse_language(rec["language"].get<std::string>());
    else if (default_language)
        bug.language = *default_language;
    else
        throw manifest_error("bug " + bug.id + " has no language");
    bug.workdir = (base / rec.at("workdir").get<std::string>()).lexically_normal();
    bug.build_cmd = rec.value("build_cmd", "");
    bug.test_cmd = rec.value("test_cmd", "");
    bug.trigger_cmds = strings(rec, "trigger_cmds");
    bug.trigger_tests = strings(rec, "trigger_tests");
    bug.flaky_exclusions = strings(rec, "flaky");
    bug.timeout = std::chrono::seconds(rec.value("timeout_s", 300));
    bug.selective_tests = rec.value("selective_tests", true);
    if (bug.timeout.count() <= 0)
        throw manifest_error("bug " + bug.id + ": timeout_s must be positive");

    auto file_lines = [&](const fs::path& rel) {
        auto path = bug.workdir / rel;
        if (!fs::is_regular_file(path))
            throw manifest_error("bug " + bug.id + ": missing file " + path.string());
        return split_lines(read_text_file(path));
    };

    if (rec.contains("localize")) {
        const auto& loc = rec["localize"];
        auto fixed_dir = base / loc.at("fixed").get<std::string>();
        auto context_spec = loc.contains("context") ? loc["context"] : json();
        for (const auto& file : loc.at("files").get<std::vector<std::string>>()) {
            auto lines = file_lines(file);
            auto fixed = read_text_file(fixed_dir / file);
            auto located = localize_from_diff(join(lines, "\n"), fixed, file);
            for (const auto& h : located) {
                validation::Hunk hunk { h.file, h.start, h.end };
                mb.hunk_sources.push_back(h.buggy_text());
                mb.hunk_contexts.push_back(context_for(context_spec, lines, hunk, bug.language));
                mb.developer_fixes.push_back(h.fix_text());
                bug.hunks.push_back(std::move(hunk));
            }
        }
    } else {
        for (const auto& h : rec.at("hunks")) {
            validation::Hunk hunk { h.at("file").get<std::string>(), h.at("start").get<std::size_t>(),
                                    h.at("end").get<std::size_t>() };
            auto lines = file_lines(hunk.file);
            if (hunk.start < 1 || (hunk.insertion() ? hunk.start > lines.size() + 1 : hunk.end > lines.size()))
                throw manifest_error("bug " + bug.id + ": hunk out of range in " + hunk.file.string());
            mb.hunk_sources.push_back(hunk.insertion() ? std::string() : slice(lines, hunk.start, hunk.end));
            mb.hunk_contexts.push_back(context_for(h.contains("context") ? h["context"] : json(), lines, hunk,
                                                   bug.language));
            mb.developer_fixes.push_back(h.contains("fix") ? std::optional(h["fix"].get<std::string>())
                                                           : std::nullopt);
            bug.hunks.push_back(std::move(hunk));
        }
    }
    if (bug.hunks.empty())
        throw manifest_error("bug " + bug.id + " has no hunks");
    return mb;
}

}  // namespace

Manifest load_manifest(const fs::path& file)
{
    std::ifstream in(file);
    if (!in)
        throw manifest_error("cannot open manifest " + file.string());
    Manifest m;
    m.path = file;
    try {
        auto doc = json::parse(in);
        m.benchmark = doc.at("benchmark").get<std::string>();
        if (doc.contains("language"))
            m.language = parse_language(doc["language"].get<std::string>());
        if (doc.contains("stats")) {
            const auto& s = doc["stats"];
            m.stats = BenchmarkStats { s.at("bugs").get<std::size_t>(), s.at("removed").get<std::size_t>(),
                                       s.at("remained").get<std::size_t>(), s.at("attempted").get<std::size_t>() };
        }
        const auto base = file.parent_path();
        if (doc.contains("bugs")) {
            for (const auto& rec : doc["bugs"])
                m.bugs.push_back(parse_bug(rec, base, m.language));
        }
    } catch (const manifest_error& e) {
        throw manifest_error(file.string() + ": " + e.what());
    } catch (const std::exception& e) {
        throw manifest_error(file.string() + ": " + e.what());
    }
    return m;
}

std::vector<Manifest> load_manifests(const fs::path& file_or_dir)
{
    if (!fs::exists(file_or_dir))
        throw manifest_error("no such manifest: " + file_or_dir.string());
    if (!fs::is_directory(file_or_dir))
        return { load_manifest(file_or_dir) };
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(file_or_dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json")
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty())
        throw manifest_error("no *.json manifests in " + file_or_dir.string());
    std::vector<Manifest> out;
    for (const auto& f : files)
        out.push_back(load_manifest(f));
    return out;
}

}  // namespace aprkit::bench
