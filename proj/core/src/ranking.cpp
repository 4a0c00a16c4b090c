#include "aprkit/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"

#include "aprkit/text.hpp"

namespace aprkit::ranking {

using nlohmann::json;
using nlohmann::ordered_json;

std::string normalize_patch_text(std::string_view text)
{
    return normalize_whitespace(text);
}

namespace {

CandidatePatch injected_empty()
{
    CandidatePatch p;
    p.score = injected_score;
    p.injected = true;
    return p;
}

void renumber(std::vector<CandidatePatch>& patches)
{
    for (std::size_t i = 0; i < patches.size(); ++i)
        patches[i].rank = i + 1;
}

}  // namespace

RankedPatchList combine(std::span<const std::vector<CandidatePatch>> per_checkpoint, std::string_view source_text)
{
    struct Entry {
        CandidatePatch patch;
        std::size_t checkpoint;
        std::size_t order;
    };

    std::vector<Entry> pool;
    for (std::size_t ck = 0; ck < per_checkpoint.size(); ++ck) {
        for (const auto& c : per_checkpoint[ck]) {
            Entry e { c, c.checkpoint.value_or(ck), pool.size() };
            e.patch.text = normalize_patch_text(c.text);
            e.patch.checkpoint = e.checkpoint;
            e.patch.injected = false;
            pool.push_back(std::move(e));
        }
    }

    std::sort(pool.begin(), pool.end(), [](const Entry& a, const Entry& b) {
        if (a.patch.rank != b.patch.rank)
            return a.patch.rank < b.patch.rank;
        if (a.patch.score != b.patch.score)
            return a.patch.score > b.patch.score;
        if (a.checkpoint != b.checkpoint)
            return a.checkpoint < b.checkpoint;
        return a.order < b.order;
    });

    RankedPatchList out;
    out.source_text = std::string(source_text);
    const auto source = normalize_patch_text(source_text);
    std::unordered_set<std::string> seen;
    bool has_empty = false;
    for (auto& e : pool) {
        if (e.patch.text == source)
            continue;
        if (!seen.insert(e.patch.text).second)
            continue;
        has_empty = has_empty || e.patch.text.empty();
        out.patches.push_back(std::move(e.patch));
    }
    if (!has_empty && !source.empty())
        out.patches.insert(out.patches.begin(), injected_empty());
    renumber(out.patches);
    return out;
}

RankedPatchList reduce_multi_hunk(std::span<const RankedPatchList> per_hunk)
{
    RankedPatchList out;
    if (per_hunk.empty()) {
        out.patches.push_back(injected_empty());
        renumber(out.patches);
        return out;
    }
    {
        std::vector<std::string> sources;
        for (const auto& h : per_hunk)
            sources.push_back(h.source_text);
        out.source_text = join(sources, "\n");
    }

    auto key_of = [](const CandidatePatch& p) { return p.injected ? injected_score : p.score; };

    struct Best {
        CandidatePatch patch;
        double key;
        std::size_t hunks_seen;
    };
    std::unordered_map<std::string, Best> best;
    std::vector<std::string> first_order;
    for (std::size_t h = 0; h < per_hunk.size(); ++h) {
        std::unordered_set<std::string> in_this_hunk;
        for (const auto& p : per_hunk[h].patches) {
            auto text = normalize_patch_text(p.text);
            if (!in_this_hunk.insert(text).second)
                continue;
            double key = key_of(p);
            auto it = best.find(text);
            if (it == best.end()) {
                if (h != 0)
                    continue;
                Best b { p, key, 1 };
                b.patch.text = text;
                best.emplace(text, std::move(b));
                first_order.push_back(text);
                continue;
            }
            if (it->second.hunks_seen != h)
                continue;
            ++it->second.hunks_seen;
            if (key > it->second.key) {
                it->second.patch = p;
                it->second.patch.text = text;
                it->second.key = key;
            }
        }
    }

    for (const auto& text : first_order) {
        auto& b = best.at(text);
        if (b.hunks_seen != per_hunk.size())
            continue;
        b.patch.score = b.key;
        b.patch.injected = std::isinf(b.key) && b.key > 0;
        if (b.patch.injected)
            b.patch.checkpoint.reset();
        out.patches.push_back(b.patch);
    }
    std::stable_sort(out.patches.begin(), out.patches.end(),
                     [](const CandidatePatch& a, const CandidatePatch& b) { return a.score > b.score; });
    if (out.patches.empty())
        out.patches.push_back(injected_empty());
    renumber(out.patches);
    return out;
}

void write_ranked(std::ostream& out, const RankedPatchList& list, const std::optional<std::string>& bug)
{
    for (const auto& p : list.patches) {
        ordered_json rec;
        if (bug)
            rec["bug"] = *bug;
        rec["position"] = p.rank;
        rec["text"] = p.text;
        if (p.checkpoint)
            rec["checkpoint"] = *p.checkpoint;
        if (!p.injected && std::isfinite(p.score))
            rec["score"] = p.score;
        out << rec.dump() << '\n';
    }
}

RankedPatchList read_ranked(std::istream& in)
{
    RankedPatchList list;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty())
            continue;
        try {
            auto rec = json::parse(line);
            CandidatePatch p;
            p.text = rec.at("text").get<std::string>();
            p.rank = rec.at("position").get<std::size_t>();
            if (rec.contains("checkpoint"))
                p.checkpoint = rec["checkpoint"].get<std::size_t>();
            if (rec.contains("score")) {
                p.score = rec["score"].get<double>();
            } else if (!p.checkpoint && normalize_patch_text(p.text).empty()) {
                p.injected = true;
                p.score = injected_score;
            }
            list.patches.push_back(std::move(p));
        } catch (const json::exception& e) {
            throw format_error("ranked list line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    std::stable_sort(list.patches.begin(), list.patches.end(),
                     [](const CandidatePatch& a, const CandidatePatch& b) { return a.rank < b.rank; });
    renumber(list.patches);
    return list;
}

std::vector<std::vector<CandidatePatch>> read_candidates(std::istream& in)
{
    std::map<std::size_t, std::vector<CandidatePatch>> grouped;
    std::map<std::size_t, bool> ranked;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty())
            continue;
        try {
            auto rec = json::parse(line);
            CandidatePatch p;
            auto ck = rec.at("checkpoint").get<std::size_t>();
            p.checkpoint = ck;
            p.text = rec.at("text").get<std::string>();
            p.score = rec.at("score").get<double>();
            if (!std::isfinite(p.score))
                throw format_error("candidate line " + std::to_string(lineno) + ": non-finite score");
            auto& list = grouped[ck];
            if (rec.contains("rank")) {
                p.rank = rec["rank"].get<std::size_t>();
                ranked[ck] = true;
            } else {
                p.rank = list.size() + 1;
            }
            list.push_back(std::move(p));
        } catch (const json::exception& e) {
            throw format_error("candidate line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    std::vector<std::vector<CandidatePatch>> out;
    if (grouped.empty())
        return out;
    out.resize(grouped.rbegin()->first + 1);
    for (auto& [ck, list] : grouped) {
        if (ranked[ck]) {
            std::stable_sort(list.begin(), list.end(),
                             [](const CandidatePatch& a, const CandidatePatch& b) { return a.rank < b.rank; });
        }
        renumber(list);
        out[ck] = std::move(list);
    }
    return out;
}

void write_candidates(std::ostream& out, std::span<const std::vector<CandidatePatch>> per_checkpoint)
{
    for (std::size_t ck = 0; ck < per_checkpoint.size(); ++ck) {
        for (const auto& p : per_checkpoint[ck]) {
            ordered_json rec;
            rec["checkpoint"] = p.checkpoint.value_or(ck);
            rec["rank"] = p.rank;
            rec["text"] = p.text;
            rec["score"] = p.score;
            out << rec.dump() << '\n';
        }
    }
}

}  // namespace aprkit::ranking
