#include "aprkit/generation.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>

namespace aprkit::generation {

void EnsembleConfig::validate() const
{
    if (k < 1)
        throw std::invalid_argument("ensemble needs at least one checkpoint (k >= 1)");
    if (t < 1)
        throw std::invalid_argument("beam size must be at least 1 (t >= 1)");
}

std::size_t EnsembleOutput::total() const
{
    std::size_t n = 0;
    for (const auto& list : per_checkpoint)
        n += list.size();
    return n;
}

namespace {

struct CheckpointResult {
    std::vector<CandidatePatch> list;
    std::string error;
};

CheckpointResult run_one(PatchGenerator* gen, const encoding::EncodedSample& sample, std::size_t index,
                         std::size_t beam)
{
    CheckpointResult r;
    if (gen == nullptr) {
        r.error = "no generator";
        return r;
    }
    try {
        auto raw = gen->generate(sample, beam);
        std::size_t dropped = 0;
        for (auto& c : raw) {
            if (!std::isfinite(c.score)) {
                ++dropped;
                continue;
            }
            r.list.push_back(std::move(c));
        }
        if (dropped)
            r.error = std::to_string(dropped) + " candidate(s) with non-finite score dropped";
        std::stable_sort(r.list.begin(), r.list.end(),
                         [](const CandidatePatch& a, const CandidatePatch& b) { return a.score > b.score; });
        if (r.list.size() > beam)
            r.list.resize(beam);
        for (std::size_t i = 0; i < r.list.size(); ++i) {
            r.list[i].checkpoint = index;
            r.list[i].rank = i + 1;
            r.list[i].injected = false;
        }
    } catch (const std::exception& e) {
        r.list.clear();
        r.error = e.what();
    }
    return r;
}

}  // namespace

EnsembleOutput generate_ensemble(const encoding::EncodedSample& sample, std::span<PatchGenerator* const> generators,
                                 const EnsembleConfig& config, bool concurrent)
{
    config.validate();
    if (generators.size() != config.k) {
        throw std::invalid_argument("expected " + std::to_string(config.k) + " generators, got "
                                    + std::to_string(generators.size()));
    }

    std::vector<CheckpointResult> results(config.k);
    if (concurrent && config.k > 1) {
        std::vector<std::future<CheckpointResult>> futures;
        futures.reserve(config.k);
        for (std::size_t i = 0; i < config.k; ++i) {
            futures.push_back(std::async(std::launch::async, run_one, generators[i], std::cref(sample), i, config.t));
        }
        for (std::size_t i = 0; i < config.k; ++i)
            results[i] = futures[i].get();
    } else {
        for (std::size_t i = 0; i < config.k; ++i)
            results[i] = run_one(generators[i], sample, i, config.t);
    }

    EnsembleOutput out;
    out.per_checkpoint.reserve(config.k);
    for (std::size_t i = 0; i < config.k; ++i) {
        if (!results[i].error.empty())
            out.errors.push_back("checkpoint " + std::to_string(i) + ": " + results[i].error);
        out.per_checkpoint.push_back(std::move(results[i].list));
    }
    return out;
}

}  // namespace aprkit::generation
