#include "aprkit/encoding.hpp"

#include <ostream>

#include "json.hpp"

#include "aprkit/text.hpp"

namespace aprkit::encoding {

namespace {

std::vector<TokenId> encode_segment(const Tokenizer& tok, std::string_view text)
{
    if (text.empty())
        return {};
    std::string spaced;
    spaced.reserve(text.size() + 1);
    spaced.push_back(' ');
    spaced.append(text);
    return tok.encode(spaced);
}

std::string join_words(std::span<const std::string> words, std::size_t count)
{
    std::string out;
    for (std::size_t i = 0; i < count; ++i) {
        if (i)
            out.push_back(' ');
        out.append(words[i]);
    }
    return out;
}

// Largest prefix of `words` whose segment encoding fits in `budget` tokens.
// Binary search assumes token counts grow with the word count, which holds
// for whitespace and byte-level BPE tokenizers; the result is re-checked.
std::size_t fit_words(std::span<const std::string> words, std::size_t budget, const Tokenizer& tok)
{
    auto len = [&](std::size_t w) { return encode_segment(tok, join_words(words, w)).size(); };
    std::size_t lo = 0;
    std::size_t hi = words.size();
    while (lo < hi) {
        std::size_t mid = lo + (hi - lo + 1) / 2;
        if (len(mid) <= budget)
            lo = mid;
        else
            hi = mid - 1;
    }
    while (lo > 0 && len(lo) > budget)
        --lo;
    return lo;
}

std::string joined_buggy(std::span<const std::string> buggy_lines)
{
    std::string joined;
    for (const auto& line : buggy_lines) {
        auto norm = normalize_whitespace(line);
        if (norm.empty())
            continue;
        if (!joined.empty())
            joined.push_back(' ');
        joined.append(norm);
    }
    return joined;
}

void assemble(EncodedSample& s, const Tokenizer& tok, const std::vector<TokenId>& prefix_ids,
              const std::vector<TokenId>& buggy_ids, const std::vector<TokenId>& delim_ids,
              const std::vector<TokenId>& context_ids)
{
    const auto sp = tok.specials();
    const std::size_t markers = tok.marker_overhead();
    const std::size_t front = markers >= 2 ? 1 : 0;

    s.input_ids.clear();
    s.input_ids.reserve(markers + prefix_ids.size() + buggy_ids.size() + delim_ids.size() + context_ids.size());
    if (front)
        s.input_ids.push_back(sp.bos);
    s.input_ids.insert(s.input_ids.end(), prefix_ids.begin(), prefix_ids.end());
    s.input_ids.insert(s.input_ids.end(), buggy_ids.begin(), buggy_ids.end());
    s.input_ids.insert(s.input_ids.end(), delim_ids.begin(), delim_ids.end());
    s.input_ids.insert(s.input_ids.end(), context_ids.begin(), context_ids.end());
    for (std::size_t i = front; i < markers; ++i)
        s.input_ids.push_back(sp.eos);

    s.n = buggy_ids.size();
    s.m = context_ids.size();
    s.prefix_tokens = prefix_ids.size();
    s.delimiter_tokens = delim_ids.size();
    s.marker_tokens = markers;
}

}  // namespace

std::string build_input(std::string_view prefix, std::span<const std::string> buggy_lines,
                        std::string_view context)
{
    std::string out = normalize_whitespace(prefix);
    auto buggy = joined_buggy(buggy_lines);
    if (!buggy.empty()) {
        out.push_back(' ');
        out.append(buggy);
    }
    out.append(" :");
    auto ctx = normalize_whitespace(context);
    if (!ctx.empty()) {
        out.push_back(' ');
        out.append(ctx);
    }
    return out;
}

EncodedSample encode_for_inference(std::string_view prefix, std::span<const std::string> buggy_lines,
                                   std::string_view context, const Tokenizer& tok, std::size_t max_in)
{
    EncodedSample s;
    s.prefix = normalize_whitespace(prefix);
    s.buggy_text = joined_buggy(buggy_lines);
    s.context_text = normalize_whitespace(context);

    auto prefix_ids = tok.encode(s.prefix);
    auto delim_ids = tok.encode(" :");
    auto buggy_ids = encode_segment(tok, s.buggy_text);
    auto context_ids = encode_segment(tok, s.context_text);

    const std::size_t fixed = tok.marker_overhead() + prefix_ids.size() + delim_ids.size();
    const std::size_t budget = max_in > fixed ? max_in - fixed : 0;

    if (buggy_ids.size() + context_ids.size() > budget) {
        if (buggy_ids.size() <= budget) {
            auto words = split_words(s.context_text);
            auto keep = fit_words(words, budget - buggy_ids.size(), tok);
            s.context_text = join_words(words, keep);
        } else {
            auto words = split_words(s.buggy_text);
            auto keep = fit_words(words, budget, tok);
            s.buggy_text = join_words(words, keep);
            s.buggy_truncated = true;
            s.context_text.clear();
            buggy_ids = encode_segment(tok, s.buggy_text);
        }
        s.context_truncated = true;
        context_ids = encode_segment(tok, s.context_text);
    }

    assemble(s, tok, prefix_ids, buggy_ids, delim_ids, context_ids);
    if (s.input_ids.size() > max_in) {
        // Only reachable when markers + prefix + ':' alone exceed max_in.
        s.input_ids.resize(max_in);
    }

    std::vector<std::string> buggy_line;
    if (!s.buggy_text.empty())
        buggy_line.push_back(s.buggy_text);
    s.input_text = build_input(s.prefix, buggy_line, s.context_text);
    return s;
}

std::string_view to_string(RejectReason reason)
{
    switch (reason) {
    case RejectReason::input_too_long:
        return "input-too-long";
    case RejectReason::target_too_long:
        return "target-too-long";
    }
    return "?";
}

std::size_t head_length(std::string_view prefix, std::span<const std::string> buggy_lines,
                        const Tokenizer& tok)
{
    return tok.marker_overhead() + tok.encode(normalize_whitespace(prefix)).size()
        + encode_segment(tok, joined_buggy(buggy_lines)).size() + tok.encode(" :").size();
}

std::size_t target_length(std::string_view target, const Tokenizer& tok)
{
    return tok.encode(target).size() + 1;
}

TrainingEncoding encode_for_training(const BugFixInstance& instance, const Tokenizer& tok,
                                     std::size_t max_in, std::size_t max_out)
{
    auto lines = split_lines(instance.source);
    auto prefix = to_string(instance.language);

    auto head = head_length(prefix, lines, tok);
    if (head > max_in)
        return Rejection { RejectReason::input_too_long, head, max_in };

    auto target_ids = tok.encode(instance.target);
    target_ids.push_back(tok.specials().eos);
    if (target_ids.size() > max_out)
        return Rejection { RejectReason::target_too_long, target_ids.size(), max_out };

    auto sample = encode_for_inference(prefix, lines, instance.context, tok, max_in);
    sample.target_ids = std::move(target_ids);
    return sample;
}

void write_encoded(std::ostream& out, const EncodedSample& sample)
{
    nlohmann::json j;
    j["input"] = sample.input_text;
    j["input_ids"] = sample.input_ids;
    if (sample.target_ids)
        j["target_ids"] = *sample.target_ids;
    else
        j["target_ids"] = nullptr;
    j["n"] = sample.n;
    j["m"] = sample.m;
    out << j.dump() << '\n';
}

}  // namespace aprkit::encoding
