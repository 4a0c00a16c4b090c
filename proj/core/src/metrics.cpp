#include "aprkit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "aprkit/text.hpp"

namespace aprkit::bench {

int exact_match(std::string_view pred, std::string_view ref)
{
    return normalize_whitespace(pred) == normalize_whitespace(ref) ? 1 : 0;
}

namespace {

void replace_all(std::string& s, std::string_view from, std::string_view to)
{
    for (auto pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size()))
        s.replace(pos, from.size(), to);
}

bool is_digit(char c)
{
    return c >= '0' && c <= '9';
}

// Characters split off on their own: { | } ~ [ \ ] ^ _ ` space..& ( ) * + : ; < = > ? @ /
bool is_symbol(char c)
{
    auto u = static_cast<unsigned char>(c);
    return (u >= 0x7B && u <= 0x7E) || (u >= 0x5B && u <= 0x60) || (u >= 0x20 && u <= 0x26)
        || (u >= 0x28 && u <= 0x2B) || (u >= 0x3A && u <= 0x40) || c == '/';
}

bool is_split_space(char c)
{
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f'
        || (static_cast<unsigned char>(c) >= 0x1C && static_cast<unsigned char>(c) <= 0x1F);
}

std::vector<std::string> ngrams(const std::vector<std::string>& words, int n)
{
    std::vector<std::string> out;
    const auto len = static_cast<std::size_t>(n);
    if (words.size() < len)
        return out;
    for (std::size_t i = 0; i + len <= words.size(); ++i) {
        std::string g = words[i];
        for (std::size_t j = 1; j < len; ++j) {
            g += '\x01';
            g += words[i + j];
        }
        out.push_back(std::move(g));
    }
    return out;
}

std::map<std::string, std::size_t> count(const std::vector<std::string>& grams)
{
    std::map<std::string, std::size_t> c;
    for (const auto& g : grams)
        ++c[g];
    return c;
}

double my_log(double x)
{
    return x == 0.0 ? -9999999999.0 : std::log(x);
}

}  // namespace

std::vector<std::string> tokenize_13a(std::string_view input)
{
    std::string line(input);
    replace_all(line, "<skipped>", "");
    replace_all(line, "-\n", "");
    std::replace(line.begin(), line.end(), '\n', ' ');
    if (line.find('&') != std::string::npos) {
        replace_all(line, "&quot;", "\"");
        replace_all(line, "&amp;", "&");
        replace_all(line, "&lt;", "<");
        replace_all(line, "&gt;", ">");
    }
    line = " " + line + " ";

    std::string s1;
    for (char c : line) {
        if (is_symbol(c)) {
            s1 += ' ';
            s1 += c;
            s1 += ' ';
        } else {
            s1 += c;
        }
    }

    auto period_comma = [](char c) { return c == '.' || c == ','; };
    std::string s2;
    for (std::size_t i = 0; i < s1.size();) {
        if (i + 1 < s1.size() && !is_digit(s1[i]) && period_comma(s1[i + 1])) {
            s2 += s1[i];
            s2 += ' ';
            s2 += s1[i + 1];
            s2 += ' ';
            i += 2;
        } else {
            s2 += s1[i++];
        }
    }

    std::string s3;
    for (std::size_t i = 0; i < s2.size();) {
        if (i + 1 < s2.size() && period_comma(s2[i]) && !is_digit(s2[i + 1])) {
            s3 += ' ';
            s3 += s2[i];
            s3 += ' ';
            s3 += s2[i + 1];
            i += 2;
        } else {
            s3 += s2[i++];
        }
    }

    std::string s4;
    for (std::size_t i = 0; i < s3.size();) {
        if (i + 1 < s3.size() && is_digit(s3[i]) && s3[i + 1] == '-') {
            s4 += s3[i];
            s4 += " - ";
            i += 2;
        } else {
            s4 += s3[i++];
        }
    }

    std::vector<std::string> words;
    std::string cur;
    for (char c : s4) {
        if (is_split_space(c)) {
            if (!cur.empty())
                words.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty())
        words.push_back(std::move(cur));
    return words;
}

void BleuStats::add(std::string_view pred, std::span<const std::string> refs)
{
    const auto hyp = tokenize_13a(pred);
    std::vector<std::vector<std::string>> ref_words;
    for (const auto& r : refs)
        ref_words.push_back(tokenize_13a(r));

    sys_len += hyp.size();
    if (!ref_words.empty()) {
        std::size_t best = ref_words.front().size();
        auto diff = [&](std::size_t len) { return len > hyp.size() ? len - hyp.size() : hyp.size() - len; };
        for (const auto& r : ref_words) {
            auto d = diff(r.size());
            if (d < diff(best) || (d == diff(best) && r.size() < best))
                best = r.size();
        }
        ref_len += best;
    }

    for (int n = 1; n <= bleu_order; ++n) {
        auto hyp_counts = count(ngrams(hyp, n));
        std::map<std::string, std::size_t> max_ref;
        for (const auto& r : ref_words) {
            for (const auto& [g, c] : count(ngrams(r, n)))
                max_ref[g] = std::max(max_ref[g], c);
        }
        std::size_t correct_n = 0;
        std::size_t total_n = 0;
        for (const auto& [g, c] : hyp_counts) {
            total_n += c;
            if (auto it = max_ref.find(g); it != max_ref.end())
                correct_n += std::min(c, it->second);
        }
        correct[static_cast<std::size_t>(n - 1)] += static_cast<double>(correct_n);
        total[static_cast<std::size_t>(n - 1)] += static_cast<double>(total_n);
    }
}

double BleuStats::score() const
{
    double bp = 1.0;
    if (sys_len < ref_len)
        bp = sys_len > 0 ? std::exp(1.0 - static_cast<double>(ref_len) / static_cast<double>(sys_len)) : 0.0;

    if (std::all_of(correct.begin(), correct.end(), [](double c) { return c == 0.0; }))
        return 0.0;

    auto c = correct;
    auto t = total;
    std::vector<double> precisions(bleu_order, 0.0);
    for (std::size_t n = 1; n <= precisions.size(); ++n) {
        if (n > 1) {
            c[n - 1] += bleu_smoothing_k;
            t[n - 1] += bleu_smoothing_k;
        }
        if (t[n - 1] == 0.0)
            break;
        if (c[n - 1] != 0.0)
            precisions[n - 1] = 100.0 * c[n - 1] / t[n - 1];
    }
    double sum = 0.0;
    for (double p : precisions)
        sum += my_log(p);
    return bp * std::exp(sum / bleu_order);
}

double bleu(std::string_view pred, std::span<const std::string> refs)
{
    BleuStats s;
    s.add(pred, refs);
    return s.score();
}

double corpus_bleu(std::span<const std::string> preds, std::span<const std::vector<std::string>> refs)
{
    BleuStats s;
    for (std::size_t i = 0; i < preds.size(); ++i)
        s.add(preds[i], i < refs.size() ? std::span<const std::string>(refs[i]) : std::span<const std::string>());
    return s.score();
}

double objective_metric(double exact_match_rate, double bleu_score)
{
    return exact_match_rate * 100.0 + bleu_score;
}

double compilable_rate(std::span<const validation::BugValidationReport> reports, std::size_t x)
{
    double sum = 0.0;
    std::size_t bugs = 0;
    for (const auto& r : reports) {
        std::size_t counted = 0;
        std::size_t compiled = 0;
        for (const auto& o : r.outcomes) {
            if (o.candidate_position > x || o.injected || o.verdict == validation::Verdict::harness_error)
                continue;
            ++counted;
            if (o.verdict != validation::Verdict::compile_error && o.verdict != validation::Verdict::timeout)
                ++compiled;
        }
        if (counted == 0)
            continue;
        sum += static_cast<double>(compiled) / static_cast<double>(counted);
        ++bugs;
    }
    return bugs == 0 ? 0.0 : sum / static_cast<double>(bugs);
}

std::map<std::size_t, std::size_t> ranking_thresholds(std::span<const std::size_t> positions,
                                                      std::span<const std::size_t> thresholds)
{
    std::map<std::size_t, std::size_t> out;
    for (auto t : thresholds) {
        out[t] = static_cast<std::size_t>(
            std::count_if(positions.begin(), positions.end(), [t](std::size_t p) { return p <= t; }));
    }
    return out;
}

}  // namespace aprkit::bench
