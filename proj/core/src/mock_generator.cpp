#include "aprkit/mock_generator.hpp"

#include <array>
#include <cctype>
#include <map>
#include <random>
#include <unordered_set>

#include "aprkit/text.hpp"

namespace aprkit::generation {

namespace {

enum class LexKind { Identifier, Number, Operator, String, Space, Other };

struct Lexeme {
    LexKind kind;
    std::string text;
};

constexpr std::array<std::string_view, 22> multi_char_ops {
    "===", "!==", ">>>", "<<=", ">>=", "**", "==", "!=", "<=", ">=", "&&",
    "||", "++", "--", "+=", "-=", "*=", "/=", "->", "<<", ">>", "//",
};

const std::map<std::string, std::vector<std::string>, std::less<>>& flip_table()
{
    static const std::map<std::string, std::vector<std::string>, std::less<>> table {
        { "+", { "-" } }, { "-", { "+" } }, { "*", { "/" } }, { "/", { "*" } },
        { "<", { "<=", ">" } }, { "<=", { "<", ">=" } }, { ">", { ">=", "<" } }, { ">=", { ">", "<=" } },
        { "==", { "!=" } }, { "!=", { "==" } }, { "===", { "!==" } }, { "!==", { "===" } },
        { "&&", { "||" } }, { "||", { "&&" } }, { "+=", { "-=" } }, { "-=", { "+=" } },
        { "++", { "--" } }, { "--", { "++" } },
        { "and", { "or" } }, { "or", { "and" } },
        { "true", { "false" } }, { "false", { "true" } }, { "True", { "False" } }, { "False", { "True" } },
    };
    return table;
}

bool is_keyword(std::string_view word)
{
    static const std::unordered_set<std::string_view> keywords {
        "return", "if", "else", "for", "while", "do", "int", "long", "char", "float", "double", "void",
        "boolean", "bool", "def", "class", "public", "private", "protected", "static", "final", "new",
        "null", "None", "True", "False", "true", "false", "and", "or", "not", "in", "is", "var", "let",
        "const", "function", "this", "self", "yield", "break", "continue", "throw", "throws", "try",
        "catch", "import", "from", "lambda", "pass", "elif", "switch", "case", "default", "struct",
        "unsigned", "sizeof", "typeof", "instanceof", "undefined", "String",
    };
    return keywords.contains(word);
}

bool ident_start(char c)
{
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

bool ident_char(char c)
{
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

std::vector<Lexeme> lex(std::string_view s)
{
    std::vector<Lexeme> out;
    std::size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        std::size_t start = i;
        if (is_space(c)) {
            while (i < s.size() && is_space(s[i]))
                ++i;
            out.push_back({ LexKind::Space, std::string(s.substr(start, i - start)) });
        } else if (ident_start(c)) {
            while (i < s.size() && ident_char(s[i]))
                ++i;
            out.push_back({ LexKind::Identifier, std::string(s.substr(start, i - start)) });
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            while (i < s.size() && (ident_char(s[i]) || s[i] == '.'))
                ++i;
            out.push_back({ LexKind::Number, std::string(s.substr(start, i - start)) });
        } else if (c == '"' || c == '\'' || c == '`') {
            ++i;
            while (i < s.size() && s[i] != c) {
                if (s[i] == '\\')
                    ++i;
                ++i;
            }
            i = std::min(i + 1, s.size());
            out.push_back({ LexKind::String, std::string(s.substr(start, i - start)) });
        } else {
            std::string_view op;
            for (auto cand : multi_char_ops) {
                if (s.substr(i, cand.size()) == cand) {
                    op = cand;
                    break;
                }
            }
            if (op.empty()) {
                ++i;
                bool flippable = flip_table().contains(s.substr(start, 1));
                out.push_back({ flippable ? LexKind::Operator : LexKind::Other, std::string(s.substr(start, 1)) });
            } else {
                i += op.size();
                out.push_back({ LexKind::Operator, std::string(op) });
            }
        }
    }
    return out;
}

std::string render(const std::vector<Lexeme>& lexemes, std::size_t replace_at, std::string_view replacement)
{
    std::string out;
    for (std::size_t i = 0; i < lexemes.size(); ++i)
        out.append(i == replace_at ? std::string(replacement) : lexemes[i].text);
    return out;
}

std::uint64_t fnv1a(std::string_view s)
{
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

// Fisher-Yates with raw engine output so results do not depend on the
// standard library's distribution implementations.
void shuffle(std::vector<std::string>& v, std::mt19937_64& rng)
{
    for (std::size_t i = v.size(); i > 1; --i) {
        auto j = static_cast<std::size_t>(rng() % i);
        std::swap(v[i - 1], v[j]);
    }
}

double unit(std::mt19937_64& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

ParsedInput parse_model_input(std::string_view input_text)
{
    auto words = split_words(input_text);
    ParsedInput p;
    if (words.empty())
        return p;
    p.prefix = words[0];
    std::size_t colon = words.size();
    for (std::size_t i = 1; i < words.size(); ++i) {
        if (words[i] == ":") {
            colon = i;
            break;
        }
    }
    std::vector<std::string> buggy(words.begin() + 1, words.begin() + static_cast<std::ptrdiff_t>(colon));
    p.buggy = join(buggy, " ");
    if (colon < words.size()) {
        std::vector<std::string> ctx(words.begin() + static_cast<std::ptrdiff_t>(colon) + 1, words.end());
        p.context = join(ctx, " ");
    }
    return p;
}

std::vector<ScoredText> mock_generate_text(std::string_view input_text, std::size_t t, std::uint64_t seed)
{
    const auto parsed = parse_model_input(input_text);
    const auto buggy = lex(parsed.buggy);
    const auto context = lex(parsed.context);

    std::vector<std::string> flips;
    std::vector<std::string> swaps;
    std::vector<std::string> literals;
    std::vector<std::string> deletions;

    const auto& table = flip_table();
    for (std::size_t i = 0; i < buggy.size(); ++i) {
        const auto& lx = buggy[i];
        if (lx.kind == LexKind::Operator || lx.kind == LexKind::Identifier) {
            if (auto it = table.find(lx.text); it != table.end()) {
                for (const auto& r : it->second)
                    flips.push_back(render(buggy, i, r));
            }
        }
    }

    std::vector<std::string> context_ids;
    {
        std::unordered_set<std::string> seen;
        for (const auto& lx : context) {
            if (lx.kind == LexKind::Identifier && !is_keyword(lx.text) && seen.insert(lx.text).second)
                context_ids.push_back(lx.text);
        }
    }
    for (std::size_t i = 0; i < buggy.size(); ++i) {
        const auto& lx = buggy[i];
        if (lx.kind != LexKind::Identifier || is_keyword(lx.text))
            continue;
        for (const auto& id : context_ids) {
            if (id != lx.text)
                swaps.push_back(render(buggy, i, id));
        }
    }

    for (std::size_t i = 0; i < buggy.size(); ++i) {
        const auto& lx = buggy[i];
        if (lx.kind != LexKind::Number || lx.text.find_first_not_of("0123456789") != std::string::npos)
            continue;
        if (lx.text.size() > 9)
            continue;
        long long v = std::stoll(lx.text);
        literals.push_back(render(buggy, i, std::to_string(v + 1)));
        if (v > 0)
            literals.push_back(render(buggy, i, std::to_string(v - 1)));
    }

    deletions.emplace_back();
    {
        std::vector<std::string> statements;
        std::string current;
        for (const auto& lx : buggy) {
            current += lx.text;
            if (lx.text == ";") {
                statements.push_back(std::string(trim(current)));
                current.clear();
            }
        }
        if (!trim(current).empty())
            statements.push_back(std::string(trim(current)));
        if (statements.size() > 1) {
            for (std::size_t drop = 0; drop < statements.size(); ++drop) {
                std::vector<std::string> rest;
                for (std::size_t j = 0; j < statements.size(); ++j) {
                    if (j != drop)
                        rest.push_back(statements[j]);
                }
                deletions.push_back(join(rest, " "));
            }
        }
    }

    std::mt19937_64 rng(fnv1a(input_text) ^ (seed * 0x9E3779B97F4A7C15ULL + 0x632BE59BD9B4E019ULL));
    shuffle(flips, rng);
    shuffle(swaps, rng);
    shuffle(literals, rng);
    shuffle(deletions, rng);

    std::vector<ScoredText> out;
    std::unordered_set<std::string> emitted;
    auto emit = [&](std::string text) {
        if (out.size() >= t)
            return;
        auto norm = normalize_whitespace(text);
        if (!emitted.insert(norm).second)
            return;
        double score = -(0.1 * static_cast<double>(out.size() + 1) + 0.09 * unit(rng));
        out.push_back({ std::move(norm), score });
    };
    for (auto* group : { &flips, &swaps, &literals, &deletions }) {
        for (auto& text : *group)
            emit(std::move(text));
    }
    emit(parsed.buggy);
    return out;
}

std::vector<CandidatePatch> mock_generate(const encoding::EncodedSample& sample, std::size_t t, std::uint64_t seed)
{
    auto texts = mock_generate_text(sample.input_text, t, seed);
    std::vector<CandidatePatch> out;
    out.reserve(texts.size());
    for (std::size_t i = 0; i < texts.size(); ++i) {
        CandidatePatch c;
        c.text = std::move(texts[i].text);
        c.score = texts[i].score;
        c.rank = i + 1;
        out.push_back(std::move(c));
    }
    return out;
}

}  // namespace aprkit::generation
