#include "aprkit/comments.hpp"

#include <array>
#include <vector>

#include "aprkit/text.hpp"

namespace aprkit::corpus {

namespace {

// Accumulates kept characters and remembers which output lines lost a comment.
class Sink {
public:
    void put(char c)
    {
        text_.push_back(c);
        if (c == '\n')
            touched_.push_back(false);
    }

    void put(std::string_view s)
    {
        for (char c : s)
            put(c);
    }

    void mark_touched() { touched_.back() = true; }

    const std::string& text() const { return text_; }

    std::string finish(bool input_had_trailing_newline) const
    {
        std::vector<std::string> kept;
        std::size_t line_no = 0;
        std::size_t start = 0;
        while (start <= text_.size()) {
            auto nl = text_.find('\n', start);
            auto end = nl == std::string::npos ? text_.size() : nl;
            std::string_view line(text_.data() + start, end - start);
            bool last = nl == std::string::npos;
            if (last && line.empty() && line_no > 0 && !touched_[line_no])
                break;
            if (touched_[line_no]) {
                std::size_t len = line.size();
                while (len > 0 && is_space(line[len - 1]))
                    --len;
                if (len > 0)
                    kept.emplace_back(line.substr(0, len));
            } else {
                kept.emplace_back(line);
            }
            if (last)
                break;
            start = nl + 1;
            ++line_no;
        }
        std::string out = join(kept, "\n");
        if (input_had_trailing_newline && !out.empty())
            out.push_back('\n');
        return out;
    }

private:
    std::string text_;
    std::vector<bool> touched_ { false };
};

bool is_ident_char(char c)
{
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '$';
}

// Whether a '/' at this point starts a regular-expression literal, judged from
// the last significant lexeme already emitted.
bool js_regex_allowed(const std::string& emitted)
{
    std::size_t i = emitted.size();
    while (i > 0 && is_space(emitted[i - 1]))
        --i;
    if (i == 0)
        return true;
    char last = emitted[i - 1];
    if (is_ident_char(last)) {
        std::size_t j = i;
        while (j > 0 && is_ident_char(emitted[j - 1]))
            --j;
        std::string_view word(emitted.data() + j, i - j);
        static constexpr std::array<std::string_view, 13> keywords {
            "return", "typeof", "case", "do", "else", "in", "instanceof",
            "new", "delete", "void", "throw", "yield", "await"
        };
        for (auto kw : keywords) {
            if (word == kw)
                return true;
        }
        return false;
    }
    return std::string_view("(,=:[!&|?{};+-*%<>~^").find(last) != std::string_view::npos;
}

class Scanner {
public:
    Scanner(std::string_view code, Language lang)
        : code_(code)
        , lang_(lang)
    {
    }

    std::string run()
    {
        if (lang_ == Language::Python)
            scan_python();
        else
            scan_c_family();
        bool trailing_nl = !code_.empty() && code_.back() == '\n';
        return out_.finish(trailing_nl);
    }

private:
    char at(std::size_t i) const { return i < code_.size() ? code_[i] : '\0'; }

    bool starts_with(std::size_t i, std::string_view s) const
    {
        return code_.substr(i, s.size()) == s;
    }

    // Copies a quoted literal that ends at the matching quote or at a newline.
    void copy_line_literal(char quote)
    {
        out_.put(code_[pos_++]);
        while (pos_ < code_.size()) {
            char c = code_[pos_];
            if (c == '\\' && pos_ + 1 < code_.size()) {
                out_.put(c);
                out_.put(code_[pos_ + 1]);
                pos_ += 2;
                continue;
            }
            if (c == '\n')
                return;
            out_.put(c);
            ++pos_;
            if (c == quote)
                return;
        }
    }

    // Copies a literal that may span lines and ends at `close`.
    void copy_multiline_literal(std::size_t open_len, std::string_view close)
    {
        out_.put(code_.substr(pos_, open_len));
        pos_ += open_len;
        while (pos_ < code_.size()) {
            if (starts_with(pos_, close)) {
                out_.put(close);
                pos_ += close.size();
                return;
            }
            char c = code_[pos_];
            if (c == '\\' && pos_ + 1 < code_.size()) {
                out_.put(c);
                out_.put(code_[pos_ + 1]);
                pos_ += 2;
                continue;
            }
            out_.put(c);
            ++pos_;
        }
    }

    void skip_line_comment(bool backslash_continues)
    {
        out_.mark_touched();
        while (pos_ < code_.size()) {
            if (code_[pos_] == '\n') {
                bool continued = backslash_continues && pos_ > 0 && code_[pos_ - 1] == '\\';
                if (!continued)
                    return;
                out_.put('\n');
                out_.mark_touched();
            }
            ++pos_;
        }
    }

    void skip_block_comment()
    {
        out_.mark_touched();
        pos_ += 2;
        while (pos_ < code_.size()) {
            if (starts_with(pos_, "*/")) {
                pos_ += 2;
                return;
            }
            if (code_[pos_] == '\n') {
                out_.put('\n');
                out_.mark_touched();
            }
            ++pos_;
        }
    }

    void copy_js_regex()
    {
        out_.put(code_[pos_++]);
        bool in_class = false;
        while (pos_ < code_.size()) {
            char c = code_[pos_];
            if (c == '\n')
                return;
            if (c == '\\' && pos_ + 1 < code_.size()) {
                out_.put(c);
                out_.put(code_[pos_ + 1]);
                pos_ += 2;
                continue;
            }
            out_.put(c);
            ++pos_;
            if (c == '[')
                in_class = true;
            else if (c == ']')
                in_class = false;
            else if (c == '/' && !in_class)
                return;
        }
    }

    void scan_c_family()
    {
        const bool js = lang_ == Language::JavaScript;
        while (pos_ < code_.size()) {
            char c = code_[pos_];
            if (c == '/' && at(pos_ + 1) == '/') {
                skip_line_comment(lang_ == Language::C);
            } else if (c == '/' && at(pos_ + 1) == '*') {
                skip_block_comment();
            } else if (lang_ == Language::Java && starts_with(pos_, "\"\"\"")) {
                copy_multiline_literal(3, "\"\"\"");
            } else if (c == '"' || c == '\'') {
                copy_line_literal(c);
            } else if (js && c == '`') {
                copy_multiline_literal(1, "`");
            } else if (js && c == '/' && js_regex_allowed(out_.text())) {
                copy_js_regex();
            } else {
                out_.put(c);
                ++pos_;
            }
        }
    }

    void scan_python()
    {
        while (pos_ < code_.size()) {
            char c = code_[pos_];
            if (c == '#') {
                skip_line_comment(false);
            } else if (c == '"' || c == '\'') {
                std::string triple(3, c);
                if (starts_with(pos_, triple))
                    copy_multiline_literal(3, triple);
                else
                    copy_line_literal(c);
            } else {
                out_.put(c);
                ++pos_;
            }
        }
    }

    std::string_view code_;
    Language lang_;
    std::size_t pos_ = 0;
    Sink out_;
};

}  // namespace

std::string remove_comments(std::string_view code, Language lang)
{
    return Scanner(code, lang).run();
}

std::string remove_comments(std::string_view code, std::string_view language_tag)
{
    return remove_comments(code, parse_language(language_tag));
}

}  // namespace aprkit::corpus
