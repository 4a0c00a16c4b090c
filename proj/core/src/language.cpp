#include "aprkit/language.hpp"

namespace aprkit {

std::string_view to_string(Language lang)
{
    switch (lang) {
    case Language::Java:
        return "Java";
    case Language::Python:
        return "Python";
    case Language::C:
        return "C";
    case Language::JavaScript:
        return "JavaScript";
    }
    return "?";
}

std::optional<Language> try_parse_language(std::string_view tag)
{
    if (tag == "Java")
        return Language::Java;
    if (tag == "Python")
        return Language::Python;
    if (tag == "C")
        return Language::C;
    if (tag == "JavaScript")
        return Language::JavaScript;
    return std::nullopt;
}

Language parse_language(std::string_view tag)
{
    if (auto lang = try_parse_language(tag))
        return *lang;
    throw unknown_language("unknown language tag '" + std::string(tag) + "'");
}

}  // namespace aprkit
