#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace aprkit {

/// Programming languages the pipeline handles. The tag text doubles as the
/// model's control-code prefix ("Java", "Python", "C", "JavaScript").
enum class Language { Java, Python, C, JavaScript };

class unknown_language : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

std::string_view to_string(Language lang);

std::optional<Language> try_parse_language(std::string_view tag);

/// Throws unknown_language for anything but the four supported tags.
Language parse_language(std::string_view tag);

}  // namespace aprkit
