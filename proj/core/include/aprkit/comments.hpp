#pragma once

#include <string>
#include <string_view>

#include "aprkit/language.hpp"

namespace aprkit::corpus {

/// Deletes every comment lexeme from a code fragment.
///
/// The scanner only knows enough of each grammar to tell comments apart from
/// string, character, template and (JavaScript) regular-expression literals,
/// so it works on hunks that do not parse on their own. Lines that become
/// blank because a comment was removed are dropped, and trailing whitespace
/// left in front of a removed comment is trimmed. Lines that were blank in
/// the input are kept.
///
/// Unterminated literals end at the end of their line; an unterminated block
/// comment runs to the end of the input.
std::string remove_comments(std::string_view code, Language lang);

/// Same as above for a textual language tag; throws unknown_language.
std::string remove_comments(std::string_view code, std::string_view language_tag);

}  // namespace aprkit::corpus
