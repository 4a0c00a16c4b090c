#pragma once

#include <cstdint>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace aprkit {

using TokenId = std::int32_t;

struct SpecialTokens {
    TokenId bos = 0;
    TokenId eos = 1;
    TokenId pad = 2;
    TokenId unk = 3;
};

class tokenizer_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Tokenizer contract shared by the in-process whitespace tokenizer and the
/// generator-backed subword tokenizer.
///
/// encode() never adds markers; the encoder adds marker_overhead() of them
/// around every input sequence. encode() must be deterministic. decode() is
/// optional: tokenizers that cannot invert return std::nullopt.
class Tokenizer {
public:
    virtual ~Tokenizer() = default;

    virtual std::vector<TokenId> encode(std::string_view text) const = 0;
    virtual std::optional<std::string> decode(std::span<const TokenId> ids) const = 0;
    virtual SpecialTokens specials() const = 0;

    /// Markers added around one encoded input (bos + eos by default).
    virtual std::size_t marker_overhead() const { return 2; }

    std::size_t count(std::string_view text) const { return encode(text).size(); }
};

/// One token per whitespace-separated word. Ids are interned on first sight,
/// so a single instance is deterministic and decode(encode(t)) equals t with
/// whitespace runs collapsed. Thread-safe.
class WhitespaceTokenizer final : public Tokenizer {
public:
    WhitespaceTokenizer();

    std::vector<TokenId> encode(std::string_view text) const override;
    std::optional<std::string> decode(std::span<const TokenId> ids) const override;
    SpecialTokens specials() const override { return {}; }

    std::size_t vocabulary_size() const;

private:
    TokenId intern(std::string_view word) const;

    mutable std::mutex mutex_;
    mutable std::unordered_map<std::string, TokenId> ids_;
    mutable std::vector<std::string> words_;
};

}  // namespace aprkit
