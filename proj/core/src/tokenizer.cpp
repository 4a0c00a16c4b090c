#include "aprkit/tokenizer.hpp"

#include "aprkit/text.hpp"

namespace aprkit {

WhitespaceTokenizer::WhitespaceTokenizer()
{
    // Reserve the marker ids so that no word collides with them.
    words_ = { "<s>", "</s>", "<pad>", "<unk>" };
    for (std::size_t i = 0; i < words_.size(); ++i)
        ids_.emplace(words_[i], static_cast<TokenId>(i));
}

TokenId WhitespaceTokenizer::intern(std::string_view word) const
{
    std::string key(word);
    if (auto it = ids_.find(key); it != ids_.end())
        return it->second;
    auto id = static_cast<TokenId>(words_.size());
    words_.push_back(key);
    ids_.emplace(std::move(key), id);
    return id;
}

std::vector<TokenId> WhitespaceTokenizer::encode(std::string_view text) const
{
    auto words = split_words(text);
    std::vector<TokenId> ids;
    ids.reserve(words.size());
    std::lock_guard lock(mutex_);
    for (const auto& w : words)
        ids.push_back(intern(w));
    return ids;
}

std::optional<std::string> WhitespaceTokenizer::decode(std::span<const TokenId> ids) const
{
    const auto sp = specials();
    std::string out;
    std::lock_guard lock(mutex_);
    for (TokenId id : ids) {
        if (id == sp.bos || id == sp.eos || id == sp.pad)
            continue;
        std::string_view word = "<unk>";
        if (id >= 0 && static_cast<std::size_t>(id) < words_.size())
            word = words_[static_cast<std::size_t>(id)];
        if (!out.empty())
            out.push_back(' ');
        out.append(word);
    }
    return out;
}

std::size_t WhitespaceTokenizer::vocabulary_size() const
{
    std::lock_guard lock(mutex_);
    return words_.size();
}

}  // namespace aprkit
