#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace rsim {

enum class TokenKind : std::uint8_t { Word, Punctuation, Number, Other };

struct Token {
    std::string text;
    std::uint32_t start = 0; // byte offsets into the source text
    std::uint32_t end = 0;
    TokenKind kind = TokenKind::Word;
};

/// Lossless tokenization: concatenating token texts with the whitespace that
/// was skipped reproduces the input byte for byte.
///
/// Rules: runs of letters form a word, where "letter" is an ASCII letter or
/// any byte >= 0x80 (so multi-byte UTF-8 text stays in word tokens); an ASCII
/// apostrophe directly between two letters stays inside the word ("don't");
/// runs of ASCII digits form a number token; every other printable ASCII
/// character is a one-character punctuation token; remaining control bytes
/// come out as Other. Offsets are byte offsets.
std::vector<Token> tokenize(std::string_view text);

/// Sentence segmentation over a token stream. A sentence ends at . ? ! when
/// the mark is followed by whitespace and a capitalized word, or at end of
/// input. A short embedded abbreviation list ("mr", "dr", ...) and
/// single-letter initials suppress the period split. Returns exclusive end
/// indices into `tokens`, one per sentence (empty for an empty stream).
std::vector<std::size_t> sentence_ends(const std::vector<Token>& tokens);

/// Whitespace-separated word count (the unit used by corpus filtering).
std::size_t word_count(std::string_view text);

} // namespace rsim
