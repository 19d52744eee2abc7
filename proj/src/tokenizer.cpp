#include "rsim/tokenizer.hpp"

#include <array>
#include <cctype>
#include <unordered_set>

namespace rsim {

namespace {

inline bool is_space_byte(unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}
inline bool is_letter_byte(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 0x80;
}
inline bool is_digit_byte(unsigned char c) { return c >= '0' && c <= '9'; }
inline bool is_visible_ascii(unsigned char c) { return c >= 0x21 && c <= 0x7E; }

const std::unordered_set<std::string_view>& abbreviations() {
    static const std::unordered_set<std::string_view> set = {
        "mr", "mrs", "ms", "dr", "prof", "st", "vs", "etc", "jr", "sr", "inc", "co", "no",
    };
    return set;
}

std::string lower_ascii(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return out;
}

} // namespace

std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> out;
    const std::size_t n = text.size();
    std::size_t i = 0;
    while (i < n) {
        const unsigned char c = static_cast<unsigned char>(text[i]);
        if (is_space_byte(c)) {
            ++i;
            continue;
        }
        const std::size_t start = i;
        TokenKind kind;
        if (is_letter_byte(c)) {
            kind = TokenKind::Word;
            ++i;
            while (i < n) {
                const unsigned char d = static_cast<unsigned char>(text[i]);
                if (is_letter_byte(d)) {
                    ++i;
                    continue;
                }
                if (d == '\'' && i + 1 < n &&
                    is_letter_byte(static_cast<unsigned char>(text[i + 1]))) {
                    i += 2; // apostrophe glued between letters stays in the word
                    continue;
                }
                break;
            }
        } else if (is_digit_byte(c)) {
            kind = TokenKind::Number;
            while (i < n && is_digit_byte(static_cast<unsigned char>(text[i]))) ++i;
        } else if (is_visible_ascii(c)) {
            kind = TokenKind::Punctuation;
            ++i;
        } else {
            kind = TokenKind::Other;
            ++i;
        }
        out.push_back(Token{std::string(text.substr(start, i - start)),
                            static_cast<std::uint32_t>(start),
                            static_cast<std::uint32_t>(i), kind});
    }
    return out;
}

std::vector<std::size_t> sentence_ends(const std::vector<Token>& tokens) {
    std::vector<std::size_t> ends;
    if (tokens.empty()) return ends;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const Token& t = tokens[i];
        const bool terminal = t.kind == TokenKind::Punctuation &&
                              (t.text == "." || t.text == "?" || t.text == "!");
        if (!terminal) continue;
        if (t.text == "." && i > 0 && tokens[i - 1].kind == TokenKind::Word) {
            const std::string prev = lower_ascii(tokens[i - 1].text);
            if (prev.size() == 1 || abbreviations().count(prev)) continue;
        }
        if (i + 1 >= tokens.size()) {
            ends.push_back(i + 1);
            continue;
        }
        const Token& nx = tokens[i + 1];
        const bool gap = nx.start > t.end;
        const bool capital = nx.kind == TokenKind::Word && nx.text[0] >= 'A' && nx.text[0] <= 'Z';
        if (gap && capital) ends.push_back(i + 1);
    }
    if (ends.empty() || ends.back() < tokens.size()) ends.push_back(tokens.size());
    return ends;
}

std::size_t word_count(std::string_view text) {
    std::size_t count = 0;
    bool in_word = false;
    for (char ch : text) {
        const bool space = is_space_byte(static_cast<unsigned char>(ch));
        if (!space && !in_word) ++count;
        in_word = !space;
    }
    return count;
}

} // namespace rsim
