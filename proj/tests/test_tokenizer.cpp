#include "rsim/tokenizer.hpp"

#include "doctest.h"

#include <string>

using namespace rsim;

namespace {

// Reassemble the input from tokens plus skipped whitespace.
std::string reassemble(std::string_view text, const std::vector<Token>& tokens) {
    std::string out;
    std::size_t cursor = 0;
    for (const Token& t : tokens) {
        out.append(text.substr(cursor, t.start - cursor));
        out.append(t.text);
        cursor = t.end;
    }
    out.append(text.substr(cursor));
    return out;
}

} // namespace

TEST_CASE("tokenize: canonical split") {
    const auto tokens = tokenize("The cat sat.");
    REQUIRE(tokens.size() == 4);
    CHECK(tokens[0].text == "The");
    CHECK(tokens[1].text == "cat");
    CHECK(tokens[2].text == "sat");
    CHECK(tokens[3].text == ".");
    CHECK(tokens[3].kind == TokenKind::Punctuation);
    CHECK(tokens[0].start == 0);
    CHECK(tokens[0].end == 3);
    CHECK(tokens[3].start == 11);
    CHECK(tokens[3].end == 12);
}

TEST_CASE("tokenize: empty input") {
    CHECK(tokenize("").empty());
    CHECK(tokenize("   \t\n ").empty());
}

TEST_CASE("tokenize: apostrophe golden file") {
    // Frozen by hand inspection under the documented apostrophe rule: an
    // apostrophe between two letters stays inside the word; leading and
    // trailing apostrophes split off.
    struct Golden {
        const char* text;
        TokenKind kind;
    };
    const std::string input = "don't stop, the dogs' bones aren't 'theirs' anymore";
    const Golden expected[] = {
        {"don't", TokenKind::Word},   {"stop", TokenKind::Word},
        {",", TokenKind::Punctuation}, {"the", TokenKind::Word},
        {"dogs", TokenKind::Word},    {"'", TokenKind::Punctuation},
        {"bones", TokenKind::Word},   {"aren't", TokenKind::Word},
        {"'", TokenKind::Punctuation}, {"theirs", TokenKind::Word},
        {"'", TokenKind::Punctuation}, {"anymore", TokenKind::Word},
    };
    const auto tokens = tokenize(input);
    REQUIRE(tokens.size() == std::size(expected));
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        CAPTURE(i);
        CHECK(tokens[i].text == expected[i].text);
        CHECK(tokens[i].kind == expected[i].kind);
    }
}

TEST_CASE("tokenize: numbers and mixed content") {
    const auto tokens = tokenize("room 42, price $3.50!");
    REQUIRE(tokens.size() == 9);
    CHECK(tokens[1].text == "42");
    CHECK(tokens[1].kind == TokenKind::Number);
    CHECK(tokens[4].text == "$");
    CHECK(tokens[5].text == "3");
    CHECK(tokens[6].text == ".");
    CHECK(tokens[7].text == "50");
    CHECK(tokens[8].text == "!");
}

TEST_CASE("tokenize: lossless over tricky inputs") {
    const char* cases[] = {
        "The cat sat.",
        "  leading and trailing  ",
        "a\tb\nc\r\nd",
        "don't--stop!!  (really?)",
        "unicode: \xc3\xa9t\xc3\xa9 and \xd0\xbf\xd1\x80\xd0\xb8\xd0\xb2\xd0\xb5\xd1\x82",
        "",
        "...",
        "x",
    };
    for (const char* c : cases) {
        CAPTURE(c);
        const auto tokens = tokenize(c);
        CHECK(reassemble(c, tokens) == c);
        // tokens are in order, non-overlapping, within bounds
        std::uint32_t prev_end = 0;
        for (const Token& t : tokens) {
            CHECK(t.start >= prev_end);
            CHECK(t.start < t.end);
            CHECK(t.end <= std::string_view(c).size());
            prev_end = t.end;
        }
    }
}

TEST_CASE("sentence_ends: basic segmentation") {
    const auto tokens = tokenize("First one. Second one! Is this third? yes, still third.");
    const auto ends = sentence_ends(tokens);
    REQUIRE(ends.size() == 3);
    // "yes" is lowercase after '?', so the third sentence continues
    CHECK(ends.back() == tokens.size());
}

TEST_CASE("sentence_ends: abbreviations do not split") {
    const auto tokens = tokenize("Mr. Smith went home. He slept.");
    const auto ends = sentence_ends(tokens);
    CHECK(ends.size() == 2);
}

TEST_CASE("sentence_ends: single-letter initials do not split") {
    const auto tokens = tokenize("J. Smith wrote. Nobody read.");
    const auto ends = sentence_ends(tokens);
    CHECK(ends.size() == 2);
}

TEST_CASE("word_count: whitespace-separated words") {
    CHECK(word_count("") == 0);
    CHECK(word_count("one") == 1);
    CHECK(word_count("one two  three\nfour") == 4);
    CHECK(word_count("  padded  ") == 1);
}
