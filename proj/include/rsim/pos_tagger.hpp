#pragma once

#include "rsim/tokenizer.hpp"

#include <cstdint>
#include <string_view>
#include <vector>

namespace rsim {

// Fixed coarse tagset. The enum order is contractual: feature registries
// index POS unigram/bigram features by it.
enum class CoarseTag : std::uint8_t {
    NOUN,
    PROPN,
    VERB,
    ADJ,
    ADV,
    PRON,
    DET,
    PREP,
    CONJ,
    NUM,
    PUNCT,
    X,
};

inline constexpr std::size_t kTagCount = 12;

std::string_view tag_name(CoarseTag t);

// Parses a tag name; throws rsim::Error for unknown names.
CoarseTag tag_from_name(std::string_view name);

/// Rule-based coarse tagger, one tag per token. Assignment order: token kind
/// (punctuation -> PUNCT, number -> NUM, non-text -> X), then an embedded
/// closed-class lexicon of ~500 entries, then suffix rules, then a
/// capitalization heuristic (capitalized word not at sentence start ->
/// PROPN), else NOUN. Deterministic.
std::vector<CoarseTag> pos_tag(const std::vector<Token>& tokens);

// Number of entries in the embedded lexicon (exposed for diagnostics).
std::size_t pos_lexicon_size();

} // namespace rsim
