#pragma once

#include "rsim/pos_tagger.hpp"
#include "rsim/tokenizer.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace rsim {

struct Span {
    std::uint32_t start = 0;
    std::uint32_t end = 0;
    friend bool operator==(const Span&, const Span&) = default;
};

struct FeatureDefinition {
    std::string id;          // e.g. "func_words:further", "pos_bigrams:ADJ PROPN"
    std::string description;
    bool derived = false;    // no per-occurrence textual evidence (ratios, entropies)
};

/// An immutable, ordered feature catalogue. The order is contractual: vector
/// index i always means definitions()[i], and the fingerprint is a content
/// hash over the ordered ids, so any reordering or edit changes it.
class FeatureRegistry {
public:
    FeatureRegistry(std::string name, std::vector<FeatureDefinition> defs);

    const std::string& name() const { return name_; }
    const std::vector<FeatureDefinition>& definitions() const { return defs_; }
    const std::string& fingerprint() const { return fingerprint_; }
    std::size_t size() const { return defs_.size(); }

    // -1 if the id is not in this registry.
    int index_of(std::string_view feature_id) const;

    // The three built-in registries: "core" (function words, punctuation,
    // letter frequencies, POS n-grams, morphological heuristics, passive
    // sentences), "alt" (lexical richness, surface, readability,
    // information, POS variability), and "combined" (core ++ alt).
    static const FeatureRegistry& core();
    static const FeatureRegistry& alt();
    static const FeatureRegistry& combined();
    static const FeatureRegistry& get(std::string_view name); // throws on unknown name

private:
    std::string name_;
    std::vector<FeatureDefinition> defs_;
    std::string fingerprint_;
    std::unordered_map<std::string_view, int> index_;
};

struct FeatureVector {
    std::string registry_fingerprint;
    std::vector<double> values;              // normalized frequencies / derived stats
    std::vector<std::vector<Span>> evidence; // per feature; empty for derived features
};

/// Stable content hash over the ordered feature ids (16 hex digits).
std::string registry_fingerprint(const std::vector<FeatureDefinition>& defs);

/// Extracts the registry's features from a document. Count-based features
/// are counts divided by the total token count (words and punctuation
/// alike), and every counted occurrence contributes one evidence span.
/// Throws rsim::Error for a document with zero tokens.
FeatureVector extract(std::string_view text, const FeatureRegistry& registry);

/// Heuristic syllable count: number of vowel groups (aeiouy), minimum 1.
std::size_t syllable_count(std::string_view word);

} // namespace rsim
