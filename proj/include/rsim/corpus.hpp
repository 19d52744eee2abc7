#pragma once

#include "rsim/jsonio.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace rsim {

/// Author-labeled documents. std::map keeps author iteration deterministic.
struct AuthorCorpus {
    std::map<std::string, std::vector<std::string>> authors;

    std::size_t document_count() const {
        std::size_t n = 0;
        for (const auto& [_, docs] : authors) n += docs.size();
        return n;
    }
};

struct SplitSpec {
    std::size_t train_pairs = 0;
    std::size_t val_pairs = 0;
    std::size_t test_pairs = 0;
    std::uint64_t seed = 0;
    std::size_t min_words = 20;
    // Same:different ratio is fixed at 1:1, so every requested count must be
    // even.
};

/// Labeled document pairs over a deduplicated document table. label is +1
/// iff both documents were sampled from the same author.
struct PairSet {
    struct Pair {
        std::uint32_t doc1 = 0;
        std::uint32_t doc2 = 0;
        int label = -1;
    };
    std::vector<std::string> docs;
    std::vector<Pair> pairs;

    std::string_view doc1(std::size_t i) const { return docs[pairs[i].doc1]; }
    std::string_view doc2(std::size_t i) const { return docs[pairs[i].doc2]; }
};

struct SampledSplits {
    PairSet train, val, test;
};

/// Drops documents shorter than min_words (whitespace-separated words,
/// >= min_words kept) and then authors left with fewer than two documents.
/// Throws CorpusExhausted if nothing survives. The input is not modified.
AuthorCorpus filter_corpus(const AuthorCorpus& corpus, std::size_t min_words);

/// Samples author-disjoint train/val/test splits of labeled pairs, each
/// split exactly half same-author and half different-author, with no
/// repeated unordered document pair inside a split. Deterministic under
/// spec.seed. Throws CorpusExhausted when the corpus cannot fill the
/// request and rsim::Error for invalid (odd) counts.
SampledSplits sample_pairs(const AuthorCorpus& corpus, const SplitSpec& spec);

/// Replaces Luhn-valid credit card numbers (13-19 digits, optional space or
/// dash separators) with <CC>, dotted-quad IPv4 addresses with <IP>, and
/// phone numbers with <PHONE>. The phone grammar: an optional +country
/// prefix, an optional parenthesized group, then digit groups joined by
/// single spaces or dashes, 7-15 digits total, requiring at least one of
/// {+, parens, separator}; a bare run of exactly 10 or 11 digits also
/// matches. 4-2-2 and 2-2-4 digit groupings without +/parens are treated as
/// dates and left alone. Idempotent.
std::string redact(std::string_view text);

/// Knobs for the synthetic corpus generator. Authors drawn under one
/// profile share a content-word bank and global tendencies; the per-author
/// style (function-word preferences, punctuation rates, sentence length,
/// passive rate, favorite vocabulary) is sampled inside these ranges.
struct GeneratorProfile {
    std::string name = "standard";
    std::size_t content_lo = 0, content_hi = 0; // range into the embedded content list
    double func_lo = 0.36, func_hi = 0.44;      // per-author function-word share
    double favorite_conc_lo = 0.50, favorite_conc_hi = 0.70;
    std::size_t favorites_lo = 25, favorites_hi = 40;
    double sent_len_lo = 10.0, sent_len_hi = 17.0;
    double comma_lo = 0.02, comma_hi = 0.09;
    double passive_lo = 0.00, passive_hi = 0.20;
    double name_rate_lo = 0.002, name_rate_hi = 0.030;
    double excl_hi = 0.15, quest_hi = 0.12; // max author weight for ! and ?
    double func_sigma = 0.42;               // author spread around the base distribution
    double func_doc_sigma = 0.22;           // per-document rewarp of the author profile
    double doc_jitter = 0.07;               // per-document drift of the style rates

    static const GeneratorProfile& standard();
    static const GeneratorProfile& forum();
    static const GeneratorProfile& reviews();
    static const GeneratorProfile& stories();
    static const GeneratorProfile& get(std::string_view name);
};

/// Deterministic synthetic author corpus: each author gets a persistent
/// style profile and documents are generated from it, so intra-author
/// documents are measurably more similar than inter-author ones.
AuthorCorpus generate_synthetic_corpus(std::size_t n_authors, std::size_t docs_per_author,
                                       std::size_t words_per_doc, std::uint64_t seed,
                                       const GeneratorProfile& profile =
                                           GeneratorProfile::standard());

// Corpus file: UTF-8 JSONL, {"author_id": string, "text": string} per line.
AuthorCorpus load_corpus_jsonl(const std::filesystem::path& path);
void save_corpus_jsonl(const std::filesystem::path& path, const AuthorCorpus& corpus);

// Pair file: UTF-8 JSONL, {"doc1": string, "doc2": string, "label": 1|-1}.
PairSet load_pairs_jsonl(const std::filesystem::path& path);
void save_pairs_jsonl(const std::filesystem::path& path, const PairSet& pairs);

} // namespace rsim
