#include "rsim/features.hpp"

#include "rsim/errors.hpp"
#include "rsim/rng.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <unordered_set>

namespace rsim {

namespace {

// The 50 tracked function words, roughly frequency-ordered.
constexpr std::array<const char*, 50> kFunctionWords = {
    "the",  "of",   "and",  "a",     "an",    "to",      "in",   "that", "it",   "is",
    "was",  "for",  "on",   "you",   "he",    "be",      "with", "as",   "by",   "at",
    "have", "are",  "this", "not",   "but",   "had",     "his",  "they", "from", "she",
    "which", "or",  "we",   "were",  "her",   "been",    "their", "when", "who", "will",
    "if",   "out",  "so",   "what",  "about", "further", "then", "them", "than", "some",
};

// All 32 visible ASCII punctuation characters, in ASCII order.
constexpr std::array<char, 32> kPunctuationMarks = {
    '!', '"', '#', '$', '%', '&', '\'', '(', ')', '*', '+', ',', '-', '.', '/', ':',
    ';', '<', '=', '>', '?', '@', '[',  '\\', ']', '^', '_', '`', '{', '|', '}', '~',
};

struct SuffixFeature {
    const char* suffix;
    std::size_t min_len; // whole-word length guard
};

// Derivational/inflectional suffixes tracked as morphological rate features.
constexpr std::array<SuffixFeature, 10> kMorphSuffixes = {{
    {"ing", 5}, {"ed", 4}, {"ly", 4}, {"tion", 6}, {"ment", 6},
    {"ness", 6}, {"ity", 5}, {"ous", 5}, {"ful", 5}, {"est", 5},
}};

const std::unordered_set<std::string_view>& irregular_participles() {
    static const std::unordered_set<std::string_view> set = {
        "made",   "done",    "seen",   "given",  "taken",   "known",   "found",
        "told",   "written", "shown",  "built",  "sent",    "kept",    "left",
        "lost",   "held",    "brought", "bought", "caught", "taught",  "thought",
        "sold",   "heard",   "felt",   "meant",  "met",     "paid",    "read",
        "said",   "set",     "put",    "born",   "worn",    "torn",    "drawn",
        "grown",  "thrown",  "broken", "chosen", "hidden",  "driven",  "eaten",
        "fallen", "forgotten", "frozen", "spoken", "stolen", "won",    "begun",
        "sung",   "hung",    "struck", "spent",  "bent",    "lent",    "cut",
        "hit",    "hurt",    "shut",   "split",  "spread",  "understood", "gone",
    };
    return set;
}

const std::unordered_set<std::string_view>& finite_be_forms() {
    static const std::unordered_set<std::string_view> set = {"am", "is", "are", "was", "were"};
    return set;
}

std::string lower_ascii(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return out;
}

bool ends_with(std::string_view s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

bool is_participle_form(std::string_view lower) {
    if (lower.size() >= 4 && ends_with(lower, "ed")) return true;
    return irregular_participles().count(lower) > 0;
}

// ---------------------------------------------------------------------------
// Registry construction.
// ---------------------------------------------------------------------------

std::vector<FeatureDefinition> build_core_definitions() {
    std::vector<FeatureDefinition> defs;
    defs.reserve(280);
    for (const char* w : kFunctionWords)
        defs.push_back({std::string("func_words:") + w,
                        std::string("frequency of the function word \"") + w + "\"", false});
    for (char c : kPunctuationMarks)
        defs.push_back({std::string("punctuation:") + c,
                        std::string("frequency of the punctuation mark '") + c + "'", false});
    for (char c = 'a'; c <= 'z'; ++c)
        defs.push_back({std::string("letters:") + c,
                        std::string("per-token frequency of the letter '") + c +
                            "' (case-insensitive)",
                        false});
    for (std::size_t t = 0; t < kTagCount; ++t)
        defs.push_back({"pos_unigrams:" + std::string(tag_name(static_cast<CoarseTag>(t))),
                        "frequency of tokens tagged " +
                            std::string(tag_name(static_cast<CoarseTag>(t))),
                        false});
    for (std::size_t t1 = 0; t1 < kTagCount; ++t1)
        for (std::size_t t2 = 0; t2 < kTagCount; ++t2)
            defs.push_back({"pos_bigrams:" + std::string(tag_name(static_cast<CoarseTag>(t1))) +
                                " " + std::string(tag_name(static_cast<CoarseTag>(t2))),
                            "frequency of adjacent tag pair", false});
    defs.push_back({"morph:article_indefinite", "frequency of the indefinite article (a/an)",
                    false});
    defs.push_back({"morph:article_definite", "frequency of the definite article (the)", false});
    for (const SuffixFeature& sf : kMorphSuffixes)
        defs.push_back({std::string("morph:suffix_") + sf.suffix,
                        std::string("frequency of words ending in -") + sf.suffix, false});
    defs.push_back({"passive_sentence",
                    "finite form of \"be\" followed within two tokens by a past participle",
                    false});
    return defs;
}

std::vector<FeatureDefinition> build_alt_definitions() {
    return {
        {"lex:type_token_ratio", "distinct word forms / word tokens", true},
        {"lex:lemma_token_ratio", "distinct suffix-stripped stems / word tokens", true},
        {"surface:token_count", "total token count", true},
        {"surface:word_count", "word token count", true},
        {"surface:sentence_count", "sentence count", true},
        {"surface:mean_word_length", "mean word token length in characters", true},
        {"surface:mean_sentence_length", "word tokens per sentence", true},
        {"read:syllables_per_word", "mean heuristic syllables per word (vowel groups)", true},
        {"read:monosyllable_rate", "frequency of one-syllable words", false},
        {"read:polysyllable_rate", "frequency of words with three or more syllables", false},
        {"info:char_entropy", "Shannon entropy over the text's bytes, in bits", true},
        {"info:trigram_distinct_ratio", "distinct character trigrams / total trigrams", true},
        {"pos:tag_entropy", "Shannon entropy of the POS tag distribution, in bits", true},
    };
}

// Offsets of the core feature families (fixed by construction order above).
struct CoreLayout {
    std::size_t func = 0;
    std::size_t punct = func + kFunctionWords.size();
    std::size_t letters = punct + kPunctuationMarks.size();
    std::size_t pos_uni = letters + 26;
    std::size_t pos_bi = pos_uni + kTagCount;
    std::size_t morph_indef = pos_bi + kTagCount * kTagCount;
    std::size_t morph_def = morph_indef + 1;
    std::size_t morph_suffix = morph_def + 1;
    std::size_t passive = morph_suffix + kMorphSuffixes.size();
    std::size_t total = passive + 1;
};
constexpr CoreLayout kCore{};

// Single-strip stemmer used by the lemma/token ratio.
std::string stem(std::string_view lower) {
    auto strip = [&](std::string_view suf, std::size_t min_len) -> bool {
        return lower.size() >= min_len && ends_with(lower, suf);
    };
    std::string w(lower);
    if (strip("ies", 5)) {
        w = std::string(lower.substr(0, lower.size() - 3)) + "y";
    } else if (strip("ing", 6)) {
        w = std::string(lower.substr(0, lower.size() - 3));
    } else if (strip("ed", 5)) {
        w = std::string(lower.substr(0, lower.size() - 2));
    } else if (strip("ly", 5)) {
        w = std::string(lower.substr(0, lower.size() - 2));
    } else if (strip("es", 5)) {
        w = std::string(lower.substr(0, lower.size() - 2));
    } else if (strip("s", 4) && !ends_with(lower, "ss") && !ends_with(lower, "us") &&
               !ends_with(lower, "is")) {
        w = std::string(lower.substr(0, lower.size() - 1));
    }
    return w;
}

struct ExtractionContext {
    std::string_view text;
    const std::vector<Token>& tokens;
    const std::vector<CoarseTag>& tags;
    double denom; // total token count, the single normalization denominator
};

void count_at(FeatureVector& fv, std::size_t index, Span s) {
    fv.values[index] += 1.0;
    fv.evidence[index].push_back(s);
}

void fill_core(const ExtractionContext& ctx, FeatureVector& fv, std::size_t base) {
    static const std::unordered_map<std::string_view, std::size_t>* func_index = [] {
        auto* m = new std::unordered_map<std::string_view, std::size_t>();
        for (std::size_t i = 0; i < kFunctionWords.size(); ++i)
            m->emplace(kFunctionWords[i], i);
        return m;
    }();

    const auto& tokens = ctx.tokens;
    const auto& tags = ctx.tags;

    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const Token& t = tokens[i];
        const Span tspan{t.start, t.end};

        count_at(fv, base + kCore.pos_uni + static_cast<std::size_t>(tags[i]), tspan);
        if (i + 1 < tokens.size()) {
            const std::size_t bi = static_cast<std::size_t>(tags[i]) * kTagCount +
                                   static_cast<std::size_t>(tags[i + 1]);
            count_at(fv, base + kCore.pos_bi + bi, Span{t.start, tokens[i + 1].end});
        }

        if (t.kind == TokenKind::Punctuation) {
            const char c = t.text[0];
            const auto it = std::find(kPunctuationMarks.begin(), kPunctuationMarks.end(), c);
            if (it != kPunctuationMarks.end())
                count_at(fv, base + kCore.punct +
                                 static_cast<std::size_t>(it - kPunctuationMarks.begin()),
                         tspan);
            continue;
        }
        if (t.kind != TokenKind::Word) continue;

        // letter frequencies (one-character spans)
        for (std::size_t k = 0; k < t.text.size(); ++k) {
            char c = t.text[k];
            if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
            if (c >= 'a' && c <= 'z')
                count_at(fv, base + kCore.letters + static_cast<std::size_t>(c - 'a'),
                         Span{t.start + static_cast<std::uint32_t>(k),
                              t.start + static_cast<std::uint32_t>(k) + 1});
        }

        const std::string lower = lower_ascii(t.text);
        if (auto it = func_index->find(lower); it != func_index->end())
            count_at(fv, base + kCore.func + it->second, tspan);
        if (lower == "a" || lower == "an") count_at(fv, base + kCore.morph_indef, tspan);
        if (lower == "the") count_at(fv, base + kCore.morph_def, tspan);
        for (std::size_t s = 0; s < kMorphSuffixes.size(); ++s)
            if (lower.size() >= kMorphSuffixes[s].min_len &&
                ends_with(lower, kMorphSuffixes[s].suffix))
                count_at(fv, base + kCore.morph_suffix + s, tspan);

        // passive heuristic: finite "be" + participle within two word tokens
        if (finite_be_forms().count(lower)) {
            for (std::size_t j = i + 1; j <= i + 2 && j < tokens.size(); ++j) {
                if (tokens[j].kind != TokenKind::Word) break; // punctuation closes the window
                if (is_participle_form(lower_ascii(tokens[j].text))) {
                    count_at(fv, base + kCore.passive, Span{t.start, tokens[j].end});
                    break;
                }
            }
        }
    }

    for (std::size_t i = 0; i < kCore.total; ++i) fv.values[base + i] /= ctx.denom;
}

double entropy_bits(const std::map<std::string, std::size_t>& counts, double total) {
    double h = 0.0;
    for (const auto& [_, c] : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / total;
        h -= p * std::log2(p);
    }
    return h;
}

void fill_alt(const ExtractionContext& ctx, FeatureVector& fv, std::size_t base) {
    const auto& tokens = ctx.tokens;
    enum AltIdx {
        TTR, LEMMA, TOKENS, WORDS, SENTS, MEAN_WLEN, MEAN_SLEN,
        SYLL, MONO, POLY, ENTROPY, TRIGRAM, TAG_ENTROPY,
    };

    std::set<std::string> types, stems;
    std::size_t words = 0, char_sum = 0, syll_sum = 0;
    for (const Token& t : tokens) {
        if (t.kind != TokenKind::Word) continue;
        ++words;
        char_sum += t.text.size();
        const std::string lower = lower_ascii(t.text);
        types.insert(lower);
        stems.insert(stem(lower));
        const std::size_t sy = syllable_count(lower);
        syll_sum += sy;
        if (sy == 1) count_at(fv, base + MONO, Span{t.start, t.end});
        if (sy >= 3) count_at(fv, base + POLY, Span{t.start, t.end});
    }
    fv.values[base + MONO] /= ctx.denom;
    fv.values[base + POLY] /= ctx.denom;

    const std::size_t sentences = sentence_ends(tokens).size();
    fv.values[base + TTR] = words ? static_cast<double>(types.size()) / words : 0.0;
    fv.values[base + LEMMA] = words ? static_cast<double>(stems.size()) / words : 0.0;
    fv.values[base + TOKENS] = static_cast<double>(tokens.size());
    fv.values[base + WORDS] = static_cast<double>(words);
    fv.values[base + SENTS] = static_cast<double>(sentences);
    fv.values[base + MEAN_WLEN] = words ? static_cast<double>(char_sum) / words : 0.0;
    fv.values[base + MEAN_SLEN] =
        sentences ? static_cast<double>(words) / sentences : 0.0;
    fv.values[base + SYLL] = words ? static_cast<double>(syll_sum) / words : 0.0;

    std::map<std::string, std::size_t> chars;
    for (char c : ctx.text) ++chars[std::string(1, c)];
    fv.values[base + ENTROPY] =
        ctx.text.empty() ? 0.0 : entropy_bits(chars, static_cast<double>(ctx.text.size()));

    if (ctx.text.size() >= 3) {
        std::set<std::string_view> grams;
        for (std::size_t i = 0; i + 3 <= ctx.text.size(); ++i)
            grams.insert(ctx.text.substr(i, 3));
        fv.values[base + TRIGRAM] =
            static_cast<double>(grams.size()) / static_cast<double>(ctx.text.size() - 2);
    }

    std::map<std::string, std::size_t> tag_counts;
    for (CoarseTag t : ctx.tags) ++tag_counts[std::string(tag_name(t))];
    fv.values[base + TAG_ENTROPY] =
        entropy_bits(tag_counts, static_cast<double>(ctx.tags.size()));
}

} // namespace

std::size_t syllable_count(std::string_view word) {
    auto is_vowel = [](char c) {
        c = (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
        return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
    };
    std::size_t groups = 0;
    bool in_group = false;
    for (char c : word) {
        const bool v = is_vowel(c);
        if (v && !in_group) ++groups;
        in_group = v;
    }
    return groups == 0 ? 1 : groups;
}

std::string registry_fingerprint(const std::vector<FeatureDefinition>& defs) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    auto mix = [&](std::string_view s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 0x100000001B3ULL;
        }
        h ^= '\n';
        h *= 0x100000001B3ULL;
    };
    for (const FeatureDefinition& d : defs) mix(d.id);
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

FeatureRegistry::FeatureRegistry(std::string name, std::vector<FeatureDefinition> defs)
    : name_(std::move(name)), defs_(std::move(defs)) {
    fingerprint_ = rsim::registry_fingerprint(defs_);
    index_.reserve(defs_.size());
    for (std::size_t i = 0; i < defs_.size(); ++i) {
        auto [_, inserted] = index_.emplace(defs_[i].id, static_cast<int>(i));
        if (!inserted) throw Error("duplicate feature id in registry: " + defs_[i].id);
    }
}

int FeatureRegistry::index_of(std::string_view feature_id) const {
    const auto it = index_.find(feature_id);
    return it == index_.end() ? -1 : it->second;
}

const FeatureRegistry& FeatureRegistry::core() {
    static const FeatureRegistry reg("core", build_core_definitions());
    return reg;
}

const FeatureRegistry& FeatureRegistry::alt() {
    static const FeatureRegistry reg("alt", build_alt_definitions());
    return reg;
}

const FeatureRegistry& FeatureRegistry::combined() {
    static const FeatureRegistry reg("combined", [] {
        std::vector<FeatureDefinition> defs = build_core_definitions();
        std::vector<FeatureDefinition> alt = build_alt_definitions();
        defs.insert(defs.end(), alt.begin(), alt.end());
        return defs;
    }());
    return reg;
}

const FeatureRegistry& FeatureRegistry::get(std::string_view name) {
    if (name == "core") return core();
    if (name == "alt") return alt();
    if (name == "combined") return combined();
    throw Error("unknown feature registry: " + std::string(name));
}

FeatureVector extract(std::string_view text, const FeatureRegistry& registry) {
    const std::vector<Token> tokens = tokenize(text);
    if (tokens.empty()) throw Error("empty document: no tokens to extract features from");
    const std::vector<CoarseTag> tags = pos_tag(tokens);

    FeatureVector fv;
    fv.registry_fingerprint = registry.fingerprint();
    fv.values.assign(registry.size(), 0.0);
    fv.evidence.assign(registry.size(), {});

    const ExtractionContext ctx{text, tokens, tags, static_cast<double>(tokens.size())};
    if (registry.name() == "core") {
        fill_core(ctx, fv, 0);
    } else if (registry.name() == "alt") {
        fill_alt(ctx, fv, 0);
    } else if (registry.name() == "combined") {
        fill_core(ctx, fv, 0);
        fill_alt(ctx, fv, kCore.total);
    } else {
        throw Error("extract: unsupported registry " + registry.name());
    }
    return fv;
}

} // namespace rsim
