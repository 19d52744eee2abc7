#include "rsim/corpus.hpp"

#include "rsim/errors.hpp"
#include "rsim/rng.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

namespace rsim {

namespace {

// The same 50 function words the core registry tracks, frequency-ordered.
constexpr std::array<const char*, 50> kFunctionWords = {
    "the",  "of",   "and",  "a",     "an",    "to",      "in",   "that", "it",   "is",
    "was",  "for",  "on",   "you",   "he",    "be",      "with", "as",   "by",   "at",
    "have", "are",  "this", "not",   "but",   "had",     "his",  "they", "from", "she",
    "which", "or",  "we",   "were",  "her",   "been",    "their", "when", "who", "will",
    "if",   "out",  "so",   "what",  "about", "further", "then", "them", "than", "some",
};

// One flat content list; profiles select contiguous ranges. Kept in three
// topical banks: forum/general [0, 90), reviews [90, 180), stories [180, 270).
constexpr std::array<const char*, 270> kContentWords = {
    // forum / general (90)
    "computer", "game", "music", "people", "thing", "problem", "question", "answer",
    "point", "time", "day", "work", "idea", "thread", "post", "comment", "link", "video",
    "phone", "internet", "website", "money", "school", "team", "player", "match", "level",
    "movie", "book", "friend", "house", "city", "car", "food", "coffee", "water",
    "weather", "news", "world", "country", "group", "part", "place", "week", "year",
    "night", "morning", "moment", "reason", "change", "word", "line", "message",
    "picture", "sound", "light", "door", "room", "table", "street", "job", "plan",
    "window", "account", "update", "system", "board", "topic", "reply", "user", "page",
    "great", "good", "new", "old", "wrong", "right", "easy", "hard", "simple",
    "said", "went", "found", "played", "started", "worked", "helped", "talked", "asked",
    "looked",
    // reviews (90)
    "product", "price", "quality", "battery", "screen", "camera", "button", "box",
    "package", "delivery", "service", "seller", "brand", "model", "size", "color",
    "material", "plastic", "metal", "fabric", "garden", "plant", "tool", "handle",
    "blade", "cover", "chair", "desk", "keyboard", "mouse", "cable", "charger",
    "speaker", "volume", "warranty", "refund", "review", "star", "rating", "purchase",
    "order", "shipment", "item", "value", "feature", "design", "weight", "instruction",
    "manual", "setup", "paint", "surface", "corner", "edge", "screw", "bracket", "stand",
    "case", "pocket", "zipper", "strap", "wheel", "motor", "filter", "tank", "hose",
    "cord", "switch", "lamp", "shelf", "cheap", "solid", "sturdy", "flimsy", "broken",
    "perfect", "decent", "terrible", "useless", "useful", "arrived", "ordered",
    "returned", "installed", "replaced", "tested", "fitted", "packed", "shipped",
    "charged",
    // stories (90)
    "castle", "forest", "dragon", "sword", "knight", "queen", "king", "wizard", "shadow",
    "magic", "spell", "journey", "mountain", "river", "village", "warrior", "master",
    "student", "temple", "stone", "fire", "wind", "storm", "dream", "spirit", "blade",
    "armor", "battle", "enemy", "silence", "darkness", "moonlight", "dawn", "whisper",
    "secret", "destiny", "prophecy", "curse", "crystal", "tower", "gate", "realm",
    "legend", "hero", "creature", "beast", "hunt", "path", "cloak", "torch", "banner",
    "throne", "crown", "shield", "arrow", "horse", "wolf", "raven", "ember", "frost",
    "ancient", "silent", "hidden", "golden", "broken", "distant", "quiet", "pale",
    "brave", "weary", "walked", "turned", "opened", "closed", "watched", "waited",
    "whispered", "vanished", "climbed", "followed", "crossed", "gathered", "lifted",
    "carried", "burned", "fought", "escaped", "returned", "remained", "stood",
};

constexpr std::array<const char*, 26> kNames = {
    "Alice", "Ben",   "Clara", "David", "Emma",  "Felix",  "Grace", "Henry", "Iris",
    "Jonas", "Kara",  "Liam",  "Mira",  "Noah",  "Petra",  "Quinn", "Rosa",  "Sam",
    "Tessa", "Ulric", "Vera",  "Wren",  "Yara",  "Zane",   "Ashford", "Rivertown",
};

// Every entry ends in -ed or sits on the extractor's irregular participle
// list, so generated passives are detectable by the heuristic.
constexpr std::array<const char*, 18> kParticiples = {
    "created", "taken",  "given",  "made",   "seen",    "found",  "told",   "written",
    "shown",   "passed", "built",  "sent",   "kept",    "lost",   "held",   "carried",
    "painted", "chosen",
};

struct AuthorStyle {
    std::vector<double> func_weights; // pre-normalization, re-warped per document
    std::vector<double> func_cdf;
    std::vector<std::size_t> favorites;
    std::vector<double> favorite_cdf;
    double p_func = 0.4;
    double favorite_conc = 0.7;
    double comma_rate = 0.05;
    double passive_rate = 0.1;
    double name_rate = 0.02;
    double mean_sentence_len = 14.0;
    double end_dot = 0.8, end_excl = 0.1, end_quest = 0.1;
    std::array<std::size_t, 3> names{};
    std::size_t bank_lo = 0, bank_hi = 0;
};

std::vector<double> to_cdf(std::vector<double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    double acc = 0.0;
    for (double& w : weights) {
        acc += w / total;
        w = acc;
    }
    weights.back() = 1.0;
    return weights;
}

std::size_t sample_cdf(const std::vector<double>& cdf, Rng& rng) {
    const double u = rng.uniform();
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    return static_cast<std::size_t>(std::min<std::ptrdiff_t>(
        it - cdf.begin(), static_cast<std::ptrdiff_t>(cdf.size()) - 1));
}

AuthorStyle sample_author_style(const GeneratorProfile& p, Rng& rng) {
    AuthorStyle st;
    st.bank_lo = p.content_lo;
    st.bank_hi = p.content_hi;

    // Zipf-ish base over the function words, warped per author.
    st.func_weights.resize(kFunctionWords.size());
    for (std::size_t i = 0; i < st.func_weights.size(); ++i)
        st.func_weights[i] = 1.0 / static_cast<double>(i + 1) *
                             std::exp(p.func_sigma * rng.gaussian());
    st.func_cdf = to_cdf(st.func_weights);

    const std::size_t bank_size = p.content_hi - p.content_lo;
    const std::size_t n_fav =
        p.favorites_lo + rng.below(p.favorites_hi - p.favorites_lo + 1);
    std::vector<std::size_t> pool(bank_size);
    for (std::size_t i = 0; i < bank_size; ++i) pool[i] = p.content_lo + i;
    rng.shuffle(pool);
    st.favorites.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(n_fav));
    std::vector<double> favw(n_fav);
    for (double& w : favw) w = rng.uniform(1.0, 5.0);
    st.favorite_cdf = to_cdf(std::move(favw));

    st.p_func = rng.uniform(p.func_lo, p.func_hi);
    st.favorite_conc = rng.uniform(p.favorite_conc_lo, p.favorite_conc_hi);
    st.comma_rate = rng.uniform(p.comma_lo, p.comma_hi);
    st.passive_rate = rng.uniform(p.passive_lo, p.passive_hi);
    st.name_rate = rng.uniform(p.name_rate_lo, p.name_rate_hi);
    st.mean_sentence_len = rng.uniform(p.sent_len_lo, p.sent_len_hi);
    st.end_excl = rng.uniform(0.0, p.excl_hi);
    st.end_quest = rng.uniform(0.0, p.quest_hi);
    st.end_dot = 1.0 - st.end_excl - st.end_quest;
    for (auto& n : st.names) n = rng.below(kNames.size());
    return st;
}

std::string generate_document(const AuthorStyle& st, const GeneratorProfile& p, Rng& rng,
                              std::size_t words_per_doc) {
    // Per-document drift keeps two documents by one author from being
    // carbon copies of the same rates.
    auto jitter = [&](double v, double amount, double lo, double hi) {
        return std::clamp(v + amount * rng.gaussian(), lo, hi);
    };
    const double p_func = jitter(st.p_func, p.doc_jitter, 0.15, 0.65);
    const double comma = jitter(st.comma_rate, p.doc_jitter * 0.6, 0.0, 0.25);
    const double passive = jitter(st.passive_rate, p.doc_jitter, 0.0, 0.5);
    const double name_rate = jitter(st.name_rate, p.doc_jitter * 0.4, 0.0, 0.12);
    const double mean_len = jitter(st.mean_sentence_len, 1.5, 4.0, 30.0);

    std::vector<double> doc_fw = st.func_weights;
    for (double& w : doc_fw) w *= std::exp(p.func_doc_sigma * rng.gaussian());
    const std::vector<double> doc_func_cdf = to_cdf(std::move(doc_fw));

    std::string text;
    text.reserve(words_per_doc * 7);
    std::size_t words = 0;
    while (words < words_per_doc) {
        const std::size_t len = static_cast<std::size_t>(
            std::max(3.0, std::round(mean_len + 3.0 * rng.gaussian())));
        std::vector<std::string> sent;
        sent.reserve(len + 2);
        while (sent.size() < len) {
            const double u = rng.uniform();
            if (u < p_func) {
                sent.push_back(kFunctionWords[sample_cdf(doc_func_cdf, rng)]);
            } else if (u < p_func + name_rate) {
                sent.push_back(kNames[st.names[rng.below(st.names.size())]]);
            } else if (rng.uniform() < st.favorite_conc) {
                sent.push_back(kContentWords[st.favorites[sample_cdf(st.favorite_cdf, rng)]]);
            } else {
                sent.push_back(kContentWords[st.bank_lo + rng.below(st.bank_hi - st.bank_lo)]);
            }
        }
        if (sent.size() >= 3 && rng.bernoulli(passive)) {
            const std::size_t pos = 1 + rng.below(sent.size() - 2);
            sent[pos] = rng.bernoulli(0.5) ? "was" : "were";
            sent[pos + 1] = kParticiples[rng.below(kParticiples.size())];
        }
        sent.front()[0] = static_cast<char>(std::toupper(
            static_cast<unsigned char>(sent.front()[0])));

        for (std::size_t k = 0; k < sent.size(); ++k) {
            text += sent[k];
            if (k + 1 < sent.size()) {
                if (rng.bernoulli(comma)) text += ',';
                text += ' ';
            }
        }
        const double e = rng.uniform();
        text += e < st.end_dot ? '.' : (e < st.end_dot + st.end_excl ? '!' : '?');
        words += sent.size();
        if (words < words_per_doc) text += ' ';
    }
    return text;
}

} // namespace

const GeneratorProfile& GeneratorProfile::standard() {
    static const GeneratorProfile p = [] {
        GeneratorProfile g;
        g.name = "standard";
        g.content_lo = 0;
        g.content_hi = 270; // full list
        return g;
    }();
    return p;
}

const GeneratorProfile& GeneratorProfile::forum() {
    static const GeneratorProfile p = [] {
        GeneratorProfile g;
        g.name = "forum";
        g.content_lo = 0;
        g.content_hi = 90;
        g.sent_len_lo = 7.0;
        g.sent_len_hi = 14.0;
        g.excl_hi = 0.30;
        g.quest_hi = 0.30;
        g.passive_hi = 0.12;
        return g;
    }();
    return p;
}

const GeneratorProfile& GeneratorProfile::reviews() {
    static const GeneratorProfile p = [] {
        GeneratorProfile g;
        g.name = "reviews";
        g.content_lo = 90;
        g.content_hi = 180;
        g.sent_len_lo = 10.0;
        g.sent_len_hi = 18.0;
        g.name_rate_lo = 0.0;
        g.name_rate_hi = 0.01;
        g.passive_lo = 0.05;
        g.passive_hi = 0.35;
        return g;
    }();
    return p;
}

const GeneratorProfile& GeneratorProfile::stories() {
    static const GeneratorProfile p = [] {
        GeneratorProfile g;
        g.name = "stories";
        g.content_lo = 180;
        g.content_hi = 270;
        g.sent_len_lo = 12.0;
        g.sent_len_hi = 22.0;
        g.name_rate_lo = 0.02;
        g.name_rate_hi = 0.08;
        g.quest_hi = 0.08;
        return g;
    }();
    return p;
}

const GeneratorProfile& GeneratorProfile::get(std::string_view name) {
    if (name == "standard") return standard();
    if (name == "forum") return forum();
    if (name == "reviews") return reviews();
    if (name == "stories") return stories();
    throw Error("unknown generator profile: " + std::string(name));
}

AuthorCorpus generate_synthetic_corpus(std::size_t n_authors, std::size_t docs_per_author,
                                       std::size_t words_per_doc, std::uint64_t seed,
                                       const GeneratorProfile& profile) {
    if (n_authors < 1 || docs_per_author < 1 || words_per_doc < 1)
        throw Error("generate_synthetic_corpus: all counts must be >= 1");
    if (profile.content_hi <= profile.content_lo || profile.content_hi > kContentWords.size())
        throw Error("generate_synthetic_corpus: bad profile content range");

    AuthorCorpus corpus;
    for (std::size_t a = 0; a < n_authors; ++a) {
        char id[32];
        std::snprintf(id, sizeof id, "author_%04zu", a);
        Rng style_rng(derive_seed(seed, "synth-style-" + std::to_string(a)));
        const AuthorStyle style = sample_author_style(profile, style_rng);
        std::vector<std::string> docs;
        docs.reserve(docs_per_author);
        for (std::size_t d = 0; d < docs_per_author; ++d) {
            Rng doc_rng(derive_seed(seed, "synth-doc-" + std::to_string(a) + "-" +
                                              std::to_string(d)));
            docs.push_back(generate_document(style, profile, doc_rng, words_per_doc));
        }
        corpus.authors.emplace(id, std::move(docs));
    }
    return corpus;
}

} // namespace rsim
