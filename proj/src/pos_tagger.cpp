#include "rsim/pos_tagger.hpp"

#include "rsim/errors.hpp"

#include <optional>
#include <string>
#include <unordered_map>

namespace rsim {

namespace {

using enum CoarseTag;

struct Entry {
    const char* word;
    CoarseTag tag;
};

// Closed-class words plus the most frequent members of the open classes,
// pinned to their dominant tag. Ambiguous words get their most common
// reading; the tagger is coarse by construction.
constexpr Entry kLexicon[] = {
    // determiners / quantifiers
    {"the", DET}, {"a", DET}, {"an", DET}, {"this", DET}, {"that", DET}, {"these", DET},
    {"those", DET}, {"each", DET}, {"every", DET}, {"either", DET}, {"neither", DET},
    {"some", DET}, {"any", DET}, {"no", DET}, {"another", DET}, {"such", DET}, {"both", DET},
    {"all", DET}, {"few", DET}, {"fewer", DET}, {"many", DET}, {"much", DET}, {"most", DET},
    {"more", DET}, {"several", DET}, {"enough", DET}, {"certain", DET}, {"own", DET},
    {"same", DET}, {"other", DET}, {"my", DET}, {"your", DET},
    {"our", DET}, {"their", DET}, {"its", DET},
    // pronouns
    {"i", PRON}, {"you", PRON}, {"he", PRON}, {"she", PRON}, {"it", PRON}, {"we", PRON},
    {"they", PRON}, {"me", PRON}, {"him", PRON}, {"her", PRON}, {"us", PRON}, {"them", PRON},
    {"mine", PRON}, {"yours", PRON}, {"his", PRON}, {"hers", PRON}, {"ours", PRON},
    {"theirs", PRON}, {"myself", PRON}, {"yourself", PRON}, {"himself", PRON},
    {"herself", PRON}, {"itself", PRON}, {"ourselves", PRON}, {"yourselves", PRON},
    {"themselves", PRON}, {"who", PRON}, {"whom", PRON}, {"whose", PRON}, {"which", PRON},
    {"what", PRON}, {"someone", PRON}, {"anyone", PRON}, {"everyone", PRON}, {"nobody", PRON},
    {"somebody", PRON}, {"anybody", PRON}, {"everybody", PRON}, {"something", PRON},
    {"anything", PRON}, {"everything", PRON}, {"nothing", PRON}, {"whoever", PRON},
    {"whatever", PRON}, {"none", PRON}, {"somewhat", PRON},
    // prepositions
    {"of", PREP}, {"in", PREP}, {"to", PREP}, {"for", PREP}, {"with", PREP}, {"on", PREP},
    {"at", PREP}, {"by", PREP}, {"from", PREP}, {"up", PREP}, {"about", PREP}, {"into", PREP},
    {"over", PREP}, {"after", PREP}, {"under", PREP}, {"above", PREP}, {"across", PREP},
    {"through", PREP}, {"during", PREP}, {"before", PREP}, {"between", PREP}, {"around", PREP},
    {"against", PREP}, {"among", PREP}, {"throughout", PREP}, {"despite", PREP},
    {"towards", PREP}, {"toward", PREP}, {"upon", PREP}, {"within", PREP}, {"without", PREP},
    {"near", PREP}, {"behind", PREP}, {"below", PREP}, {"beneath", PREP}, {"beside", PREP},
    {"besides", PREP}, {"beyond", PREP}, {"except", PREP}, {"inside", PREP},
    {"outside", PREP}, {"onto", PREP}, {"off", PREP}, {"since", PREP}, {"until", PREP},
    {"till", PREP}, {"via", PREP}, {"per", PREP}, {"amid", PREP}, {"along", PREP},
    {"down", PREP}, {"as", PREP}, {"like", PREP}, {"unlike", PREP}, {"past", PREP},
    // conjunctions
    {"and", CONJ}, {"or", CONJ}, {"but", CONJ}, {"nor", CONJ}, {"because", CONJ},
    {"although", CONJ}, {"though", CONJ}, {"while", CONJ}, {"whereas", CONJ}, {"if", CONJ},
    {"unless", CONJ}, {"whether", CONJ}, {"than", CONJ}, {"so", CONJ}, {"yet", CONJ},
    // wh-adverbs and common adverbs
    {"when", ADV}, {"where", ADV}, {"why", ADV}, {"how", ADV}, {"whenever", ADV},
    {"wherever", ADV}, {"not", ADV}, {"very", ADV}, {"also", ADV}, {"often", ADV},
    {"always", ADV}, {"never", ADV}, {"sometimes", ADV}, {"usually", ADV}, {"again", ADV},
    {"ever", ADV}, {"just", ADV}, {"too", ADV}, {"quite", ADV}, {"rather", ADV},
    {"almost", ADV}, {"already", ADV}, {"still", ADV}, {"soon", ADV}, {"now", ADV},
    {"then", ADV}, {"here", ADV}, {"there", ADV}, {"today", ADV}, {"tomorrow", ADV},
    {"yesterday", ADV}, {"away", ADV}, {"back", ADV}, {"out", ADV}, {"really", ADV},
    {"perhaps", ADV}, {"maybe", ADV}, {"instead", ADV}, {"together", ADV}, {"alone", ADV},
    {"even", ADV}, {"once", ADV}, {"twice", ADV}, {"further", ADV}, {"well", ADV},
    {"far", ADV}, {"else", ADV}, {"indeed", ADV}, {"anyway", ADV}, {"somewhere", ADV},
    {"nowhere", ADV}, {"everywhere", ADV}, {"ahead", ADV}, {"only", ADV}, {"however", ADV},
    {"therefore", ADV}, {"meanwhile", ADV}, {"moreover", ADV}, {"otherwise", ADV},
    {"thus", ADV},
    // auxiliaries, modals, frequent verbs (all forms pinned)
    {"be", VERB}, {"am", VERB}, {"is", VERB}, {"are", VERB}, {"was", VERB}, {"were", VERB},
    {"been", VERB}, {"have", VERB}, {"has", VERB}, {"had", VERB},
    {"do", VERB}, {"does", VERB}, {"did", VERB}, {"done", VERB},
    {"will", VERB}, {"would", VERB}, {"shall", VERB}, {"should", VERB},
    {"can", VERB}, {"could", VERB}, {"may", VERB}, {"might", VERB}, {"must", VERB},
    {"ought", VERB}, {"go", VERB}, {"goes", VERB}, {"went", VERB}, {"gone", VERB},
    {"say", VERB}, {"says", VERB}, {"said", VERB}, 
    {"get", VERB}, {"gets", VERB}, {"got", VERB}, {"gotten", VERB}, 
    {"make", VERB}, {"makes", VERB}, {"made", VERB}, {"know", VERB},
    {"knows", VERB}, {"knew", VERB}, {"known", VERB}, {"think", VERB},
    {"thinks", VERB}, {"thought", VERB}, {"take", VERB}, {"takes", VERB},
    {"took", VERB}, {"taken", VERB}, {"see", VERB}, {"sees", VERB},
    {"saw", VERB}, {"seen", VERB}, {"come", VERB}, {"comes", VERB},
    {"came", VERB}, {"want", VERB}, {"wants", VERB}, 
    {"look", VERB}, {"looks", VERB}, {"use", VERB},
    {"uses", VERB}, {"find", VERB}, {"finds", VERB},
    {"found", VERB}, {"give", VERB}, {"gives", VERB}, {"gave", VERB},
    {"given", VERB}, {"tell", VERB}, {"tells", VERB}, {"told", VERB},
    {"try", VERB}, {"tries", VERB}, 
    {"ask", VERB}, {"asks", VERB}, {"feel", VERB},
    {"feels", VERB}, {"felt", VERB}, {"leave", VERB}, {"leaves", VERB}, {"left", VERB},
    {"put", VERB}, {"puts", VERB}, {"mean", VERB}, {"means", VERB},
    {"meant", VERB}, {"keep", VERB}, {"keeps", VERB}, {"kept", VERB}, {"let", VERB},
    {"lets", VERB}, {"begin", VERB}, {"begins", VERB}, {"began", VERB}, {"begun", VERB},
    {"seem", VERB}, {"seems", VERB}, {"show", VERB}, {"shows", VERB},
    {"shown", VERB}, {"hear", VERB}, {"hears", VERB}, {"heard", VERB},
    {"run", VERB}, {"runs", VERB}, {"ran", VERB}, {"believe", VERB}, {"believes", VERB},
    {"bring", VERB}, {"brings", VERB}, {"brought", VERB},
    {"happen", VERB}, {"happens", VERB}, {"write", VERB},
    {"writes", VERB}, {"wrote", VERB}, {"written", VERB}, {"sit", VERB}, {"sits", VERB},
    {"sat", VERB}, {"stand", VERB}, {"stands", VERB}, {"stood", VERB}, {"lose", VERB},
    {"loses", VERB}, {"lost", VERB}, {"pay", VERB}, {"pays", VERB}, {"paid", VERB},
    {"meet", VERB}, {"meets", VERB}, {"met", VERB}, {"set", VERB}, {"sets", VERB},
    {"learn", VERB}, {"learns", VERB}, {"read", VERB}, {"reads", VERB}, {"speak", VERB},
    {"speaks", VERB}, {"spoke", VERB}, {"spoken", VERB}, {"understand", VERB},
    {"understands", VERB}, {"understood", VERB}, {"grow", VERB}, {"grows", VERB},
    {"grew", VERB}, {"grown", VERB}, {"fall", VERB}, {"falls", VERB}, {"fell", VERB},
    {"fallen", VERB}, {"send", VERB}, {"sends", VERB}, {"sent", VERB}, {"buy", VERB},
    {"buys", VERB}, {"bought", VERB}, {"hold", VERB}, {"holds", VERB}, {"held", VERB},
    {"turn", VERB}, {"turns", VERB}, {"start", VERB}, {"starts", VERB},
    {"play", VERB}, {"plays", VERB}, {"move", VERB},
    {"moves", VERB}, {"live", VERB}, {"lives", VERB}, 
    {"walk", VERB}, {"walks", VERB}, {"wait", VERB}, {"waits", VERB},
    {"watch", VERB}, {"watches", VERB}, 
    {"help", VERB}, {"helps", VERB}, {"call", VERB}, {"calls", VERB},
    {"need", VERB}, {"needs", VERB}, 
    // frequent adjectives
    {"good", ADJ}, {"great", ADJ}, {"new", ADJ}, {"old", ADJ}, {"big", ADJ}, {"small", ADJ},
    {"little", ADJ}, {"long", ADJ}, {"short", ADJ}, {"high", ADJ}, {"low", ADJ},
    {"right", ADJ}, {"wrong", ADJ}, {"different", ADJ}, {"important", ADJ}, {"large", ADJ},
    {"young", ADJ}, {"early", ADJ}, {"late", ADJ}, {"strong", ADJ}, {"weak", ADJ},
    {"true", ADJ}, {"false", ADJ}, {"real", ADJ}, {"sure", ADJ}, {"able", ADJ},
    {"free", ADJ}, {"full", ADJ}, {"empty", ADJ}, {"open", ADJ}, {"hard", ADJ},
    {"easy", ADJ}, {"simple", ADJ}, {"clear", ADJ}, {"dark", ADJ}, {"bright", ADJ},
    {"cold", ADJ}, {"warm", ADJ}, {"hot", ADJ}, {"cool", ADJ}, {"quiet", ADJ},
    {"loud", ADJ}, {"happy", ADJ}, {"sad", ADJ}, {"angry", ADJ}, {"ready", ADJ},
    {"busy", ADJ}, {"common", ADJ}, {"possible", ADJ}, {"entire", ADJ}, {"whole", ADJ},
    {"main", ADJ}, {"last", ADJ}, {"next", ADJ}, {"first", ADJ}, {"second", ADJ},
    {"third", ADJ}, {"final", ADJ}, {"major", ADJ}, {"minor", ADJ}, {"serious", ADJ},
    {"recent", ADJ}, {"former", ADJ}, {"grey", ADJ}, {"blue", ADJ}, {"red", ADJ},
    {"green", ADJ}, {"white", ADJ}, {"black", ADJ}, {"tall", ADJ}, {"deep", ADJ},
    {"narrow", ADJ}, {"wide", ADJ}, {"heavy", ADJ}, {"fine", ADJ},
    {"bad", ADJ}, {"best", ADJ}, {"better", ADJ}, {"worse", ADJ}, {"worst", ADJ},
    // number words
    {"zero", NUM}, {"one", NUM}, {"two", NUM}, {"three", NUM}, {"four", NUM},
    {"five", NUM}, {"six", NUM}, {"seven", NUM}, {"eight", NUM}, {"nine", NUM},
    {"ten", NUM}, {"eleven", NUM}, {"twelve", NUM}, {"twenty", NUM}, {"thirty", NUM},
    {"forty", NUM}, {"fifty", NUM}, {"hundred", NUM}, {"thousand", NUM}, {"million", NUM},
    {"billion", NUM}, {"dozen", NUM},
    // frequent nouns pinned against mis-tagging
    {"time", NOUN}, {"people", NOUN}, {"way", NOUN}, {"day", NOUN}, {"man", NOUN},
    {"woman", NOUN}, {"thing", NOUN}, {"life", NOUN}, {"world", NOUN}, {"hand", NOUN},
    {"part", NOUN}, {"child", NOUN}, {"children", NOUN}, {"eye", NOUN}, {"place", NOUN},
    {"week", NOUN}, {"case", NOUN}, {"point", NOUN}, {"number", NOUN}, {"group", NOUN},
    {"problem", NOUN}, {"fact", NOUN}, {"year", NOUN}, {"years", NOUN}, {"month", NOUN},
    {"night", NOUN}, {"home", NOUN}, {"water", NOUN}, {"room", NOUN}, {"mother", NOUN},
    {"father", NOUN}, {"money", NOUN}, {"story", NOUN}, {"book", NOUN}, {"word", NOUN},
    {"business", NOUN}, {"issue", NOUN}, {"side", NOUN}, {"kind", NOUN}, {"head", NOUN},
    {"house", NOUN}, {"friend", NOUN}, {"power", NOUN}, {"hour", NOUN}, {"game", NOUN},
    {"line", NOUN}, {"end", NOUN}, {"member", NOUN}, {"car", NOUN}, {"city", NOUN},
    {"name", NOUN}, {"team", NOUN}, {"minute", NOUN}, {"idea", NOUN}, {"body", NOUN},
    {"level", NOUN}, {"school", NOUN}, {"door", NOUN}, {"face", NOUN}, {"war", NOUN},
    {"history", NOUN}, {"result", NOUN}, {"morning", NOUN}, {"reason", NOUN},
    {"research", NOUN}, {"moment", NOUN}, {"air", NOUN}, {"force", NOUN}, {"teacher", NOUN},
    {"work", NOUN}, {"light", NOUN}, {"sea", NOUN}, {"wind", NOUN}, {"winter", NOUN},
};

const std::unordered_map<std::string_view, CoarseTag>& lexicon() {
    static const auto* map = [] {
        auto* m = new std::unordered_map<std::string_view, CoarseTag>();
        m->reserve(std::size(kLexicon));
        for (const Entry& e : kLexicon) m->emplace(e.word, e.tag);
        return m;
    }();
    return *map;
}

bool ends_with(std::string_view s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

std::string lower_ascii(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return out;
}

// Suffix rules, tried in order. Length guards keep short words out.
std::optional<CoarseTag> suffix_tag(std::string_view w) {
    const std::size_t n = w.size();
    if (n >= 4 && ends_with(w, "ly")) return ADV;
    if (n >= 5 && ends_with(w, "ing")) return VERB;
    if (n >= 4 && ends_with(w, "ed")) return VERB;
    if (n >= 6 && (ends_with(w, "tion") || ends_with(w, "sion"))) return NOUN;
    if (n >= 6 && (ends_with(w, "ment") || ends_with(w, "ness"))) return NOUN;
    if (n >= 6 && (ends_with(w, "ance") || ends_with(w, "ence"))) return NOUN;
    if (n >= 6 && (ends_with(w, "ship") || ends_with(w, "hood"))) return NOUN;
    if (n >= 5 && (ends_with(w, "ity") || ends_with(w, "ism") || ends_with(w, "ist") ||
                   ends_with(w, "dom")))
        return NOUN;
    if (n >= 5 && (ends_with(w, "ous") || ends_with(w, "ful") || ends_with(w, "ive") ||
                   ends_with(w, "ish") || ends_with(w, "est")))
        return ADJ;
    if (n >= 6 && (ends_with(w, "less") || ends_with(w, "able") || ends_with(w, "ible")))
        return ADJ;
    if (n >= 5 && (ends_with(w, "ize") || ends_with(w, "ise") || ends_with(w, "ify")))
        return VERB;
    if (n >= 4 && ends_with(w, "s") && !ends_with(w, "ss") && !ends_with(w, "us") &&
        !ends_with(w, "is"))
        return NOUN; // plural heuristic
    return std::nullopt;
}

bool sentence_initial(const std::vector<Token>& tokens, std::size_t i) {
    if (i == 0) return true;
    const Token& prev = tokens[i - 1];
    return prev.kind == TokenKind::Punctuation &&
           (prev.text == "." || prev.text == "?" || prev.text == "!");
}

} // namespace

std::string_view tag_name(CoarseTag t) {
    static constexpr std::string_view names[kTagCount] = {
        "NOUN", "PROPN", "VERB", "ADJ", "ADV", "PRON",
        "DET",  "PREP",  "CONJ", "NUM", "PUNCT", "X",
    };
    return names[static_cast<std::size_t>(t)];
}

CoarseTag tag_from_name(std::string_view name) {
    for (std::size_t i = 0; i < kTagCount; ++i)
        if (tag_name(static_cast<CoarseTag>(i)) == name) return static_cast<CoarseTag>(i);
    throw Error("unknown POS tag name: " + std::string(name));
}

std::vector<CoarseTag> pos_tag(const std::vector<Token>& tokens) {
    std::vector<CoarseTag> tags(tokens.size(), X);
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const Token& t = tokens[i];
        if (t.kind == TokenKind::Punctuation) {
            tags[i] = PUNCT;
            continue;
        }
        if (t.kind == TokenKind::Number) {
            tags[i] = NUM;
            continue;
        }
        if (t.kind == TokenKind::Other) {
            tags[i] = X;
            continue;
        }
        const std::string lower = lower_ascii(t.text);
        if (auto it = lexicon().find(lower); it != lexicon().end()) {
            tags[i] = it->second;
            continue;
        }
        if (auto s = suffix_tag(lower)) {
            tags[i] = *s;
            continue;
        }
        const bool capitalized = t.text[0] >= 'A' && t.text[0] <= 'Z';
        if (capitalized && !sentence_initial(tokens, i)) {
            tags[i] = PROPN;
            continue;
        }
        tags[i] = NOUN;
    }
    return tags;
}

std::size_t pos_lexicon_size() { return std::size(kLexicon); }

} // namespace rsim
