#include "rsim/corpus.hpp"

#include "rsim/errors.hpp"
#include "rsim/rng.hpp"
#include "rsim/tokenizer.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <unordered_map>

namespace rsim {

namespace {

constexpr std::size_t kPairRetryLimit = 1000;

std::string trimmed(std::string_view s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

struct SplitRequest {
    std::string name;
    std::size_t pairs = 0;
    std::size_t authors = 0; // allocation, filled in below
};

std::size_t same_capacity(const std::vector<const std::vector<std::string>*>& docs_per_author) {
    std::size_t cap = 0;
    for (const auto* docs : docs_per_author) {
        const std::size_t d = docs->size();
        cap += d * (d - 1) / 2;
    }
    return cap;
}

// Samples one split worth of pairs from its author block.
PairSet sample_split(const std::vector<std::pair<std::string, const std::vector<std::string>*>>&
                         block,
                     std::size_t n_pairs, Rng& rng, const std::string& split_name) {
    PairSet out;
    std::unordered_map<std::string, std::uint32_t> doc_index;
    auto add_doc = [&](const std::string& text) -> std::uint32_t {
        if (auto it = doc_index.find(text); it != doc_index.end()) return it->second;
        const auto id = static_cast<std::uint32_t>(out.docs.size());
        out.docs.push_back(text);
        doc_index.emplace(text, id);
        return id;
    };

    const std::size_t half = n_pairs / 2;
    std::set<std::pair<std::uint32_t, std::uint32_t>> used;
    auto key = [](std::uint32_t a, std::uint32_t b) {
        return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
    };

    // same-author pairs: one random author, two distinct texts
    for (std::size_t p = 0; p < half; ++p) {
        bool emitted = false;
        for (std::size_t attempt = 0; attempt < kPairRetryLimit; ++attempt) {
            const auto& [_, docs] = block[rng.below(block.size())];
            if (docs->size() < 2) continue;
            const std::size_t i = rng.below(docs->size());
            std::size_t j = rng.below(docs->size() - 1);
            if (j >= i) ++j;
            const std::uint32_t d1 = add_doc((*docs)[i]);
            const std::uint32_t d2 = add_doc((*docs)[j]);
            if (d1 == d2 || !used.insert(key(d1, d2)).second) continue;
            out.pairs.push_back({d1, d2, +1});
            emitted = true;
            break;
        }
        if (!emitted)
            throw CorpusExhausted("split '" + split_name + "': could not sample " +
                                  std::to_string(half) + " unique same-author pairs (stuck at " +
                                  std::to_string(p) + " after " +
                                  std::to_string(kPairRetryLimit) + " retries)");
    }

    // different-author pairs: two distinct random authors, one text each
    for (std::size_t p = 0; p < half; ++p) {
        bool emitted = false;
        for (std::size_t attempt = 0; attempt < kPairRetryLimit; ++attempt) {
            const std::size_t a1 = rng.below(block.size());
            std::size_t a2 = rng.below(block.size() - 1);
            if (a2 >= a1) ++a2;
            const auto& docs1 = *block[a1].second;
            const auto& docs2 = *block[a2].second;
            const std::uint32_t d1 = add_doc(docs1[rng.below(docs1.size())]);
            const std::uint32_t d2 = add_doc(docs2[rng.below(docs2.size())]);
            if (d1 == d2 || !used.insert(key(d1, d2)).second) continue;
            out.pairs.push_back({d1, d2, -1});
            emitted = true;
            break;
        }
        if (!emitted)
            throw CorpusExhausted("split '" + split_name + "': could not sample " +
                                  std::to_string(half) +
                                  " unique different-author pairs (stuck at " +
                                  std::to_string(p) + ")");
    }

    // Interleave labels deterministically instead of emitting all-same then
    // all-diff.
    rng.shuffle(out.pairs);
    return out;
}

} // namespace

AuthorCorpus filter_corpus(const AuthorCorpus& corpus, std::size_t min_words) {
    if (min_words < 1) throw Error("filter_corpus: min_words must be >= 1");
    AuthorCorpus out;
    for (const auto& [author, docs] : corpus.authors) {
        std::vector<std::string> kept;
        for (const std::string& d : docs)
            if (word_count(d) >= min_words) kept.push_back(d);
        if (kept.size() >= 2) out.authors.emplace(author, std::move(kept));
    }
    if (out.authors.empty())
        throw CorpusExhausted("corpus exhausted: filtering with min_words=" +
                              std::to_string(min_words) +
                              " and the >=2-documents-per-author rule left no authors (input had " +
                              std::to_string(corpus.authors.size()) + " authors)");
    return out;
}

SampledSplits sample_pairs(const AuthorCorpus& corpus, const SplitSpec& spec) {
    std::array<SplitRequest, 3> reqs = {{
        {"train", spec.train_pairs, 0},
        {"val", spec.val_pairs, 0},
        {"test", spec.test_pairs, 0},
    }};
    std::size_t total_pairs = 0;
    for (const auto& r : reqs) {
        if (r.pairs % 2 != 0)
            throw Error("sample_pairs: split '" + r.name + "' requests " +
                        std::to_string(r.pairs) +
                        " pairs; counts must be even to honor the 1:1 label ratio");
        total_pairs += r.pairs;
    }
    if (total_pairs == 0) throw Error("sample_pairs: no pairs requested");

    std::vector<std::pair<std::string, const std::vector<std::string>*>> authors;
    authors.reserve(corpus.authors.size());
    for (const auto& [id, docs] : corpus.authors) authors.emplace_back(id, &docs);

    Rng partition_rng(derive_seed(spec.seed, "sample-partition"));
    partition_rng.shuffle(authors);

    // Proportional author allocation with a floor of 2 authors per nonempty
    // split (different-author pairs need two authors).
    std::size_t assigned = 0;
    for (std::size_t i = 1; i < reqs.size(); ++i) {
        if (reqs[i].pairs == 0) continue;
        reqs[i].authors = std::max<std::size_t>(
            2, authors.size() * reqs[i].pairs / total_pairs);
        assigned += reqs[i].authors;
    }
    if (reqs[0].pairs > 0) {
        if (assigned + 2 > authors.size())
            throw CorpusExhausted("sample_pairs: " + std::to_string(authors.size()) +
                                  " authors cannot be partitioned into the requested splits");
        reqs[0].authors = authors.size() - assigned;
    }

    // Rebalance until every split can host its same-author pairs.
    for (std::size_t guard = 0; guard < authors.size() + 8; ++guard) {
        std::size_t offset = 0;
        bool ok = true;
        for (auto& r : reqs) {
            if (r.pairs == 0) continue;
            std::vector<const std::vector<std::string>*> block;
            for (std::size_t i = 0; i < r.authors; ++i) block.push_back(authors[offset + i].second);
            offset += r.authors;
            if (same_capacity(block) < r.pairs / 2) {
                // steal one author from the split with the largest surplus
                SplitRequest* donor = nullptr;
                std::size_t donor_surplus = 0;
                std::size_t scan_offset = 0;
                for (auto& d : reqs) {
                    std::vector<const std::vector<std::string>*> dblock;
                    for (std::size_t i = 0; i < d.authors; ++i)
                        dblock.push_back(authors[scan_offset + i].second);
                    scan_offset += d.authors;
                    if (&d == &r || d.authors <= (d.pairs > 0 ? 2u : 0u)) continue;
                    const std::size_t cap = same_capacity(dblock);
                    if (cap > d.pairs / 2 && cap - d.pairs / 2 > donor_surplus) {
                        donor = &d;
                        donor_surplus = cap - d.pairs / 2;
                    }
                }
                if (!donor)
                    throw CorpusExhausted(
                        "sample_pairs: split '" + r.name + "' needs " +
                        std::to_string(r.pairs / 2) +
                        " same-author pairs but the author partition cannot supply them");
                --donor->authors;
                ++r.authors;
                ok = false;
                break;
            }
        }
        if (ok) break;
    }

    SampledSplits out;
    std::size_t offset = 0;
    for (auto& r : reqs) {
        std::vector<std::pair<std::string, const std::vector<std::string>*>> block(
            authors.begin() + static_cast<std::ptrdiff_t>(offset),
            authors.begin() + static_cast<std::ptrdiff_t>(offset + r.authors));
        offset += r.authors;
        if (r.pairs == 0) continue;
        Rng rng(derive_seed(spec.seed, "sample-" + r.name));
        PairSet ps = sample_split(block, r.pairs, rng, r.name);
        if (r.name == "train")
            out.train = std::move(ps);
        else if (r.name == "val")
            out.val = std::move(ps);
        else
            out.test = std::move(ps);
    }
    return out;
}

AuthorCorpus load_corpus_jsonl(const std::filesystem::path& path) {
    AuthorCorpus corpus;
    std::size_t lineno = 0;
    for (const json& row : read_jsonl_file(path)) {
        ++lineno;
        std::string author, text;
        try {
            author = row.at("author_id").get<std::string>();
            text = row.at("text").get<std::string>();
        } catch (const json::exception& e) {
            throw IoError(path.string() + ": line " + std::to_string(lineno) +
                          ": expected {\"author_id\", \"text\"}: " + e.what());
        }
        if (author.empty())
            throw IoError(path.string() + ": line " + std::to_string(lineno) +
                          ": empty author_id");
        if (trimmed(text).empty())
            throw IoError(path.string() + ": line " + std::to_string(lineno) +
                          ": empty document text");
        corpus.authors[author].push_back(std::move(text));
    }
    return corpus;
}

void save_corpus_jsonl(const std::filesystem::path& path, const AuthorCorpus& corpus) {
    std::vector<json> rows;
    rows.reserve(corpus.document_count());
    for (const auto& [author, docs] : corpus.authors)
        for (const std::string& d : docs)
            rows.push_back(json{{"author_id", author}, {"text", d}});
    write_jsonl_file(path, rows);
}

PairSet load_pairs_jsonl(const std::filesystem::path& path) {
    PairSet out;
    std::unordered_map<std::string, std::uint32_t> doc_index;
    auto add_doc = [&](std::string text) -> std::uint32_t {
        if (auto it = doc_index.find(text); it != doc_index.end()) return it->second;
        const auto id = static_cast<std::uint32_t>(out.docs.size());
        doc_index.emplace(text, id);
        out.docs.push_back(std::move(text));
        return id;
    };
    std::size_t lineno = 0;
    for (const json& row : read_jsonl_file(path)) {
        ++lineno;
        try {
            const int label = row.at("label").get<int>();
            if (label != 1 && label != -1)
                throw IoError(path.string() + ": line " + std::to_string(lineno) +
                              ": label must be 1 or -1");
            const std::uint32_t d1 = add_doc(row.at("doc1").get<std::string>());
            const std::uint32_t d2 = add_doc(row.at("doc2").get<std::string>());
            out.pairs.push_back({d1, d2, label});
        } catch (const json::exception& e) {
            throw IoError(path.string() + ": line " + std::to_string(lineno) +
                          ": expected {\"doc1\", \"doc2\", \"label\"}: " + e.what());
        }
    }
    return out;
}

void save_pairs_jsonl(const std::filesystem::path& path, const PairSet& pairs) {
    std::vector<json> rows;
    rows.reserve(pairs.pairs.size());
    for (std::size_t i = 0; i < pairs.pairs.size(); ++i)
        rows.push_back(json{{"doc1", std::string(pairs.doc1(i))},
                            {"doc2", std::string(pairs.doc2(i))},
                            {"label", pairs.pairs[i].label}});
    write_jsonl_file(path, rows);
}

} // namespace rsim
