#include "rsim/embedding.hpp"

#include "rsim/corpus.hpp"
#include "rsim/simspace.hpp"

#include "doctest.h"

#include <cmath>

using namespace rsim;

TEST_CASE("embed: determinism and normalization") {
    const EmbeddingConfig cfg;
    const auto a = embed("the quick brown fox", cfg);
    const auto b = embed("the quick brown fox", cfg);
    CHECK(a == b);
    double norm = 0.0;
    for (double x : a) norm += x * x;
    CHECK(std::sqrt(norm) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(a.size() == 256);
}

TEST_CASE("embed: texts shorter than one trigram give the zero vector") {
    const EmbeddingConfig cfg;
    for (const char* t : {"", "a", "ab"}) {
        const auto v = embed(t, cfg);
        double norm = 0.0;
        for (double x : v) norm += x * x;
        CHECK(norm == 0.0);
    }
}

TEST_CASE("embed: case-insensitive") {
    const EmbeddingConfig cfg;
    CHECK(embed("Hello World", cfg) == embed("hello world", cfg));
}

TEST_CASE("embed: near-duplicates score higher than unrelated text on average") {
    const EmbeddingConfig cfg;
    const AuthorCorpus corpus = generate_synthetic_corpus(10, 2, 80, 404);

    std::vector<std::string> docs;
    for (const auto& [_, ds] : corpus.authors) docs.insert(docs.end(), ds.begin(), ds.end());

    double near_sum = 0.0, far_sum = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < docs.size(); ++i) {
        // change one word
        std::string changed = docs[i];
        const auto pos = changed.find(' ');
        REQUIRE(pos != std::string::npos);
        changed.replace(0, pos, "Zyqrx");
        const auto self = embed(docs[i], cfg);
        const auto near = embed(changed, cfg);
        const auto far = embed(docs[(i + 7) % docs.size()], cfg);
        near_sum += cosine(self, near).value;
        far_sum += cosine(self, far).value;
        ++n;
    }
    MESSAGE("mean cosine, one word changed: " << near_sum / n << "; unrelated: " << far_sum / n);
    CHECK(near_sum / n > far_sum / n);
}
