#include "rsim/interpret.hpp"

#include "rsim/errors.hpp"
#include "rsim/pipeline.hpp"
#include "rsim/rng.hpp"

#include "doctest.h"

#include <cmath>

using namespace rsim;

TEST_CASE("intconf: worked values from the score decomposition") {
    // different-author direction, sim 0.09, residual 0.29
    CHECK(intconf(0.09, 0.29, -1) == doctest::Approx((1.0 - 0.09) / (1.0 - 0.09 + 0.29)));
    CHECK(intconf(0.09, 0.29, -1) == doctest::Approx(0.76).epsilon(0.01));
    // same-author direction, sim 0.20, residual 0.82
    CHECK(intconf(0.20, 0.82, 1) == doctest::Approx((1.0 + 0.20) / (1.0 + 0.20 + 0.82)));
    CHECK(intconf(0.20, 0.82, 1) == doctest::Approx(0.59).epsilon(0.01));
}

TEST_CASE("intconf: zero residual gives full confidence; degenerate gives 0") {
    CHECK(intconf(0.3, 0.0, 1) == 1.0);
    CHECK(intconf(-0.4, 0.0, -1) == 1.0);
    CHECK(intconf(-1.0, 0.0, 1) == 0.0); // denominator 0
    CHECK(intconf(1.0, 0.0, -1) == 0.0);
}

TEST_CASE("intconf: range and monotonicity properties") {
    Rng rng(404);
    for (int t = 0; t < 2000; ++t) {
        const double sim = rng.uniform(-1.0, 1.0);
        const double res = rng.uniform(-3.0, 3.0);
        const int label = rng.bernoulli(0.5) ? 1 : -1;
        const double ic = intconf(sim, res, label);
        CHECK(ic >= 0.0);
        CHECK(ic <= 1.0);
        // non-increasing in |residual|
        const double bigger = intconf(sim, res * 1.5, label);
        CHECK(bigger <= ic + 1e-12);
    }
    // extremes
    CHECK(intconf(1.0, 0.5, 1) == doctest::Approx(2.0 / 2.5));
    CHECK(intconf(-1.0, 0.5, 1) == 0.0);
    CHECK(intconf(-1.0, 0.5, -1) == doctest::Approx(2.0 / 2.5));
}

TEST_CASE("detect_flip: worked cases") {
    const FlipInfo flip = detect_flip(0.20, 1.02, 0.5);
    CHECK(flip.g2v_label == -1);
    CHECK(flip.predicted_label == 1);
    CHECK(flip.flipped);

    const FlipInfo keep = detect_flip(0.09, 0.38, 0.5);
    CHECK(keep.g2v_label == -1);
    CHECK(keep.predicted_label == -1);
    CHECK(!keep.flipped);

    const FlipInfo zero = detect_flip(0.7, 0.7, 0.5);
    CHECK(!zero.flipped);
}

TEST_CASE("score_pair: reproduces the worked decompositions end to end") {
    // different-author pair: 0.09 + 0.29 = 0.38 < 0.5, not flipped
    const PairScore a = score_pair(0.09, 0.29, 0.5);
    CHECK(a.final_score == 0.38);
    CHECK(a.predicted_label == -1);
    CHECK(!a.flipped);
    CHECK(std::abs(a.intconf - 0.76) <= 0.005);

    // same-author pair: 0.20 + 0.82 = 1.02 > 0.5, flipped from the
    // interpretable-only verdict
    const PairScore b = score_pair(0.20, 0.82, 0.5);
    CHECK(b.final_score == 1.02);
    CHECK(b.predicted_label == 1);
    CHECK(b.g2v_label == -1);
    CHECK(b.flipped);
    CHECK(std::abs(b.intconf - 0.59) <= 0.005);
}

TEST_CASE("score_pair: internal consistency invariants") {
    Rng rng(123);
    for (int t = 0; t < 500; ++t) {
        const double sim = rng.uniform(-1.0, 1.0);
        const double res = rng.uniform(-2.0, 2.0);
        const double thr = rng.uniform(-0.5, 1.0);
        const PairScore ps = score_pair(sim, res, thr);
        CHECK(ps.final_score == ps.sim + ps.residual_pred); // exact
        CHECK(ps.predicted_label == classify(ps.final_score, thr));
        CHECK(ps.g2v_label == classify(ps.sim, thr));
        CHECK(ps.flipped == (ps.predicted_label != ps.g2v_label));
        CHECK(ps.intconf == intconf(sim, res, ps.predicted_label));
    }
}

TEST_CASE("rank_features: worked scoring pairs") {
    // different-author metric
    CHECK(std::abs(-0.1 - 5.3) == doctest::Approx(5.4));
    // same-author metric
    CHECK(std::abs(2.7) + std::abs(4.6) - std::abs(2.7 - 4.6) == doctest::Approx(5.4));
    CHECK(std::abs(-1.7) + std::abs(-1.7) - std::abs(-1.7 + 1.7) == doctest::Approx(3.4));
}

TEST_CASE("rank_features: ordering, ties, and flags") {
    const auto& reg = FeatureRegistry::alt(); // 13 features, easy to control
    const std::size_t d = reg.size();
    FeatureVector raw1, raw2;
    raw1.registry_fingerprint = raw2.registry_fingerprint = reg.fingerprint();
    raw1.values.assign(d, 0.0);
    raw2.values.assign(d, 0.0);
    raw1.evidence.assign(d, {});
    raw2.evidence.assign(d, {});

    std::vector<double> z1(d, 0.0), z2(d, 0.0);
    // feature 0: big difference; 1 and 2: tie; 3: opposite signs (same dir)
    z1[0] = 5.0;
    z2[0] = -1.0;
    z1[1] = 2.0;
    z2[1] = -1.0;
    z1[2] = -1.0;
    z2[2] = 2.0;
    z1[3] = 2.0;
    z2[3] = -2.0;

    const auto diff = rank_features(raw1, raw2, z1, z2, reg, Direction::Different, 4);
    REQUIRE(diff.size() == 4);
    CHECK(diff[0].id == reg.definitions()[0].id);
    CHECK(diff[0].score == doctest::Approx(6.0));
    CHECK(diff[1].id == reg.definitions()[3].id); // |2-(-2)| = 4
    // 1 and 2 tie at 3.0: registry order breaks the tie
    CHECK(diff[2].id == reg.definitions()[1].id);
    CHECK(diff[3].id == reg.definitions()[2].id);

    const auto same = rank_features(raw1, raw2, z1, z2, reg, Direction::Same, 3);
    // same-direction scores: f0 = 6-6 = 0, f1 = 3-3 = 0, f3 = 4-4 = 0 -> all tie at 0
    REQUIRE(same.size() == 3);
    CHECK(same[0].id == reg.definitions()[0].id);
    CHECK(same[0].opposite_sign);

    CHECK_THROWS_AS(rank_features(raw1, raw2, z1, z2, reg, Direction::Same, 0), Error);
    FeatureVector bad = raw1;
    bad.registry_fingerprint = "nope";
    CHECK_THROWS_AS(rank_features(bad, raw2, z1, z2, reg, Direction::Same, 2),
                    FingerprintMismatch);
}

TEST_CASE("rank_features: same-direction score symmetry and sign properties") {
    Rng rng(55);
    for (int t = 0; t < 300; ++t) {
        const double a = rng.uniform(-4.0, 4.0);
        const double b = rng.uniform(-4.0, 4.0);
        const double sab = std::abs(a) + std::abs(b) - std::abs(a - b);
        const double sba = std::abs(b) + std::abs(a) - std::abs(b - a);
        CHECK(sab == doctest::Approx(sba)); // symmetric
        if (a * b >= 0.0) CHECK(sab >= -1e-12); // non-negative on same signs
        const double dab = std::abs(a - b);
        CHECK((dab == 0.0) == (a == b)); // metric difference
    }
}

TEST_CASE("explain_pair: zero model composes the trivial cases") {
    // Build a small standardization context over synthetic docs.
    const AuthorCorpus corpus = generate_synthetic_corpus(4, 3, 60, 2023);
    std::vector<std::string> docs;
    for (const auto& [_, ds] : corpus.authors) docs.insert(docs.end(), ds.begin(), ds.end());

    const auto& reg = FeatureRegistry::core();
    std::vector<FeatureVector> fvs;
    for (const auto& d : docs) fvs.push_back(extract(d, reg));
    const StandardizationStats stats = fit_stats(fvs);

    ModelConfig mcfg;
    mcfg.variant = Variant::Combined;
    mcfg.fv_dim = reg.size();
    mcfg.registry_name = "core";
    mcfg.registry_fingerprint = reg.fingerprint();
    const ResidualModel zero_model = ResidualModel::initialize(mcfg, 1);

    // identical documents: sim 1.0, residual 0, intconf 1, same-author
    const Explanation e = explain_pair(docs[0], docs[0], zero_model, stats, 0.5, 5);
    CHECK(e.score.residual_pred == 0.0);
    CHECK(e.score.final_score == e.score.sim);
    CHECK(e.score.sim == doctest::Approx(1.0));
    CHECK(e.score.intconf == 1.0);
    CHECK(e.score.predicted_label == 1);
    CHECK(!e.score.flipped);
    CHECK(e.direction == Direction::Same);
    REQUIRE(e.top_features.size() == 5);

    // faithfulness by construction: the explanation's own fields recompose
    CHECK(e.score.final_score == e.score.sim + e.score.residual_pred);

    // evidence spans resolve into the source documents
    for (const RankedFeature& f : e.top_features)
        for (const Span& s : f.evidence1) {
            CHECK(s.start < s.end);
            CHECK(s.end <= docs[0].size());
        }

    // explanation on a different pair, serialized
    const Explanation e2 = explain_pair(docs[0], docs[5], zero_model, stats, 0.5, 3, "p7");
    const json j = explanation_to_json(e2);
    CHECK(j.at("pair_id") == "p7");
    CHECK(j.at("sim") == e2.score.sim);
    CHECK(j.at("features").size() == 3);
    CHECK(j.at("flipped") == e2.score.flipped);

    const std::string text = explanation_text(e2, docs[0], docs[5]);
    CHECK(text.find("interpretability confidence") != std::string::npos);
}

TEST_CASE("explain_pair: fingerprint and empty-document errors") {
    const auto& reg = FeatureRegistry::core();
    ModelConfig mcfg;
    mcfg.variant = Variant::OnlyNeural;
    mcfg.fv_dim = reg.size();
    mcfg.registry_name = "core";
    mcfg.registry_fingerprint = reg.fingerprint();
    const ResidualModel model = ResidualModel::initialize(mcfg, 2);

    StandardizationStats stats;
    stats.registry_fingerprint = "wrong";
    stats.mean.assign(reg.size(), 0.0);
    stats.sd.assign(reg.size(), 1.0);
    CHECK_THROWS_AS(explain_pair("a b c", "d e f", model, stats, 0.5, 5),
                    FingerprintMismatch);

    stats.registry_fingerprint = reg.fingerprint();
    CHECK_THROWS_AS(explain_pair("", "d e f", model, stats, 0.5, 5), Error);
}

TEST_CASE("intconf_distribution: histogram sums and brute-force mean") {
    std::vector<PairScore> scores;
    Rng rng(9);
    double brute_mean = 0.0;
    for (int i = 0; i < 500; ++i) {
        PairScore ps = score_pair(rng.uniform(-1.0, 1.0), rng.uniform(-1.5, 1.5), 0.5);
        brute_mean += ps.intconf;
        scores.push_back(ps);
    }
    brute_mean /= 500.0;

    const IntconfHistogram h = intconf_distribution(scores);
    std::size_t total = 0;
    for (std::size_t b : h.bins) total += b;
    CHECK(total == scores.size());
    CHECK(std::abs(h.mean - brute_mean) < 1e-12);

    // all-zero residuals put all mass at 1.0
    std::vector<PairScore> ones;
    for (int i = 0; i < 10; ++i) ones.push_back(score_pair(0.3, 0.0, 0.5));
    const IntconfHistogram h1 = intconf_distribution(ones);
    CHECK(h1.bins.back() == 10);
    CHECK(h1.mean == 1.0);

    CHECK_THROWS_AS(intconf_distribution(std::vector<PairScore>{}), Error);
}
