#include "rsim/contrastive.hpp"

#include "rsim/corpus.hpp"
#include "rsim/embedding.hpp"
#include "rsim/errors.hpp"
#include "rsim/pipeline.hpp"

#include "doctest.h"

using namespace rsim;

TEST_CASE("contrastive: zero-initialized projection is rejected") {
    ContrastiveConfig cfg;
    cfg.emb_dim = 8;
    cfg.proj_dim = 4;
    Tensor w("proj.w", 4, 8); // all zeros
    Tensor b("proj.b", 4, 1);
    CHECK_THROWS_AS(ContrastiveModel(cfg, std::move(w), std::move(b)), Error);
    CHECK_NOTHROW(ContrastiveModel::initialize(cfg, 1));
}

TEST_CASE("contrastive: training separates synthetic pairs") {
    const AuthorCorpus corpus = generate_synthetic_corpus(16, 6, 90, 1234);
    SplitSpec spec;
    spec.train_pairs = 200;
    spec.val_pairs = 40;
    spec.test_pairs = 60;
    spec.seed = 99;
    const auto splits = sample_pairs(corpus, spec);

    const EmbeddingConfig ecfg;
    auto to_pairs = [&](const PairSet& ps) {
        std::vector<EmbPair> out;
        for (const auto& p : ps.pairs)
            out.push_back(EmbPair{embed(ps.docs[p.doc1], ecfg), embed(ps.docs[p.doc2], ecfg),
                                  p.label});
        return out;
    };
    const auto train_pairs = to_pairs(splits.train);
    const auto val_pairs = to_pairs(splits.val);
    const auto test_pairs = to_pairs(splits.test);

    ContrastiveConfig ccfg;
    TrainConfig tc;
    tc.max_epochs = 6;
    tc.early_stopping_patience = 5;
    tc.seed = 7;
    const ContrastiveModel model = train_contrastive_baseline(train_pairs, val_pairs, ccfg, tc);

    // margin property on held-out pairs: same-author projections closer
    double same = 0.0, diff = 0.0;
    std::size_t n_same = 0, n_diff = 0;
    for (const EmbPair& p : test_pairs) {
        const double c = model.score(p.e1, p.e2);
        if (p.label == 1) {
            same += c;
            ++n_same;
        } else {
            diff += c;
            ++n_diff;
        }
    }
    same /= static_cast<double>(n_same);
    diff /= static_cast<double>(n_diff);
    MESSAGE("held-out mean cosine: same " << same << ", diff " << diff);
    CHECK(same > diff);

    // training loss decreases over the first 3 epochs
    REQUIRE(model.meta.epoch_train_loss.size() >= 3);
    CHECK(model.meta.epoch_train_loss[1] < model.meta.epoch_train_loss[0]);
    CHECK(model.meta.epoch_train_loss[2] < model.meta.epoch_train_loss[1]);
}

TEST_CASE("contrastive: deterministic and serializable") {
    Rng rng(31);
    std::vector<EmbPair> train_set, val_set;
    ContrastiveConfig cfg;
    cfg.emb_dim = 12;
    cfg.proj_dim = 5;
    auto rand_pair = [&](int label) {
        EmbPair p;
        p.e1.resize(cfg.emb_dim);
        p.e2.resize(cfg.emb_dim);
        for (double& x : p.e1) x = rng.uniform(-1.0, 1.0);
        for (double& x : p.e2) x = rng.uniform(-1.0, 1.0);
        p.label = label;
        return p;
    };
    for (int i = 0; i < 20; ++i) train_set.push_back(rand_pair(i % 2 == 0 ? 1 : -1));
    for (int i = 0; i < 6; ++i) val_set.push_back(rand_pair(i % 2 == 0 ? 1 : -1));

    TrainConfig tc;
    tc.max_epochs = 3;
    tc.early_stopping_patience = 2;
    tc.seed = 5;
    const auto a = train_contrastive_baseline(train_set, val_set, cfg, tc);
    const auto b = train_contrastive_baseline(train_set, val_set, cfg, tc);
    CHECK(a.to_json().dump() == b.to_json().dump());

    const auto back = ContrastiveModel::from_json(a.to_json());
    CHECK(back.score(train_set[0].e1, train_set[0].e2) ==
          a.score(train_set[0].e1, train_set[0].e2));
}
