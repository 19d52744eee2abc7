#include "rsim/residual.hpp"

#include "rsim/errors.hpp"
#include "rsim/rng.hpp"

#include "doctest.h"

#include <cmath>

using namespace rsim;

namespace {

ModelConfig tiny_config(Variant v) {
    ModelConfig cfg;
    cfg.variant = v;
    cfg.fv_dim = 7;
    cfg.emb_dim = 9;
    cfg.attn_width = 6;
    cfg.hidden1 = 5;
    cfg.hidden2 = 4;
    cfg.dropout = 0.1;
    cfg.output_scale = 2.0;
    cfg.registry_name = "core";
    cfg.registry_fingerprint = "test";
    cfg.embedding_dims = 9;
    return cfg;
}

PairExample random_example(Rng& rng, const ModelConfig& cfg) {
    PairExample ex;
    ex.fv1.resize(cfg.fv_dim);
    ex.fv2.resize(cfg.fv_dim);
    ex.e1.resize(cfg.emb_dim);
    ex.e2.resize(cfg.emb_dim);
    for (double& x : ex.fv1) x = rng.uniform(-2.0, 2.0);
    for (double& x : ex.fv2) x = rng.uniform(-2.0, 2.0);
    for (double& x : ex.e1) x = rng.uniform(-1.0, 1.0);
    for (double& x : ex.e2) x = rng.uniform(-1.0, 1.0);
    ex.sim = rng.uniform(-1.0, 1.0);
    ex.label = rng.bernoulli(0.5) ? 1 : -1;
    ex.target = ex.label - ex.sim;
    return ex;
}

// Puts real values into every tensor, including the zero-initialized output
// layer, so gradient checks exercise the whole network.
void randomize_all(ResidualModel& model, std::uint64_t seed) {
    Rng rng(seed);
    for (Tensor& t : model.tensors())
        for (double& x : t.data) x = rng.uniform(-0.45, 0.45);
}

struct FdCheck {
    double max_rel_err = 0.0;
    std::string worst;
};

// Central finite differences over every parameter (the independent oracle).
FdCheck finite_difference_check(ResidualModel& model, const std::vector<PairExample>& batch,
                                double h) {
    const std::vector<Tensor> analytic = batch_gradients(model, batch);
    FdCheck out;
    for (std::size_t t = 0; t < model.tensors().size(); ++t) {
        Tensor& tensor = model.tensors()[t];
        for (std::size_t i = 0; i < tensor.size(); ++i) {
            const double orig = tensor.data[i];
            tensor.data[i] = orig + h;
            const double lp = batch_loss(model, batch);
            tensor.data[i] = orig - h;
            const double lm = batch_loss(model, batch);
            tensor.data[i] = orig;
            const double fd = (lp - lm) / (2.0 * h);
            const double an = analytic[t].data[i];
            const double rel = std::abs(fd - an) / std::max({std::abs(fd), std::abs(an), 1e-6});
            if (rel > out.max_rel_err) {
                out.max_rel_err = rel;
                out.worst = tensor.name + "[" + std::to_string(i) + "]";
            }
        }
    }
    return out;
}

} // namespace

TEST_CASE("mse_loss: oracle cases") {
    const std::vector<double> p1{0.5}, t1{1.0};
    CHECK(mse_loss(p1, t1) == doctest::Approx(0.25));
    const std::vector<double> same{0.3, -0.7, 2.0};
    CHECK(mse_loss(same, same) == doctest::Approx(0.0));

    Rng rng(55);
    std::vector<double> preds(10), targets(10);
    for (double& x : preds) x = rng.uniform(-2.0, 2.0);
    for (double& x : targets) x = rng.uniform(-2.0, 2.0);
    double oracle = 0.0;
    for (std::size_t i = 0; i < preds.size(); ++i)
        oracle += (preds[i] - targets[i]) * (preds[i] - targets[i]);
    oracle /= 10.0;
    CHECK(std::abs(mse_loss(preds, targets) - oracle) < 1e-12);

    const std::vector<double> shorter{1.0};
    CHECK_THROWS_AS(mse_loss(preds, shorter), Error);
    CHECK_THROWS_AS(mse_loss({}, {}), Error);
}

TEST_CASE("forward: fresh model predicts exactly zero") {
    Rng rng(1);
    for (Variant v : {Variant::Combined, Variant::OnlyNeural, Variant::Appended}) {
        const ModelConfig cfg = tiny_config(v);
        const ResidualModel model = ResidualModel::initialize(cfg, 77);
        for (int t = 0; t < 5; ++t) {
            const PairExample ex = random_example(rng, cfg);
            CHECK(model.forward(ex.fv1, ex.fv2, ex.e1, ex.e2) == 0.0);
        }
    }
}

TEST_CASE("forward: output strictly inside (-output_scale, output_scale)") {
    Rng rng(2);
    for (Variant v : {Variant::Combined, Variant::OnlyNeural, Variant::Appended}) {
        const ModelConfig cfg = tiny_config(v);
        ResidualModel model = ResidualModel::initialize(cfg, 3);
        randomize_all(model, 9);
        for (int t = 0; t < 1000; ++t) {
            const PairExample ex = random_example(rng, cfg);
            const double out = model.forward(ex.fv1, ex.fv2, ex.e1, ex.e2);
            CHECK(std::abs(out) < cfg.output_scale);
        }
    }
}

TEST_CASE("forward: pair symmetry under side swap") {
    Rng rng(3);
    for (Variant v : {Variant::Combined, Variant::OnlyNeural, Variant::Appended}) {
        const ModelConfig cfg = tiny_config(v);
        ResidualModel model = ResidualModel::initialize(cfg, 4);
        randomize_all(model, 11);
        for (int t = 0; t < 50; ++t) {
            const PairExample ex = random_example(rng, cfg);
            const double ab = model.forward(ex.fv1, ex.fv2, ex.e1, ex.e2);
            const double ba = model.forward(ex.fv2, ex.fv1, ex.e2, ex.e1);
            CHECK(std::abs(ab - ba) < 1e-6);
        }
    }
}

TEST_CASE("forward: dimension mismatch is an error") {
    const ModelConfig cfg = tiny_config(Variant::Combined);
    const ResidualModel model = ResidualModel::initialize(cfg, 5);
    Rng rng(6);
    PairExample ex = random_example(rng, cfg);
    ex.e1.resize(cfg.emb_dim + 1);
    CHECK_THROWS_AS(model.forward(ex.fv1, ex.fv2, ex.e1, ex.e2), Error);
}

TEST_CASE("gradients: analytic matches central finite differences") {
    Rng rng(42);
    for (Variant v : {Variant::Combined, Variant::OnlyNeural, Variant::Appended}) {
        CAPTURE(variant_name(v));
        const ModelConfig cfg = tiny_config(v);
        ResidualModel model = ResidualModel::initialize(cfg, 7);
        randomize_all(model, 13);
        std::vector<PairExample> batch;
        for (int i = 0; i < 4; ++i) batch.push_back(random_example(rng, cfg));
        const FdCheck check = finite_difference_check(model, batch, 1e-5);
        CAPTURE(check.worst);
        CHECK(check.max_rel_err < 1e-4);
    }
}

TEST_CASE("train: overfits a 16-pair set within 500 epochs") {
    ModelConfig cfg = tiny_config(Variant::Combined);
    cfg.attn_width = 16;
    cfg.hidden1 = 32;
    cfg.hidden2 = 16;
    cfg.dropout = 0.0; // capacity check, not a regularization check
    Rng rng(8);
    std::vector<PairExample> pairs;
    for (int i = 0; i < 16; ++i) pairs.push_back(random_example(rng, cfg));

    TrainConfig tc;
    tc.learning_rate = 5e-3;
    tc.max_epochs = 500;
    tc.early_stopping_patience = 499; // no early stop in the capacity check
    tc.batch_size = 16;
    tc.weight_decay = 1e-8;
    tc.seed = 14;
    const ResidualModel trained = train(pairs, pairs, cfg, tc);

    CHECK(batch_loss(trained, pairs) < 0.01);
}

TEST_CASE("train: all-zero targets keep predictions near zero") {
    const ModelConfig cfg = tiny_config(Variant::OnlyNeural);
    Rng rng(15);
    std::vector<PairExample> pairs;
    for (int i = 0; i < 24; ++i) {
        PairExample ex = random_example(rng, cfg);
        ex.target = 0.0;
        pairs.push_back(std::move(ex));
    }
    TrainConfig tc;
    tc.max_epochs = 5;
    tc.early_stopping_patience = 4;
    tc.seed = 16;
    const ResidualModel trained = train(pairs, pairs, cfg, tc);
    for (const PairExample& ex : pairs)
        CHECK(std::abs(trained.forward(ex.fv1, ex.fv2, ex.e1, ex.e2)) < 0.05);
}

TEST_CASE("train: deterministic under (data, config, seed)") {
    const ModelConfig cfg = tiny_config(Variant::Appended);
    Rng rng(17);
    std::vector<PairExample> train_set, val_set;
    for (int i = 0; i < 32; ++i) train_set.push_back(random_example(rng, cfg));
    for (int i = 0; i < 8; ++i) val_set.push_back(random_example(rng, cfg));
    TrainConfig tc;
    tc.max_epochs = 3;
    tc.early_stopping_patience = 2;
    tc.seed = 18;
    const ResidualModel a = train(train_set, val_set, cfg, tc);
    const ResidualModel b = train(train_set, val_set, cfg, tc);
    CHECK(a.to_json().dump() == b.to_json().dump()); // byte-identical serialization
}

TEST_CASE("train: non-finite loss aborts with diagnostics") {
    const ModelConfig cfg = tiny_config(Variant::Combined);
    Rng rng(23);
    std::vector<PairExample> pairs;
    for (int i = 0; i < 8; ++i) pairs.push_back(random_example(rng, cfg));
    TrainConfig tc;
    tc.learning_rate = 1e155; // drives the parameters out of the reals
    tc.max_epochs = 3;
    tc.early_stopping_patience = 2;
    tc.batch_size = 4;
    tc.seed = 24;
    try {
        train(pairs, pairs, cfg, tc);
        FAIL("expected NonFiniteTraining");
    } catch (const NonFiniteTraining& e) {
        // diagnostics name the epoch, the failing phase (batch or
        // validation), and the learning rate
        const std::string msg = e.what();
        CHECK(msg.find("epoch") != std::string::npos);
        CHECK((msg.find("batch") != std::string::npos ||
               msg.find("validation") != std::string::npos));
        CHECK(msg.find("learning rate") != std::string::npos);
    }
}

TEST_CASE("train: config validation") {
    TrainConfig tc;
    tc.learning_rate = 0.0;
    CHECK_THROWS_AS(tc.validate(), Error);
    tc = TrainConfig{};
    tc.early_stopping_patience = 10;
    tc.max_epochs = 10;
    CHECK_THROWS_AS(tc.validate(), Error);
    tc = TrainConfig{};
    CHECK_NOTHROW(tc.validate());
}

TEST_CASE("model json round-trip preserves behavior") {
    const ModelConfig cfg = tiny_config(Variant::Combined);
    ResidualModel model = ResidualModel::initialize(cfg, 19);
    randomize_all(model, 21);
    model.meta.epochs_run = 3;
    model.meta.best_val_loss = 0.5;

    const json j = model.to_json();
    const ResidualModel back = ResidualModel::from_json(j);
    Rng rng(22);
    for (int t = 0; t < 10; ++t) {
        const PairExample ex = random_example(rng, cfg);
        CHECK(model.forward(ex.fv1, ex.fv2, ex.e1, ex.e2) ==
              back.forward(ex.fv1, ex.fv2, ex.e1, ex.e2));
    }
    CHECK(back.meta.epochs_run == 3);

    // shape tampering is rejected
    json bad = j;
    bad["weights"]["head.w3"]["shape"] = {2, cfg.hidden2};
    CHECK_THROWS_AS(ResidualModel::from_json(bad), IoError);
}
