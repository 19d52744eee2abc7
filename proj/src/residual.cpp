#include "rsim/residual.hpp"

#include "rsim/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace rsim {

namespace {

constexpr double kBeta1 = 0.9;
constexpr double kBeta2 = 0.999;
constexpr double kEps = 1e-8;

// Tensor order inside params_. The head tensors always come last so the two
// head-only variants share indexing logic.
enum CombinedIdx {
    PROJ_FV_W, PROJ_FV_B, PROJ_EMB_W, PROJ_EMB_B,
    ATTN_WQ, ATTN_WK, ATTN_WV,
    C_HEAD_W1, C_HEAD_B1, C_HEAD_W2, C_HEAD_B2, C_HEAD_W3, C_HEAD_B3,
};
enum HeadIdx { HEAD_W1, HEAD_B1, HEAD_W2, HEAD_B2, HEAD_W3, HEAD_B3 };

std::size_t head_base(Variant v) {
    return v == Variant::Combined ? static_cast<std::size_t>(C_HEAD_W1)
                                  : static_cast<std::size_t>(HEAD_W1);
}

void kaiming_uniform(Tensor& t, Rng& rng) {
    const double bound = std::sqrt(6.0 / static_cast<double>(t.cols));
    for (double& x : t.data) x = rng.uniform(-bound, bound);
}

inline double relu(double x) { return x > 0.0 ? x : 0.0; }

// Pair-symmetric combination of the two sides: [a+b, |a-b|, a*b].
void symmetric_blocks(std::span<const double> a, std::span<const double> b, double* out) {
    const std::size_t n = a.size();
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + b[i];
    for (std::size_t i = 0; i < n; ++i) out[n + i] = std::abs(a[i] - b[i]);
    for (std::size_t i = 0; i < n; ++i) out[2 * n + i] = a[i] * b[i];
}

struct ForwardPass {
    // head caches
    Vec x;
    Vec z1pre, z1out, z2pre, z2out;
    Vec mask1, mask2;
    double u = 0.0, out = 0.0;

    // attention caches (combined only)
    std::array<Vec, 4> tok, q, k, v;
    std::array<std::array<double, 4>, 4> attn{};
    std::array<Vec, 4> ctx;

    const PairExample* ex = nullptr;

    void run(const ResidualModel& model, const PairExample& example, bool train_mode,
             Rng* dropout_rng);
    void backward(const ResidualModel& model, double dout, std::vector<Tensor>& grads) const;
};

void check_dims(const ModelConfig& cfg, std::size_t f1, std::size_t f2, std::size_t n1,
                std::size_t n2) {
    if (n1 != cfg.emb_dim || n2 != cfg.emb_dim)
        throw Error("residual forward: embedding dims " + std::to_string(n1) + "/" +
                    std::to_string(n2) + " do not match model emb_dim " +
                    std::to_string(cfg.emb_dim));
    if (cfg.variant != Variant::OnlyNeural && (f1 != cfg.fv_dim || f2 != cfg.fv_dim))
        throw Error("residual forward: feature dims " + std::to_string(f1) + "/" +
                    std::to_string(f2) + " do not match model fv_dim " +
                    std::to_string(cfg.fv_dim));
}

void ForwardPass::run(const ResidualModel& model, const PairExample& example, bool train_mode,
                      Rng* dropout_rng) {
    const ModelConfig& cfg = model.config();
    const auto& P = model.tensors();
    ex = &example;
    check_dims(cfg, example.fv1.size(), example.fv2.size(), example.e1.size(),
               example.e2.size());

    if (cfg.variant == Variant::Combined) {
        const std::size_t W = cfg.attn_width;
        const std::array<const Vec*, 4> inputs = {&example.fv1, &example.fv2, &example.e1,
                                                  &example.e2};
        for (int i = 0; i < 4; ++i) {
            const Tensor& w = P[i < 2 ? PROJ_FV_W : PROJ_EMB_W];
            const Tensor& b = P[i < 2 ? PROJ_FV_B : PROJ_EMB_B];
            tok[i].assign(W, 0.0);
            matvec(w, inputs[i]->data(), tok[i].data());
            for (std::size_t r = 0; r < W; ++r) tok[i][r] += b.data[r];
            q[i].assign(W, 0.0);
            k[i].assign(W, 0.0);
            v[i].assign(W, 0.0);
        }
        for (int i = 0; i < 4; ++i) {
            matvec(P[ATTN_WQ], tok[i].data(), q[i].data());
            matvec(P[ATTN_WK], tok[i].data(), k[i].data());
            matvec(P[ATTN_WV], tok[i].data(), v[i].data());
        }
        const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(W));
        for (int i = 0; i < 4; ++i) {
            std::array<double, 4> row{};
            double mx = -std::numeric_limits<double>::infinity();
            for (int j = 0; j < 4; ++j) {
                row[j] = dot(q[i].data(), k[j].data(), W) * inv_sqrt;
                mx = std::max(mx, row[j]);
            }
            double denom = 0.0;
            for (int j = 0; j < 4; ++j) {
                row[j] = std::exp(row[j] - mx);
                denom += row[j];
            }
            for (int j = 0; j < 4; ++j) attn[i][j] = row[j] / denom;
            ctx[i].assign(W, 0.0);
            for (int j = 0; j < 4; ++j)
                for (std::size_t r = 0; r < W; ++r) ctx[i][r] += attn[i][j] * v[j][r];
        }
        // Pool the attended contexts pairwise with the same symmetric
        // combination the other variants use, so the head sees
        // difference/product structure instead of a blind average.
        x.assign(6 * W, 0.0);
        symmetric_blocks(ctx[0], ctx[1], x.data());
        symmetric_blocks(ctx[2], ctx[3], x.data() + 3 * W);
    } else if (cfg.variant == Variant::OnlyNeural) {
        x.assign(3 * cfg.emb_dim, 0.0);
        symmetric_blocks(example.e1, example.e2, x.data());
    } else {
        x.assign(3 * cfg.fv_dim + 3 * cfg.emb_dim, 0.0);
        symmetric_blocks(example.fv1, example.fv2, x.data());
        symmetric_blocks(example.e1, example.e2, x.data() + 3 * cfg.fv_dim);
    }

    const std::size_t hb = head_base(cfg.variant);
    const Tensor& w1 = P[hb + HEAD_W1];
    const Tensor& b1 = P[hb + HEAD_B1];
    const Tensor& w2 = P[hb + HEAD_W2];
    const Tensor& b2 = P[hb + HEAD_B2];
    const Tensor& w3 = P[hb + HEAD_W3];
    const Tensor& b3 = P[hb + HEAD_B3];

    const double keep = 1.0 - cfg.dropout;
    auto make_mask = [&](Vec& mask, std::size_t n) {
        mask.assign(n, 1.0);
        if (train_mode && cfg.dropout > 0.0 && dropout_rng)
            for (double& m : mask) m = dropout_rng->uniform() < cfg.dropout ? 0.0 : 1.0 / keep;
    };

    z1pre.assign(w1.rows, 0.0);
    matvec(w1, x.data(), z1pre.data());
    for (std::size_t r = 0; r < w1.rows; ++r) z1pre[r] += b1.data[r];
    make_mask(mask1, w1.rows);
    z1out.resize(w1.rows);
    for (std::size_t r = 0; r < w1.rows; ++r) z1out[r] = relu(z1pre[r]) * mask1[r];

    z2pre.assign(w2.rows, 0.0);
    matvec(w2, z1out.data(), z2pre.data());
    for (std::size_t r = 0; r < w2.rows; ++r) z2pre[r] += b2.data[r];
    make_mask(mask2, w2.rows);
    z2out.resize(w2.rows);
    for (std::size_t r = 0; r < w2.rows; ++r) z2out[r] = relu(z2pre[r]) * mask2[r];

    u = dot(w3.data.data(), z2out.data(), w3.cols) + b3.data[0];
    out = cfg.output_scale * std::tanh(u);
}

void ForwardPass::backward(const ResidualModel& model, double dout,
                           std::vector<Tensor>& grads) const {
    const ModelConfig& cfg = model.config();
    const auto& P = model.tensors();
    const std::size_t hb = head_base(cfg.variant);

    const double th = std::tanh(u);
    const double du = dout * cfg.output_scale * (1.0 - th * th);

    const Tensor& w3 = P[hb + HEAD_W3];
    Tensor& gw3 = grads[hb + HEAD_W3];
    for (std::size_t c = 0; c < w3.cols; ++c) gw3.data[c] += du * z2out[c];
    grads[hb + HEAD_B3].data[0] += du;

    Vec dz2(z2out.size(), 0.0);
    for (std::size_t c = 0; c < w3.cols; ++c) dz2[c] = w3.data[c] * du;
    for (std::size_t r = 0; r < dz2.size(); ++r)
        dz2[r] = (z2pre[r] > 0.0 ? dz2[r] * mask2[r] : 0.0);

    const Tensor& w2 = P[hb + HEAD_W2];
    outer_acc(grads[hb + HEAD_W2], dz2.data(), z1out.data());
    for (std::size_t r = 0; r < dz2.size(); ++r) grads[hb + HEAD_B2].data[r] += dz2[r];

    Vec dz1(z1out.size(), 0.0);
    matvec_transposed_acc(w2, dz2.data(), dz1.data());
    for (std::size_t r = 0; r < dz1.size(); ++r)
        dz1[r] = (z1pre[r] > 0.0 ? dz1[r] * mask1[r] : 0.0);

    const Tensor& w1 = P[hb + HEAD_W1];
    outer_acc(grads[hb + HEAD_W1], dz1.data(), x.data());
    for (std::size_t r = 0; r < dz1.size(); ++r) grads[hb + HEAD_B1].data[r] += dz1[r];

    if (cfg.variant != Variant::Combined) return; // inputs are data, not parameters

    const std::size_t W = cfg.attn_width;
    Vec dx(6 * W, 0.0);
    matvec_transposed_acc(w1, dz1.data(), dx.data());

    std::array<Vec, 4> dctx;
    for (int i = 0; i < 4; ++i) dctx[i].assign(W, 0.0);
    auto unpool = [&](const Vec& a, const Vec& b, Vec& da, Vec& db, std::size_t base) {
        for (std::size_t r = 0; r < W; ++r) {
            const double dsum = dx[base + r];
            const double dabs = dx[base + W + r];
            const double dprod = dx[base + 2 * W + r];
            const double sgn = a[r] > b[r] ? 1.0 : (a[r] < b[r] ? -1.0 : 0.0);
            da[r] += dsum + sgn * dabs + b[r] * dprod;
            db[r] += dsum - sgn * dabs + a[r] * dprod;
        }
    };
    unpool(ctx[0], ctx[1], dctx[0], dctx[1], 0);
    unpool(ctx[2], ctx[3], dctx[2], dctx[3], 3 * W);

    std::array<Vec, 4> dv, dq, dk;
    for (int i = 0; i < 4; ++i) {
        dv[i].assign(W, 0.0);
        dq[i].assign(W, 0.0);
        dk[i].assign(W, 0.0);
    }
    std::array<std::array<double, 4>, 4> dattn{}, dscore{};
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            dattn[i][j] = dot(dctx[i].data(), v[j].data(), W);
            for (std::size_t r = 0; r < W; ++r) dv[j][r] += attn[i][j] * dctx[i][r];
        }
        double row_dot = 0.0;
        for (int j = 0; j < 4; ++j) row_dot += dattn[i][j] * attn[i][j];
        for (int j = 0; j < 4; ++j) dscore[i][j] = attn[i][j] * (dattn[i][j] - row_dot);
    }
    const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(W));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const double g = dscore[i][j] * inv_sqrt;
            if (g == 0.0) continue;
            for (std::size_t r = 0; r < W; ++r) {
                dq[i][r] += g * k[j][r];
                dk[j][r] += g * q[i][r];
            }
        }

    std::array<Vec, 4> dtok;
    for (int i = 0; i < 4; ++i) {
        dtok[i].assign(W, 0.0);
        outer_acc(grads[ATTN_WQ], dq[i].data(), tok[i].data());
        outer_acc(grads[ATTN_WK], dk[i].data(), tok[i].data());
        outer_acc(grads[ATTN_WV], dv[i].data(), tok[i].data());
        matvec_transposed_acc(P[ATTN_WQ], dq[i].data(), dtok[i].data());
        matvec_transposed_acc(P[ATTN_WK], dk[i].data(), dtok[i].data());
        matvec_transposed_acc(P[ATTN_WV], dv[i].data(), dtok[i].data());
    }

    const std::array<const Vec*, 4> inputs = {&ex->fv1, &ex->fv2, &ex->e1, &ex->e2};
    for (int i = 0; i < 4; ++i) {
        const std::size_t wi = i < 2 ? PROJ_FV_W : PROJ_EMB_W;
        const std::size_t bi = i < 2 ? PROJ_FV_B : PROJ_EMB_B;
        outer_acc(grads[wi], dtok[i].data(), inputs[i]->data());
        for (std::size_t r = 0; r < W; ++r) grads[bi].data[r] += dtok[i][r];
    }
}

void adamw_step(std::vector<Tensor>& params, const std::vector<Tensor>& grads,
                std::vector<Tensor>& m, std::vector<Tensor>& v, std::size_t step,
                const TrainConfig& tc) {
    const double bc1 = 1.0 - std::pow(kBeta1, static_cast<double>(step));
    const double bc2 = 1.0 - std::pow(kBeta2, static_cast<double>(step));
    for (std::size_t t = 0; t < params.size(); ++t) {
        double* p = params[t].data.data();
        const double* g = grads[t].data.data();
        double* mm = m[t].data.data();
        double* vv = v[t].data.data();
        const std::size_t n = params[t].size();
        for (std::size_t i = 0; i < n; ++i) {
            mm[i] = kBeta1 * mm[i] + (1.0 - kBeta1) * g[i];
            vv[i] = kBeta2 * vv[i] + (1.0 - kBeta2) * g[i] * g[i];
            const double mhat = mm[i] / bc1;
            const double vhat = vv[i] / bc2;
            p[i] -= tc.learning_rate * mhat / (std::sqrt(vhat) + kEps);
            p[i] -= tc.learning_rate * tc.weight_decay * p[i]; // decoupled decay
        }
    }
}

} // namespace

std::string_view variant_name(Variant v) {
    switch (v) {
        case Variant::Combined: return "combined";
        case Variant::OnlyNeural: return "only_neural";
        case Variant::Appended: return "appended";
    }
    return "?";
}

Variant variant_from_name(std::string_view name) {
    if (name == "combined") return Variant::Combined;
    if (name == "only_neural") return Variant::OnlyNeural;
    if (name == "appended") return Variant::Appended;
    throw Error("unknown residual model variant: " + std::string(name));
}

std::size_t ModelConfig::head_input_dim() const {
    switch (variant) {
        case Variant::Combined: return 6 * attn_width;
        case Variant::OnlyNeural: return 3 * emb_dim;
        case Variant::Appended: return 3 * fv_dim + 3 * emb_dim;
    }
    return 0;
}

void TrainConfig::validate() const {
    if (learning_rate <= 0.0) throw Error("TrainConfig: learning_rate must be positive");
    if (max_epochs == 0) throw Error("TrainConfig: max_epochs must be positive");
    if (batch_size == 0) throw Error("TrainConfig: batch_size must be positive");
    if (early_stopping_patience == 0)
        throw Error("TrainConfig: early_stopping_patience must be positive");
    if (weight_decay <= 0.0) throw Error("TrainConfig: weight_decay must be positive");
    if (early_stopping_patience >= max_epochs)
        throw Error("TrainConfig: early_stopping_patience must be < max_epochs");
}

double mse_loss(std::span<const double> preds, std::span<const double> targets) {
    if (preds.size() != targets.size() || preds.empty())
        throw Error("mse_loss: need equal nonzero lengths, got " +
                    std::to_string(preds.size()) + " and " + std::to_string(targets.size()));
    double acc = 0.0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        const double d = preds[i] - targets[i];
        acc += d * d;
    }
    return acc / static_cast<double>(preds.size());
}

ResidualModel ResidualModel::initialize(const ModelConfig& config, std::uint64_t seed) {
    if (config.variant != Variant::OnlyNeural && config.fv_dim == 0)
        throw Error("ModelConfig: fv_dim must be set for this variant");
    if (config.emb_dim == 0) throw Error("ModelConfig: emb_dim must be set");
    if (config.output_scale <= 0.0) throw Error("ModelConfig: output_scale must be positive");
    if (config.dropout < 0.0 || config.dropout >= 1.0)
        throw Error("ModelConfig: dropout must be in [0, 1)");

    ResidualModel model;
    model.config_ = config;
    auto& P = model.params_;
    if (config.variant == Variant::Combined) {
        const std::size_t W = config.attn_width;
        P.emplace_back("proj_fv.w", W, config.fv_dim);
        P.emplace_back("proj_fv.b", W, 1);
        P.emplace_back("proj_emb.w", W, config.emb_dim);
        P.emplace_back("proj_emb.b", W, 1);
        P.emplace_back("attn.wq", W, W);
        P.emplace_back("attn.wk", W, W);
        P.emplace_back("attn.wv", W, W);
    }
    const std::size_t in = config.head_input_dim();
    P.emplace_back("head.w1", config.hidden1, in);
    P.emplace_back("head.b1", config.hidden1, 1);
    P.emplace_back("head.w2", config.hidden2, config.hidden1);
    P.emplace_back("head.b2", config.hidden2, 1);
    P.emplace_back("head.w3", 1, config.hidden2);
    P.emplace_back("head.b3", 1, 1);

    Rng rng(derive_seed(seed, "model-init"));
    for (Tensor& t : P) {
        if (t.name == "head.w3") continue; // zero output layer
        if (t.name == "proj_fv.w") {
            // standardized features have unit per-feature variance, so the
            // expected squared input norm is fv_dim; target unit-RMS tokens
            const double bound = std::sqrt(3.0 / static_cast<double>(config.fv_dim));
            for (double& x : t.data) x = rng.uniform(-bound, bound);
        } else if (t.name == "proj_emb.w") {
            if (t.rows == t.cols) {
                // width matches the embedding: start at scaled identity so
                // the pooled blocks begin in the embedding's own basis
                const double scale = std::sqrt(static_cast<double>(t.cols));
                for (std::size_t r = 0; r < t.rows; ++r) t.at(r, r) = scale;
            } else {
                // embeddings are L2-normalized (squared norm 1)
                const double bound = std::sqrt(3.0);
                for (double& x : t.data) x = rng.uniform(-bound, bound);
            }
        } else if (t.name.starts_with("attn.")) {
            // scaled identity: logits start as token dot products at a
            // temperature that keeps the softmax unsaturated
            const double gamma =
                t.name == "attn.wv"
                    ? 1.0
                    : std::sqrt(6.0 / std::sqrt(static_cast<double>(config.attn_width)));
            for (std::size_t r = 0; r < t.rows; ++r) t.at(r, r) = gamma;
        } else if (t.cols == 1) {
            continue; // remaining biases start at zero
        } else {
            kaiming_uniform(t, rng);
        }
    }
    model.meta.seed = seed;
    return model;
}

double ResidualModel::forward(std::span<const double> fv1, std::span<const double> fv2,
                              std::span<const double> e1, std::span<const double> e2) const {
    PairExample ex;
    ex.fv1.assign(fv1.begin(), fv1.end());
    ex.fv2.assign(fv2.begin(), fv2.end());
    ex.e1.assign(e1.begin(), e1.end());
    ex.e2.assign(e2.begin(), e2.end());
    ForwardPass pass;
    pass.run(*this, ex, /*train_mode=*/false, nullptr);
    return pass.out;
}

double batch_loss(const ResidualModel& model, std::span<const PairExample> batch) {
    if (batch.empty()) throw Error("batch_loss: empty batch");
    ForwardPass pass;
    double acc = 0.0;
    for (const PairExample& ex : batch) {
        pass.run(model, ex, false, nullptr);
        const double d = pass.out - ex.target;
        acc += d * d;
    }
    return acc / static_cast<double>(batch.size());
}

std::vector<Tensor> batch_gradients(const ResidualModel& model,
                                    std::span<const PairExample> batch) {
    if (batch.empty()) throw Error("batch_gradients: empty batch");
    std::vector<Tensor> grads = clone_shapes(model.tensors());
    ForwardPass pass;
    const double scale = 2.0 / static_cast<double>(batch.size());
    for (const PairExample& ex : batch) {
        pass.run(model, ex, false, nullptr);
        pass.backward(model, scale * (pass.out - ex.target), grads);
    }
    return grads;
}

ResidualModel train(const std::vector<PairExample>& train_set,
                    const std::vector<PairExample>& val_set, const ModelConfig& model_config,
                    const TrainConfig& train_config) {
    train_config.validate();
    if (train_set.empty() || val_set.empty())
        throw Error("train: train and val sets must be nonempty");

    ResidualModel model = ResidualModel::initialize(model_config, train_config.seed);
    std::vector<Tensor> adam_m = clone_shapes(model.tensors());
    std::vector<Tensor> adam_v = clone_shapes(model.tensors());

    Rng order_rng(derive_seed(train_config.seed, "train-order"));
    Rng dropout_rng(derive_seed(train_config.seed, "train-dropout"));

    // The untrained model ("predict no correction") is the initial
    // checkpoint candidate.
    std::vector<Tensor> best_params = model.tensors();
    double best_val = batch_loss(model, val_set);
    std::size_t patience_used = 0;

    std::vector<std::size_t> order(train_set.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    ForwardPass pass;
    std::size_t step = 0;
    std::size_t epochs_run = 0;
    for (std::size_t epoch = 1; epoch <= train_config.max_epochs; ++epoch) {
        epochs_run = epoch;
        order_rng.shuffle(order);
        double epoch_sq_sum = 0.0;
        for (std::size_t b0 = 0; b0 < order.size(); b0 += train_config.batch_size) {
            const std::size_t bn = std::min(train_config.batch_size, order.size() - b0);
            std::vector<Tensor> grads = clone_shapes(model.tensors());
            double batch_sq = 0.0;
            for (std::size_t bi = 0; bi < bn; ++bi) {
                const PairExample& ex = train_set[order[b0 + bi]];
                pass.run(model, ex, true, &dropout_rng);
                const double d = pass.out - ex.target;
                batch_sq += d * d;
                pass.backward(model, 2.0 * d / static_cast<double>(bn), grads);
            }
            if (!std::isfinite(batch_sq))
                throw NonFiniteTraining(
                    "non-finite training loss at epoch " + std::to_string(epoch) + ", batch " +
                    std::to_string(b0 / train_config.batch_size) + ", learning rate " +
                    std::to_string(train_config.learning_rate));
            epoch_sq_sum += batch_sq;
            ++step;
            adamw_step(model.tensors(), grads, adam_m, adam_v, step, train_config);
        }
        model.meta.epoch_train_loss.push_back(epoch_sq_sum /
                                              static_cast<double>(train_set.size()));

        const double val_loss = batch_loss(model, val_set);
        if (!std::isfinite(val_loss))
            throw NonFiniteTraining("non-finite validation loss at epoch " +
                                    std::to_string(epoch) + ", learning rate " +
                                    std::to_string(train_config.learning_rate));
        model.meta.epoch_val_loss.push_back(val_loss);
        if (val_loss < best_val) {
            best_val = val_loss;
            best_params = model.tensors();
            patience_used = 0;
        } else {
            ++patience_used;
            if (patience_used >= train_config.early_stopping_patience) break;
        }
    }

    model.tensors() = std::move(best_params);
    model.meta.seed = train_config.seed;
    model.meta.epochs_run = epochs_run;
    model.meta.best_val_loss = best_val;
    return model;
}

json ResidualModel::to_json() const {
    json weights = json::object();
    for (const Tensor& t : params_)
        weights[t.name] = json{{"shape", {t.rows, t.cols}}, {"values", t.data}};
    return json{
        {"format_version", kFormatVersion},
        {"kind", "residual"},
        {"variant", std::string(variant_name(config_.variant))},
        {"output_scale", config_.output_scale},
        {"registry", config_.registry_name},
        {"registry_fingerprint", config_.registry_fingerprint},
        {"embedding", {{"kind", "char3_fnv1a"}, {"dims", config_.embedding_dims}}},
        {"architecture",
         {{"fv_dim", config_.fv_dim},
          {"emb_dim", config_.emb_dim},
          {"attn_width", config_.attn_width},
          {"hidden1", config_.hidden1},
          {"hidden2", config_.hidden2},
          {"dropout", config_.dropout}}},
        {"weights", weights},
        {"training",
         {{"seed", meta.seed},
          {"epochs", meta.epochs_run},
          {"best_val_loss", std::isfinite(meta.best_val_loss)
                                ? json(meta.best_val_loss)
                                : json(nullptr)}}},
    };
}

ResidualModel ResidualModel::from_json(const json& j) {
    ModelConfig cfg;
    TrainingMeta meta;
    try {
        if (j.at("format_version").get<int>() != kFormatVersion)
            throw Error("unsupported model format_version");
        if (j.value("kind", "residual") != "residual")
            throw Error("not a residual model file");
        cfg.variant = variant_from_name(j.at("variant").get<std::string>());
        cfg.output_scale = j.at("output_scale").get<double>();
        cfg.registry_name = j.at("registry").get<std::string>();
        cfg.registry_fingerprint = j.at("registry_fingerprint").get<std::string>();
        cfg.embedding_dims = j.at("embedding").at("dims").get<std::size_t>();
        const json& arch = j.at("architecture");
        cfg.fv_dim = arch.at("fv_dim").get<std::size_t>();
        cfg.emb_dim = arch.at("emb_dim").get<std::size_t>();
        cfg.attn_width = arch.at("attn_width").get<std::size_t>();
        cfg.hidden1 = arch.at("hidden1").get<std::size_t>();
        cfg.hidden2 = arch.at("hidden2").get<std::size_t>();
        cfg.dropout = arch.at("dropout").get<double>();
        meta.seed = j.at("training").at("seed").get<std::uint64_t>();
        meta.epochs_run = j.at("training").at("epochs").get<std::size_t>();
        const json& bvl = j.at("training").at("best_val_loss");
        meta.best_val_loss =
            bvl.is_null() ? std::numeric_limits<double>::infinity() : bvl.get<double>();
    } catch (const json::exception& e) {
        throw IoError(std::string("malformed model file: ") + e.what());
    }

    // Rebuild the expected layout, then load and shape-check each tensor.
    ResidualModel model = initialize(cfg, meta.seed);
    model.meta = meta;
    const json& weights = j.at("weights");
    for (Tensor& t : model.params_) {
        if (!weights.contains(t.name)) throw IoError("model file missing tensor " + t.name);
        const json& wj = weights.at(t.name);
        const auto shape = wj.at("shape").get<std::vector<std::size_t>>();
        if (shape.size() != 2 || shape[0] != t.rows || shape[1] != t.cols)
            throw IoError("model tensor " + t.name + " has unexpected shape");
        const auto values = wj.at("values").get<std::vector<double>>();
        if (values.size() != t.size())
            throw IoError("model tensor " + t.name + " has wrong element count");
        t.data = values;
    }
    if (weights.size() != model.params_.size())
        throw IoError("model file has unexpected extra tensors");
    return model;
}

} // namespace rsim
