#include "rsim/contrastive.hpp"

#include "rsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rsim {

namespace {

constexpr double kBeta1 = 0.9;
constexpr double kBeta2 = 0.999;
constexpr double kEps = 1e-8;

struct PairGrad {
    Vec dp1, dp2;
    double loss = 0.0;
};

// Loss and gradients w.r.t. the two projected vectors.
PairGrad pair_loss(const Vec& p1, const Vec& p2, int label, double margin) {
    PairGrad out;
    out.dp1.assign(p1.size(), 0.0);
    out.dp2.assign(p2.size(), 0.0);
    const double n1 = std::sqrt(dot(p1.data(), p1.data(), p1.size()));
    const double n2 = std::sqrt(dot(p2.data(), p2.data(), p2.size()));
    if (n1 < 1e-12 || n2 < 1e-12) return out; // degenerate projection, no signal
    const double c = dot(p1.data(), p2.data(), p1.size()) / (n1 * n2);
    const double dist = 1.0 - c;
    double dloss_dc = 0.0;
    if (label > 0) {
        out.loss = dist * dist;
        dloss_dc = -2.0 * dist;
    } else {
        const double h = margin - dist;
        if (h > 0.0) {
            out.loss = h * h;
            dloss_dc = 2.0 * h;
        }
    }
    if (dloss_dc != 0.0) {
        for (std::size_t i = 0; i < p1.size(); ++i) {
            out.dp1[i] = dloss_dc * (p2[i] / (n1 * n2) - c * p1[i] / (n1 * n1));
            out.dp2[i] = dloss_dc * (p1[i] / (n1 * n2) - c * p2[i] / (n2 * n2));
        }
    }
    return out;
}

} // namespace

ContrastiveModel::ContrastiveModel(ContrastiveConfig config, Tensor w, Tensor b)
    : config_(config), w_(std::move(w)), b_(std::move(b)) {
    if (w_.rows != config_.proj_dim || w_.cols != config_.emb_dim ||
        b_.rows != config_.proj_dim || b_.cols != 1)
        throw Error("ContrastiveModel: projection shape mismatch");
    const bool all_zero =
        std::all_of(w_.data.begin(), w_.data.end(), [](double x) { return x == 0.0; });
    if (all_zero)
        throw Error("ContrastiveModel: zero-initialized projection rejected (every input "
                    "would collapse to one point)");
}

ContrastiveModel ContrastiveModel::initialize(const ContrastiveConfig& config,
                                              std::uint64_t seed) {
    Tensor w("proj.w", config.proj_dim, config.emb_dim);
    Tensor b("proj.b", config.proj_dim, 1);
    Rng rng(derive_seed(seed, "contrastive-init"));
    const double bound = std::sqrt(6.0 / static_cast<double>(config.emb_dim));
    for (double& x : w.data) x = rng.uniform(-bound, bound);
    ContrastiveModel model(config, std::move(w), std::move(b));
    model.meta.seed = seed;
    return model;
}

Vec ContrastiveModel::project(std::span<const double> e) const {
    if (e.size() != config_.emb_dim)
        throw Error("ContrastiveModel::project: embedding dim mismatch");
    Vec p(config_.proj_dim, 0.0);
    matvec(w_, e.data(), p.data());
    for (std::size_t r = 0; r < p.size(); ++r) p[r] += b_.data[r];
    return p;
}

double ContrastiveModel::score(std::span<const double> e1, std::span<const double> e2) const {
    const Vec p1 = project(e1);
    const Vec p2 = project(e2);
    const double n1 = std::sqrt(dot(p1.data(), p1.data(), p1.size()));
    const double n2 = std::sqrt(dot(p2.data(), p2.data(), p2.size()));
    if (n1 == 0.0 || n2 == 0.0) return 0.0;
    return std::clamp(dot(p1.data(), p2.data(), p1.size()) / (n1 * n2), -1.0, 1.0);
}

double contrastive_loss(const ContrastiveModel& model, std::span<const EmbPair> batch) {
    if (batch.empty()) throw Error("contrastive_loss: empty batch");
    double acc = 0.0;
    for (const EmbPair& ex : batch) {
        const Vec p1 = model.project(ex.e1);
        const Vec p2 = model.project(ex.e2);
        acc += pair_loss(p1, p2, ex.label, model.config().margin).loss;
    }
    return acc / static_cast<double>(batch.size());
}

ContrastiveModel train_contrastive_baseline(const std::vector<EmbPair>& train_set,
                                            const std::vector<EmbPair>& val_set,
                                            const ContrastiveConfig& model_config,
                                            const TrainConfig& train_config) {
    train_config.validate();
    if (train_set.empty() || val_set.empty())
        throw Error("train_contrastive_baseline: train and val sets must be nonempty");

    ContrastiveModel model = ContrastiveModel::initialize(model_config, train_config.seed);
    Tensor gm_w("m", model_config.proj_dim, model_config.emb_dim);
    Tensor gv_w("v", model_config.proj_dim, model_config.emb_dim);
    Tensor gm_b("m", model_config.proj_dim, 1);
    Tensor gv_b("v", model_config.proj_dim, 1);

    Rng order_rng(derive_seed(train_config.seed, "contrastive-order"));
    std::vector<std::size_t> order(train_set.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    Tensor best_w = model.weight();
    Vec best_b = model.bias().data;
    double best_val = contrastive_loss(model, val_set);
    std::size_t patience_used = 0, step = 0, epochs_run = 0;

    for (std::size_t epoch = 1; epoch <= train_config.max_epochs; ++epoch) {
        epochs_run = epoch;
        order_rng.shuffle(order);
        double epoch_loss_sum = 0.0;
        for (std::size_t b0 = 0; b0 < order.size(); b0 += train_config.batch_size) {
            const std::size_t bn = std::min(train_config.batch_size, order.size() - b0);
            Tensor gw("gw", model_config.proj_dim, model_config.emb_dim);
            Tensor gb("gb", model_config.proj_dim, 1);
            double batch_loss_sum = 0.0;
            for (std::size_t bi = 0; bi < bn; ++bi) {
                const EmbPair& ex = train_set[order[b0 + bi]];
                const Vec p1 = model.project(ex.e1);
                const Vec p2 = model.project(ex.e2);
                PairGrad pg = pair_loss(p1, p2, ex.label, model_config.margin);
                batch_loss_sum += pg.loss;
                const double scale = 1.0 / static_cast<double>(bn);
                for (double& g : pg.dp1) g *= scale;
                for (double& g : pg.dp2) g *= scale;
                outer_acc(gw, pg.dp1.data(), ex.e1.data());
                outer_acc(gw, pg.dp2.data(), ex.e2.data());
                for (std::size_t r = 0; r < model_config.proj_dim; ++r)
                    gb.data[r] += pg.dp1[r] + pg.dp2[r];
            }
            if (!std::isfinite(batch_loss_sum))
                throw NonFiniteTraining("non-finite contrastive loss at epoch " +
                                        std::to_string(epoch) + ", batch " +
                                        std::to_string(b0 / train_config.batch_size) +
                                        ", learning rate " +
                                        std::to_string(train_config.learning_rate));
            epoch_loss_sum += batch_loss_sum;
            ++step;
            const double bc1 = 1.0 - std::pow(kBeta1, static_cast<double>(step));
            const double bc2 = 1.0 - std::pow(kBeta2, static_cast<double>(step));
            auto apply = [&](Tensor& p, const Tensor& g, Tensor& m, Tensor& v) {
                for (std::size_t i = 0; i < p.size(); ++i) {
                    m.data[i] = kBeta1 * m.data[i] + (1.0 - kBeta1) * g.data[i];
                    v.data[i] = kBeta2 * v.data[i] + (1.0 - kBeta2) * g.data[i] * g.data[i];
                    p.data[i] -= train_config.learning_rate *
                                 (m.data[i] / bc1) / (std::sqrt(v.data[i] / bc2) + kEps);
                    p.data[i] -= train_config.learning_rate * train_config.weight_decay *
                                 p.data[i];
                }
            };
            apply(model.weight(), gw, gm_w, gv_w);
            apply(model.bias(), gb, gm_b, gv_b);
        }
        model.meta.epoch_train_loss.push_back(epoch_loss_sum /
                                              static_cast<double>(train_set.size()));
        const double val_loss = contrastive_loss(model, val_set);
        model.meta.epoch_val_loss.push_back(val_loss);
        if (val_loss < best_val) {
            best_val = val_loss;
            best_w = model.weight();
            best_b = model.bias().data;
            patience_used = 0;
        } else if (++patience_used >= train_config.early_stopping_patience) {
            break;
        }
    }

    model.weight() = std::move(best_w);
    model.bias().data = std::move(best_b);
    model.meta.seed = train_config.seed;
    model.meta.epochs_run = epochs_run;
    model.meta.best_val_loss = best_val;
    return model;
}

json ContrastiveModel::to_json() const {
    return json{
        {"format_version", kFormatVersion},
        {"kind", "contrastive"},
        {"embedding", {{"kind", "char3_fnv1a"}, {"dims", config_.emb_dim}}},
        {"proj_dim", config_.proj_dim},
        {"margin", config_.margin},
        {"weights",
         {{"proj.w", {{"shape", {w_.rows, w_.cols}}, {"values", w_.data}}},
          {"proj.b", {{"shape", {b_.rows, b_.cols}}, {"values", b_.data}}}}},
        {"training",
         {{"seed", meta.seed},
          {"epochs", meta.epochs_run},
          {"best_val_loss", std::isfinite(meta.best_val_loss)
                                ? json(meta.best_val_loss)
                                : json(nullptr)}}},
    };
}

ContrastiveModel ContrastiveModel::from_json(const json& j) {
    try {
        if (j.at("format_version").get<int>() != kFormatVersion)
            throw Error("unsupported model format_version");
        if (j.at("kind").get<std::string>() != "contrastive")
            throw Error("not a contrastive model file");
        ContrastiveConfig cfg;
        cfg.emb_dim = j.at("embedding").at("dims").get<std::size_t>();
        cfg.proj_dim = j.at("proj_dim").get<std::size_t>();
        cfg.margin = j.at("margin").get<double>();
        Tensor w("proj.w", cfg.proj_dim, cfg.emb_dim);
        Tensor b("proj.b", cfg.proj_dim, 1);
        w.data = j.at("weights").at("proj.w").at("values").get<std::vector<double>>();
        b.data = j.at("weights").at("proj.b").at("values").get<std::vector<double>>();
        if (w.data.size() != cfg.proj_dim * cfg.emb_dim || b.data.size() != cfg.proj_dim)
            throw Error("contrastive model tensor size mismatch");
        ContrastiveModel model(cfg, std::move(w), std::move(b));
        model.meta.seed = j.at("training").at("seed").get<std::uint64_t>();
        model.meta.epochs_run = j.at("training").at("epochs").get<std::size_t>();
        const json& bvl = j.at("training").at("best_val_loss");
        model.meta.best_val_loss =
            bvl.is_null() ? std::numeric_limits<double>::infinity() : bvl.get<double>();
        return model;
    } catch (const json::exception& e) {
        throw IoError(std::string("malformed contrastive model file: ") + e.what());
    }
}

} // namespace rsim
