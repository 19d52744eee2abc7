#pragma once

#include "rsim/jsonio.hpp"
#include "rsim/linalg.hpp"
#include "rsim/residual.hpp" // TrainConfig, TrainingMeta

#include <span>
#include <vector>

namespace rsim {

struct ContrastiveConfig {
    std::size_t emb_dim = 256;
    std::size_t proj_dim = 64;
    double margin = 0.5; // cosine-distance margin for different-author pairs
};

struct EmbPair {
    Vec e1, e2;
    int label = -1; // +1 same author, -1 different
};

/// Siamese baseline: one shared dense projection over document embeddings,
/// scored by the cosine of the projected pair, trained with a contrastive
/// loss (same-author pairs pulled together, different-author pairs pushed
/// past the margin in cosine distance).
class ContrastiveModel {
public:
    ContrastiveModel() = default;

    /// Throws rsim::Error if the projection weights are all zero (the model
    /// would collapse every input to the same point).
    ContrastiveModel(ContrastiveConfig config, Tensor w, Tensor b);

    static ContrastiveModel initialize(const ContrastiveConfig& config, std::uint64_t seed);

    Vec project(std::span<const double> e) const;
    double score(std::span<const double> e1, std::span<const double> e2) const;

    const ContrastiveConfig& config() const { return config_; }
    const Tensor& weight() const { return w_; }
    Tensor& weight() { return w_; }
    const Tensor& bias() const { return b_; }
    Tensor& bias() { return b_; }

    TrainingMeta meta;

    json to_json() const;
    static ContrastiveModel from_json(const json& j);

private:
    ContrastiveConfig config_;
    Tensor w_, b_;
};

double contrastive_loss(const ContrastiveModel& model, std::span<const EmbPair> batch);

/// Same optimizer and early-stopping scheme as the residual trainer.
ContrastiveModel train_contrastive_baseline(const std::vector<EmbPair>& train_set,
                                            const std::vector<EmbPair>& val_set,
                                            const ContrastiveConfig& model_config,
                                            const TrainConfig& train_config);

} // namespace rsim
