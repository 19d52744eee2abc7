#pragma once

#include "rsim/jsonio.hpp"
#include "rsim/linalg.hpp"
#include "rsim/rng.hpp"

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rsim {

// The three residual-head architectures. "combined" pools interpretable
// feature vectors and document embeddings through a single-head attention
// layer; "only_neural" feeds pair-symmetric embedding combinations straight
// into the head; "appended" does the same with the feature vectors
// concatenated in.
enum class Variant { Combined, OnlyNeural, Appended };

std::string_view variant_name(Variant v);
Variant variant_from_name(std::string_view name);

struct ModelConfig {
    Variant variant = Variant::Combined;
    std::size_t fv_dim = 0;   // standardized feature vector width
    std::size_t emb_dim = 256;
    std::size_t attn_width = 256; // shared projection width (combined only)
    std::size_t hidden1 = 128;
    std::size_t hidden2 = 64;
    double dropout = 0.1;        // train-time only, on the two hidden layers
    double output_scale = 2.0;   // forward output is tanh(.) * output_scale
    std::string registry_name;
    std::string registry_fingerprint;
    std::size_t embedding_dims = 256; // serialized embedding config

    std::size_t head_input_dim() const;
};

struct TrainConfig {
    double learning_rate = 1e-3;
    std::size_t max_epochs = 10;
    std::size_t batch_size = 32;
    std::size_t early_stopping_patience = 2; // epochs without val improvement
    double weight_decay = 1e-4;              // decoupled (AdamW-style)
    std::uint64_t seed = 0;

    void validate() const; // throws rsim::Error on bad values
};

struct TrainingMeta {
    std::uint64_t seed = 0;
    std::size_t epochs_run = 0;
    double best_val_loss = std::numeric_limits<double>::infinity();
    std::vector<double> epoch_train_loss;
    std::vector<double> epoch_val_loss;
};

// One training/scoring example: standardized feature vectors, document
// embeddings, the interpretable cosine, and the ground-truth residual
// target (label - sim).
struct PairExample {
    Vec fv1, fv2;
    Vec e1, e2;
    double sim = 0.0;
    double target = 0.0;
    int label = -1;
};

/// Mean of squared differences. Throws rsim::Error on length mismatch or
/// empty input.
double mse_loss(std::span<const double> preds, std::span<const double> targets);

class ResidualModel {
public:
    ResidualModel() = default;

    /// Kaiming-style uniform fan-in init; the output layer starts at zero so
    /// an untrained model predicts "no correction".
    static ResidualModel initialize(const ModelConfig& config, std::uint64_t seed);

    /// Inference-mode forward (no dropout). Output lies strictly inside
    /// (-output_scale, +output_scale). Throws rsim::Error on dimension
    /// mismatch.
    double forward(std::span<const double> fv1, std::span<const double> fv2,
                   std::span<const double> e1, std::span<const double> e2) const;

    const ModelConfig& config() const { return config_; }
    std::vector<Tensor>& tensors() { return params_; }
    const std::vector<Tensor>& tensors() const { return params_; }

    TrainingMeta meta;

    json to_json() const;
    static ResidualModel from_json(const json& j); // validates shapes

private:
    ModelConfig config_;
    std::vector<Tensor> params_;

    friend struct ForwardPass;
};

/// Eval-mode batch MSE against each example's target.
double batch_loss(const ResidualModel& model, std::span<const PairExample> batch);

/// Eval-mode analytic gradients of batch_loss w.r.t. every parameter, in the
/// same tensor order as model.tensors().
std::vector<Tensor> batch_gradients(const ResidualModel& model,
                                    std::span<const PairExample> batch);

/// Mini-batch gradient descent with decoupled weight decay (beta1 = 0.9,
/// beta2 = 0.999, eps = 1e-8) on MSE against ground-truth residuals, with
/// early stopping on validation loss. Returns the best-validation
/// checkpoint. Deterministic under config.seed. Throws NonFiniteTraining
/// with epoch/batch diagnostics if the loss leaves the reals.
ResidualModel train(const std::vector<PairExample>& train_set,
                    const std::vector<PairExample>& val_set, const ModelConfig& model_config,
                    const TrainConfig& train_config);

} // namespace rsim
