#pragma once

#include "rsim/contrastive.hpp"
#include "rsim/corpus.hpp"
#include "rsim/embedding.hpp"
#include "rsim/evalstats.hpp"
#include "rsim/features.hpp"
#include "rsim/interpret.hpp"
#include "rsim/residual.hpp"
#include "rsim/simspace.hpp"

#include <string>
#include <vector>

namespace rsim {

// Per-unique-document artifacts for one pair set.
struct PreparedDocs {
    std::vector<FeatureVector> raw;
    std::vector<Vec> z;   // standardized
    std::vector<Vec> emb;
};

/// Fits standardization statistics on the unique documents of a (training)
/// pair set.
StandardizationStats fit_stats_on_pairs(const PairSet& pairs, const FeatureRegistry& registry);

PreparedDocs prepare_docs(const PairSet& pairs, const FeatureRegistry& registry,
                          const StandardizationStats& stats, const EmbeddingConfig& embedding);

/// Builds training/scoring examples: per pair, the standardized vectors,
/// embeddings, interpretable cosine, and target = label - sim.
std::vector<PairExample> build_examples(const PairSet& pairs, const PreparedDocs& docs);

std::vector<EmbPair> build_emb_pairs(const PairSet& pairs, const PreparedDocs& docs);

struct PairScores {
    std::vector<PairScore> scores;
    std::size_t zero_norm_count = 0;

    ScoredSet rs_set(std::string tag = "rs") const;
    ScoredSet interp_set(std::string tag = "interpretable") const;
    std::vector<int> labels; // per pair
};

/// Scores every pair with the residual model: sim, predicted residual,
/// final score, labels, IntConf, flip.
PairScores score_pairs(const PairSet& pairs, const ResidualModel& model,
                       const StandardizationStats& stats, double threshold);

/// Scores every pair with the contrastive baseline (cosine of projected
/// embeddings).
ScoredSet score_pairs_contrastive(const PairSet& pairs, const ContrastiveModel& model);

} // namespace rsim
