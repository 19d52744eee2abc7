#pragma once

#include "rsim/features.hpp"
#include "rsim/jsonio.hpp"
#include "rsim/residual.hpp"
#include "rsim/simspace.hpp"

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rsim {

/// Interpretability confidence in [0, 1]: the interpretable score's share of
/// the final decision. For a same-author prediction the interpretable
/// contribution is its distance from -1, i.e. (1 + sim) / (1 + sim + |res|);
/// for different-author it is the distance from +1, (1 - sim) / (1 - sim +
/// |res|). A zero denominator yields 0.
double intconf(double sim, double residual_pred, int predicted_label);

struct FlipInfo {
    int g2v_label = -1;       // interpretable-only verdict
    int predicted_label = -1; // final verdict
    bool flipped = false;
};

/// Compares the interpretable-only verdict against the final one.
FlipInfo detect_flip(double sim, double final_score, double threshold);

/// Builds a fully consistent PairScore (final = sim + residual exactly,
/// labels from classify, intconf from the predicted direction).
PairScore score_pair(double sim, double residual_pred, double threshold,
                     bool sim_zero_norm = false);

enum class Direction { Same, Different };

struct RankedFeature {
    std::string id;
    double score = 0.0;
    double val1 = 0.0, val2 = 0.0;         // standardized values (what the score uses)
    double raw1 = 0.0, raw2 = 0.0;         // raw frequencies, checkable against evidence
    bool opposite_sign = false;            // same-direction score went negative
    std::vector<Span> evidence1, evidence2;
};

/// Ranks features by |v1| + |v2| - |v1 - v2| (same) or |v1 - v2|
/// (different) over the standardized values, ties broken by registry order,
/// and attaches both documents' raw values and evidence spans. Features
/// whose same-direction score is negative (opposite-sign values) stay in
/// the ordering but are flagged.
std::vector<RankedFeature> rank_features(const FeatureVector& raw1, const FeatureVector& raw2,
                                         std::span<const double> z1,
                                         std::span<const double> z2,
                                         const FeatureRegistry& registry, Direction direction,
                                         std::size_t n);

struct Explanation {
    std::string pair_id;
    PairScore score;
    Direction direction = Direction::Different;
    std::size_t n = 5;
    std::vector<RankedFeature> top_features;
};

/// End-to-end explanation for one document pair: extract -> standardize ->
/// cosine -> residual forward -> PairScore (+ IntConf, flip) -> ranked
/// features with evidence from the raw extraction.
Explanation explain_pair(std::string_view doc1, std::string_view doc2,
                         const ResidualModel& model, const StandardizationStats& stats,
                         double threshold, std::size_t n, std::string pair_id = "pair_0");

struct IntconfHistogram {
    std::array<std::size_t, 20> bins{}; // over [0, 1]; 1.0 lands in the last bin
    double mean = 0.0;
    std::size_t n = 0;
};

IntconfHistogram intconf_distribution(std::span<const PairScore> scores);
json histogram_to_json(const IntconfHistogram& h);

json explanation_to_json(const Explanation& e);
std::string explanation_text(const Explanation& e, std::string_view doc1,
                             std::string_view doc2);

} // namespace rsim
